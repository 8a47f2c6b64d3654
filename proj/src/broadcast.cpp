#include "sbs/broadcast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sbs/info.hpp"

namespace sbs {

namespace {

long stride_of(const SubsystemDims& dims, int subsystem) {
    long s = 1;
    for (int k = dims.count() - 1; k > subsystem; --k) s *= dims[k];
    return s;
}

void check_probabilities(const std::vector<double>& p, double tol) {
    if (p.empty()) throw std::invalid_argument("empty probability list");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= -tol)) throw std::invalid_argument("negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > std::max(tol, 1e-12) * 10.0)
        throw std::invalid_argument("probabilities do not sum to 1");
}

}  // namespace

int SbsSpec::environment_count() const {
    return branches.empty() ? 0 : static_cast<int>(branches.front().size());
}

void SbsSpec::validate(double tol) const {
    check_probabilities(probabilities, tol);
    const int n = label_count();
    if (static_cast<int>(pointer_basis.size()) != n)
        throw std::invalid_argument("pointer basis size != label count");
    const long ds = pointer_basis.front().size();
    if (ds < n) throw std::invalid_argument("more labels than system dimensions");
    for (int i = 0; i < n; ++i) {
        if (pointer_basis[static_cast<size_t>(i)].size() != ds)
            throw std::invalid_argument("pointer basis dimension mismatch");
        for (int j = 0; j <= i; ++j) {
            const Cx g = pointer_basis[static_cast<size_t>(i)].adjoint() *
                         pointer_basis[static_cast<size_t>(j)];
            const double target = i == j ? 1.0 : 0.0;
            if (std::abs(g - Cx(target, 0.0)) > tol)
                throw std::invalid_argument("pointer basis not orthonormal");
        }
    }
    if (static_cast<int>(branches.size()) != n)
        throw std::invalid_argument("branch rows != label count");
    const int envs = environment_count();
    if (envs < 1) throw std::invalid_argument("need at least one environment");
    for (int i = 0; i < n; ++i) {
        const auto& row = branches[static_cast<size_t>(i)];
        if (static_cast<int>(row.size()) != envs)
            throw std::invalid_argument("ragged branch table");
        for (int k = 0; k < envs; ++k) {
            row[static_cast<size_t>(k)].validate(tol);
            if (row[static_cast<size_t>(k)].dims.total() !=
                branches.front()[static_cast<size_t>(k)].dims.total())
                throw std::invalid_argument("environment dimension varies across labels");
        }
    }
    for (int k = 0; k < envs; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) {
                const Matrix prod = branches[static_cast<size_t>(i)][static_cast<size_t>(k)].entries *
                                    branches[static_cast<size_t>(j)][static_cast<size_t>(k)].entries;
                if (trace_norm(prod) > std::max(tol, 1e-12) * 10.0)
                    throw std::invalid_argument("branch supports overlap on environment " +
                                                std::to_string(k));
            }
}

DensityOperator build_sbs(const SbsSpec& spec, double tol) {
    spec.validate(tol);
    const int n = spec.label_count();
    const int envs = spec.environment_count();
    std::vector<int> extents{static_cast<int>(spec.pointer_basis.front().size())};
    for (int k = 0; k < envs; ++k)
        extents.push_back(spec.branches.front()[static_cast<size_t>(k)].dims.total());
    SubsystemDims dims{extents};
    Matrix acc = Matrix::Zero(dims.total(), dims.total());
    for (int i = 0; i < n; ++i) {
        const Vector& x = spec.pointer_basis[static_cast<size_t>(i)];
        Matrix term = x * x.adjoint();
        for (int k = 0; k < envs; ++k)
            term = tensor(term, spec.branches[static_cast<size_t>(i)][static_cast<size_t>(k)].entries);
        acc += spec.probabilities[static_cast<size_t>(i)] * term;
    }
    return DensityOperator::checked(std::move(dims), std::move(acc), std::max(tol, 1e-8));
}

SbsReport check_sbs(const DensityOperator& rho, int system, const SbsTolerances& tol) {
    rho.validate(std::max(tol.residual, default_tol));
    const int parts = rho.dims.count();
    if (system < 0 || system >= parts)
        throw std::invalid_argument("system index out of range");
    if (parts < 2) throw std::invalid_argument("no environment subsystems");

    SbsReport rep;
    const DensityOperator rho_s = partial_trace(rho, {system});
    const EigResult eig = eig_hermitian(rho_s.entries);
    const int ds = rho.dims[system];
    rep.spectrum.assign(eig.values.data(), eig.values.data() + ds);
    for (int i = 0; i < ds; ++i) rep.pointer_basis.push_back(eig.vectors.col(i));
    rep.system_entropy = shannon_entropy(rep.spectrum);

    std::vector<int> kept;
    for (int i = 0; i < ds; ++i)
        if (eig.values(i) > tol.drop_probability) kept.push_back(i);
    for (size_t a = 0; a + 1 < kept.size(); ++a) {
        const double gap = eig.values(kept[a]) - eig.values(kept[a + 1]);
        if (gap < tol.degeneracy_gap)
            throw std::runtime_error(
                "pointer basis ill-defined: system eigenvalues " +
                std::to_string(eig.values(kept[a])) + " and " +
                std::to_string(eig.values(kept[a + 1])) + " are degenerate within " +
                std::to_string(tol.degeneracy_gap));
    }

    // <x_i| rho |x_j> as operators on the joined environment space.
    const long st = stride_of(rho.dims, system);
    const long env_total = rho.dims.total() / ds;
    auto block = [&](int i, int j) {
        const Vector& vi = rep.pointer_basis[static_cast<size_t>(i)];
        const Vector& vj = rep.pointer_basis[static_cast<size_t>(j)];
        Matrix b = Matrix::Zero(env_total, env_total);
        for (long er = 0; er < env_total; ++er) {
            const long gr0 = (er / st) * ds * st + er % st;
            for (long ec = 0; ec < env_total; ++ec) {
                const long gc0 = (ec / st) * ds * st + ec % st;
                Cx acc(0.0, 0.0);
                for (int sr = 0; sr < ds; ++sr)
                    for (int sc = 0; sc < ds; ++sc)
                        acc += std::conj(vi(sr)) * vj(sc) *
                               rho.entries(gr0 + sr * st, gc0 + sc * st);
                b(er, ec) = acc;
            }
        }
        return b;
    };

    rep.coherence_residual = 0.0;
    for (size_t a = 0; a < kept.size(); ++a)
        for (size_t b = a + 1; b < kept.size(); ++b)
            rep.coherence_residual += 2.0 * trace_norm(block(kept[a], kept[b]));
    rep.coherence_pass = rep.coherence_residual <= tol.residual;

    std::vector<int> env_extents;
    std::vector<int> env_ids;  // original subsystem numbering
    for (int k = 0; k < parts; ++k)
        if (k != system) {
            env_extents.push_back(rho.dims[k]);
            env_ids.push_back(k);
        }
    const int envs = static_cast<int>(env_ids.size());
    const SubsystemDims env_dims{env_extents};

    std::vector<DensityOperator> branch;                    // indexed like `kept`
    std::vector<std::vector<DensityOperator>> marginals;    // [kept][env]
    for (int i : kept) {
        Matrix b = block(i, i);
        const double w = b.trace().real();
        branch.push_back(DensityOperator{env_dims, b / w});
        std::vector<DensityOperator> row;
        for (int k = 0; k < envs; ++k) row.push_back(partial_trace(branch.back(), {k}));
        marginals.push_back(std::move(row));
    }

    rep.distinguishability = Eigen::MatrixXd::Zero(ds, ds);
    double worst_overlap = 0.0;
    for (size_t a = 0; a < kept.size(); ++a)
        for (size_t b = a + 1; b < kept.size(); ++b) {
            double m = 0.0;
            for (int k = 0; k < envs; ++k)
                m = std::max(m, generalized_overlap(marginals[a][static_cast<size_t>(k)],
                                                    marginals[b][static_cast<size_t>(k)]));
            rep.distinguishability(kept[a], kept[b]) = m;
            rep.distinguishability(kept[b], kept[a]) = m;
            worst_overlap = std::max(worst_overlap, m);
        }
    rep.distinguishability_pass = worst_overlap <= tol.residual;

    rep.product_deviation.assign(static_cast<size_t>(ds), 0.0);
    double worst_product = 0.0;
    for (size_t a = 0; a < kept.size(); ++a) {
        Matrix prod = marginals[a][0].entries;
        for (int k = 1; k < envs; ++k) prod = tensor(prod, marginals[a][static_cast<size_t>(k)].entries);
        const double dev = trace_norm(branch[a].entries - prod);
        rep.product_deviation[static_cast<size_t>(kept[a])] = dev;
        worst_product = std::max(worst_product, dev);
    }
    rep.product_pass = worst_product <= tol.residual;

    std::vector<std::vector<int>> subsets;
    if (envs <= 12) {
        for (unsigned mask = 1; mask < (1u << envs); ++mask) {
            std::vector<int> s;
            for (int k = 0; k < envs; ++k)
                if (mask & (1u << k)) s.push_back(env_ids[static_cast<size_t>(k)]);
            subsets.push_back(std::move(s));
        }
    } else {
        std::vector<int> s;
        for (int k = 0; k < envs; ++k) {
            s.push_back(env_ids[static_cast<size_t>(k)]);
            subsets.push_back(s);
        }
    }
    rep.max_entropic_gap = 0.0;
    for (auto& sub : subsets) {
        std::vector<int> keep = sub;
        keep.push_back(system);
        std::sort(keep.begin(), keep.end());
        const int pos = static_cast<int>(std::lower_bound(keep.begin(), keep.end(), system) -
                                         keep.begin());
        const DensityOperator red = partial_trace(rho, keep);
        const double info = mutual_information(red, {pos});
        EntropicEntry e;
        e.subset = sub;
        e.mutual_information = info;
        e.gap = std::abs(info - rep.system_entropy);
        rep.max_entropic_gap = std::max(rep.max_entropic_gap, e.gap);
        rep.entropic_sweep.push_back(std::move(e));
    }
    rep.entropic_pass = rep.max_entropic_gap <= tol.residual;

    rep.verdict = rep.coherence_pass && rep.distinguishability_pass && rep.product_pass &&
                  rep.entropic_pass;
    return rep;
}

double bohr_residual(const DensityOperator& rho, int system,
                     const std::vector<Vector>& system_basis,
                     const std::vector<VonNeumannMeasurement>& env) {
    return trace_norm(pinch(rho, system, system_basis, env) - rho.entries);
}

long JointOutcomeTensor::index_of(const std::vector<int>& idx) const {
    if (idx.size() != shape.size()) throw std::invalid_argument("index rank mismatch");
    long flat = 0;
    for (size_t k = 0; k < shape.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= shape[k]) throw std::invalid_argument("index out of range");
        flat = flat * shape[k] + idx[k];
    }
    return flat;
}

void JointOutcomeTensor::validate(double tol) const {
    if (shape.size() < 2)
        throw std::invalid_argument("need a system axis and at least one observer");
    long size = 1;
    for (int d : shape) {
        if (d < 1) throw std::invalid_argument("empty axis");
        size *= d;
    }
    if (static_cast<long>(p.size()) != size)
        throw std::invalid_argument("entry count does not match shape");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= -tol)) throw std::invalid_argument("negative probability entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > std::max(tol, 1e-12) * 10.0)
        throw std::invalid_argument("tensor does not sum to 1");
}

AgreementResult agreement_check(const JointOutcomeTensor& joint, double tol) {
    joint.validate(tol);
    const int axes = static_cast<int>(joint.shape.size());
    const int labels = joint.shape[0];

    // pairwise marginals p(system label, observer outcome)
    std::vector<Eigen::MatrixXd> marg;
    for (int o = 1; o < axes; ++o)
        marg.push_back(Eigen::MatrixXd::Zero(labels, joint.shape[static_cast<size_t>(o)]));
    std::vector<int> idx(static_cast<size_t>(axes), 0);
    for (size_t flat = 0; flat < joint.p.size(); ++flat) {
        const double v = joint.p[flat];
        if (v > 0.0)
            for (int o = 1; o < axes; ++o)
                marg[static_cast<size_t>(o - 1)](idx[0], idx[static_cast<size_t>(o)]) += v;
        for (int k = axes - 1; k >= 0; --k) {
            if (++idx[static_cast<size_t>(k)] < joint.shape[static_cast<size_t>(k)]) break;
            idx[static_cast<size_t>(k)] = 0;
        }
    }

    AgreementResult res;
    for (int o = 1; o < axes; ++o) {
        std::vector<int> map(static_cast<size_t>(joint.shape[static_cast<size_t>(o)]), -1);
        for (int j = 0; j < joint.shape[static_cast<size_t>(o)]; ++j) {
            int best = -1;
            double best_p = tol;
            for (int i = 0; i < labels; ++i)
                if (marg[static_cast<size_t>(o - 1)](i, j) > best_p) {
                    best_p = marg[static_cast<size_t>(o - 1)](i, j);
                    best = i;
                }
            map[static_cast<size_t>(j)] = best;
        }
        res.relabeling.push_back(std::move(map));
    }

    std::fill(idx.begin(), idx.end(), 0);
    for (size_t flat = 0; flat < joint.p.size(); ++flat) {
        if (joint.p[flat] > tol) {
            for (int o = 1; o < axes; ++o)
                if (res.relabeling[static_cast<size_t>(o - 1)][static_cast<size_t>(
                        idx[static_cast<size_t>(o)])] != idx[0]) {
                    res.pass = false;
                    res.witness = AgreementWitness{idx, joint.p[flat]};
                    return res;
                }
        }
        for (int k = axes - 1; k >= 0; --k) {
            if (++idx[static_cast<size_t>(k)] < joint.shape[static_cast<size_t>(k)]) break;
            idx[static_cast<size_t>(k)] = 0;
        }
    }
    res.pass = true;
    return res;
}

DensityOperator cc_broadcast_channel(const DensityOperator& rho_s, const SbsSpec& spec,
                                     double tol) {
    spec.validate(tol);
    rho_s.validate(tol);
    const long ds = spec.pointer_basis.front().size();
    if (rho_s.dims.total() != ds)
        throw std::invalid_argument("input dimension does not match the pointer basis");
    const int n = spec.label_count();
    std::vector<double> q(static_cast<size_t>(n), 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vector& x = spec.pointer_basis[static_cast<size_t>(i)];
        q[static_cast<size_t>(i)] = std::max(0.0, (x.adjoint() * rho_s.entries * x)(0).real());
        total += q[static_cast<size_t>(i)];
    }
    if (std::abs(total - 1.0) > std::max(tol, 1e-12) * 100.0)
        throw std::invalid_argument("input has weight outside the pointer-basis span");

    const int envs = spec.environment_count();
    std::vector<int> extents;
    for (int k = 0; k < envs; ++k)
        extents.push_back(spec.branches.front()[static_cast<size_t>(k)].dims.total());
    SubsystemDims dims{extents};
    Matrix acc = Matrix::Zero(dims.total(), dims.total());
    for (int i = 0; i < n; ++i) {
        Matrix term = spec.branches[static_cast<size_t>(i)][0].entries;
        for (int k = 1; k < envs; ++k)
            term = tensor(term, spec.branches[static_cast<size_t>(i)][static_cast<size_t>(k)].entries);
        acc += (q[static_cast<size_t>(i)] / total) * term;
    }
    return DensityOperator::checked(std::move(dims), std::move(acc), std::max(tol, 1e-8));
}

DensityOperator witness_state(double p, SystemSlot slot) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("witness weight must lie strictly inside (0,1)");
    const double a = std::sqrt(p);
    const double b = std::sqrt(1.0 - p);
    Vector v1 = Vector::Zero(4);
    v1(0) = a;
    v1(3) = b;
    Vector v2 = Vector::Zero(4);
    if (slot == SystemSlot::Second) {  // system marginal diag(ptilde,.) on factor 1
        v2(1) = a;
        v2(2) = b;
    } else {
        v2(2) = a;
        v2(1) = b;
    }
    Matrix m = p * (v1 * v1.adjoint()) + (1.0 - p) * (v2 * v2.adjoint());
    return DensityOperator::checked(SubsystemDims{2, 2}, std::move(m));
}

WitnessReport witness_report(double p, double tol) {
    if (std::abs(p - 0.5) < 1e-12)
        throw std::invalid_argument("p = 1/2 is excluded: the witness is separable there");
    const DensityOperator rho = witness_state(p, SystemSlot::First);
    const DensityOperator rho_sys = partial_trace(rho, {0});

    WitnessReport rep;
    rep.p = p;
    rep.ptilde = p * p + (1.0 - p) * (1.0 - p);
    rep.system_entropy = vn_entropy(rho_sys);
    const EigResult se = eig_hermitian(rho_sys.entries);
    rep.spectrum_entropy = shannon_entropy({se.values(0), se.values(1)});
    rep.mutual_information = mutual_information(rho, {0});
    rep.entropic_gap = std::abs(rep.mutual_information - rep.system_entropy);
    rep.entropic_holds = rep.entropic_gap <= tol;
    const EigResult pt = eig_hermitian(partial_transpose(rho, 1));
    rep.ppt_min_eigenvalue = pt.values(pt.values.size() - 1);
    rep.ppt_violated = rep.ppt_min_eigenvalue < -tol;
    return rep;
}

}  // namespace sbs
