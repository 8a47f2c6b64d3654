#include <doctest.h>

#include <cmath>
#include <string>

#include "helpers.hpp"
#include "sbs/broadcast.hpp"
#include "sbs/info.hpp"
#include "sbs/qstate.hpp"

using namespace sbs;

namespace {

Vector ket(int k, int dim) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return v;
}

DensityOperator projector_state(const Vector& v, SubsystemDims dims) {
    return {std::move(dims), Matrix(v * v.adjoint())};
}

// sqrt(w)|000> + sqrt(1-w)|111>
DensityOperator ghz(double w) {
    Vector v = Vector::Zero(8);
    v(0) = std::sqrt(w);
    v(7) = std::sqrt(1.0 - w);
    return PureState{SubsystemDims{2, 2, 2}, v}.to_density();
}

SbsSpec two_qubit_env_spec() {
    SbsSpec spec;
    spec.probabilities = {0.3, 0.7};
    spec.pointer_basis = {ket(0, 2), ket(1, 2)};
    spec.branches = {{projector_state(ket(0, 2), SubsystemDims{2}),
                      projector_state(ket(0, 2), SubsystemDims{2})},
                     {projector_state(ket(1, 2), SubsystemDims{2}),
                      projector_state(ket(1, 2), SubsystemDims{2})}};
    return spec;
}

// diagonal system whose branches are entangled ACROSS the two environments:
// label i carries a Bell pair supported on coordinate block {2i, 2i+1}
DensityOperator cq_entangled_records() {
    Vector phi0 = Vector::Zero(16);
    phi0(0 * 4 + 0) = phi0(1 * 4 + 1) = 1.0 / std::sqrt(2.0);
    Vector phi1 = Vector::Zero(16);
    phi1(2 * 4 + 2) = phi1(3 * 4 + 3) = 1.0 / std::sqrt(2.0);
    Matrix m = 0.35 * tensor(Matrix(ket(0, 2) * ket(0, 2).adjoint()),
                             Matrix(phi0 * phi0.adjoint())) +
               0.65 * tensor(Matrix(ket(1, 2) * ket(1, 2).adjoint()),
                             Matrix(phi1 * phi1.adjoint()));
    return DensityOperator::checked(SubsystemDims{2, 4, 4}, std::move(m));
}

}  // namespace

TEST_CASE("broadcast spec validation rejects malformed input") {
    SbsSpec spec = two_qubit_env_spec();
    CHECK_NOTHROW(spec.validate());

    SbsSpec overlap = spec;
    overlap.branches[1][0] = overlap.branches[0][0];  // same record for both labels
    CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);

    SbsSpec skewed = spec;
    skewed.pointer_basis[1] = (ket(0, 2) + ket(1, 2)) / std::sqrt(2.0);
    CHECK_THROWS_AS(skewed.validate(), std::invalid_argument);

    SbsSpec ragged = spec;
    ragged.branches[0].pop_back();
    CHECK_THROWS_AS(ragged.validate(), std::invalid_argument);
}

TEST_CASE("built broadcast states certify across random specs") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 6; ++trial) {
        const int labels = 2 + trial % 2;
        const int envs = 1 + trial % 3;
        const SbsSpec spec = testutil::random_sbs_spec(rng, labels, envs);
        const DensityOperator rho = build_sbs(spec);
        CHECK(rho.dims.count() == envs + 1);
        CHECK_NOTHROW(rho.validate(1e-8));

        const SbsReport rep = check_sbs(rho, 0);
        CHECK(rep.verdict);
        CHECK(rep.coherence_residual < 1e-9);
        CHECK(rep.max_entropic_gap < 1e-9);
        CHECK(static_cast<int>(rep.entropic_sweep.size()) == (1 << envs) - 1);

        // spectrum = probabilities sorted descending, basis recovered up to phase
        std::vector<double> p = spec.probabilities;
        std::sort(p.begin(), p.end(), std::greater<>());
        for (size_t i = 0; i < p.size(); ++i) {
            CHECK(rep.spectrum[i] == doctest::Approx(p[i]).epsilon(1e-9));
            const double target = p[i];
            int match = -1;
            for (int j = 0; j < spec.label_count(); ++j)
                if (std::abs(spec.probabilities[static_cast<size_t>(j)] - target) < 1e-12)
                    match = j;
            REQUIRE(match >= 0);
            const Cx g = spec.pointer_basis[static_cast<size_t>(match)].dot(rep.pointer_basis[i]);
            CHECK(std::abs(g) == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("fixed two-environment state reports frozen values") {
    const DensityOperator rho = build_sbs(two_qubit_env_spec());
    const SbsReport rep = check_sbs(rho, 0);
    CHECK(rep.verdict);
    CHECK(rep.spectrum[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(rep.spectrum[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(rep.system_entropy == doctest::Approx(0.8812908992306927).epsilon(1e-12));
    CHECK(rep.entropic_sweep.size() == 3);
    for (const auto& e : rep.entropic_sweep)
        CHECK(e.mutual_information == doctest::Approx(rep.system_entropy).epsilon(1e-10));
    CHECK(rep.distinguishability.maxCoeff() < 1e-9);
    for (double d : rep.product_deviation) CHECK(d < 1e-9);
}

TEST_CASE("coherent branches fail the off-diagonal test") {
    const SbsReport rep = check_sbs(ghz(0.3), 0);
    CHECK_FALSE(rep.verdict);
    CHECK_FALSE(rep.coherence_pass);
    CHECK(rep.coherence_residual ==
          doctest::Approx(2.0 * std::sqrt(0.21)).epsilon(1e-10));
    CHECK(rep.distinguishability_pass);  // conditional records are orthogonal
    CHECK(rep.product_pass);
    // the full-environment subset sees a pure joint state: I = 2 H_S there
    CHECK_FALSE(rep.entropic_pass);
    CHECK(rep.max_entropic_gap == doctest::Approx(0.8812908992306927).epsilon(1e-9));
}

TEST_CASE("degenerate system spectrum is refused") {
    Matrix m = Matrix::Zero(8, 8);
    m(0, 0) = 0.5;
    m(7, 7) = 0.5;
    const DensityOperator rho{SubsystemDims{2, 2, 2}, m};
    CHECK_THROWS_WITH_AS(check_sbs(rho, 0), doctest::Contains("pointer basis ill-defined"),
                         std::runtime_error);
}

TEST_CASE("entangled records break only the product condition") {
    const SbsReport rep = check_sbs(cq_entangled_records(), 0);
    CHECK_FALSE(rep.verdict);
    CHECK(rep.coherence_pass);
    CHECK(rep.distinguishability_pass);
    CHECK(rep.entropic_pass);
    CHECK_FALSE(rep.product_pass);
    for (double d : rep.product_deviation)
        CHECK(d == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("non-disturbance residual: zero on fixed points, one on the cat state") {
    const SbsSpec spec = two_qubit_env_spec();
    const DensityOperator rho = build_sbs(spec);
    std::vector<VonNeumannMeasurement> env;
    for (int k = 1; k <= 2; ++k) {
        VonNeumannMeasurement m;
        m.subsystem = k;
        m.projectors = {Matrix(ket(0, 2) * ket(0, 2).adjoint()),
                        Matrix(ket(1, 2) * ket(1, 2).adjoint())};
        env.push_back(m);
    }
    CHECK(bohr_residual(rho, 0, spec.pointer_basis, env) < 1e-12);

    const double cat = bohr_residual(ghz(0.5), 0, spec.pointer_basis, env);
    CHECK(cat == doctest::Approx(1.0).epsilon(1e-12));

    // simultaneous relabeling of basis and projector families changes nothing
    std::vector<Vector> flipped{spec.pointer_basis[1], spec.pointer_basis[0]};
    std::vector<VonNeumannMeasurement> flipped_env = env;
    for (auto& m : flipped_env) std::swap(m.projectors[0], m.projectors[1]);
    CHECK(bohr_residual(ghz(0.5), 0, flipped, flipped_env) ==
          doctest::Approx(cat).epsilon(1e-12));
}

TEST_CASE("agreement: relabeled perfect correlations pass") {
    JointOutcomeTensor diag{{2, 2, 2}, std::vector<double>(8, 0.0)};
    diag.p[static_cast<size_t>(diag.index_of({0, 0, 0}))] = 0.3;
    diag.p[static_cast<size_t>(diag.index_of({1, 1, 1}))] = 0.7;
    const AgreementResult ok = agreement_check(diag);
    CHECK(ok.pass);
    CHECK_FALSE(ok.witness.has_value());
    CHECK(ok.relabeling == std::vector<std::vector<int>>{{0, 1}, {0, 1}});

    JointOutcomeTensor swapped{{2, 2}, std::vector<double>(4, 0.0)};
    swapped.p[static_cast<size_t>(swapped.index_of({0, 1}))] = 0.3;
    swapped.p[static_cast<size_t>(swapped.index_of({1, 0}))] = 0.7;
    const AgreementResult sw = agreement_check(swapped);
    CHECK(sw.pass);
    CHECK(sw.relabeling == std::vector<std::vector<int>>{{1, 0}});
}

TEST_CASE("agreement: many-to-one outcomes and silent outcomes") {
    JointOutcomeTensor many{{2, 3}, std::vector<double>(6, 0.0)};
    many.p[static_cast<size_t>(many.index_of({0, 0}))] = 0.3;
    many.p[static_cast<size_t>(many.index_of({1, 1}))] = 0.4;
    many.p[static_cast<size_t>(many.index_of({1, 2}))] = 0.3;
    const AgreementResult res = agreement_check(many);
    CHECK(res.pass);
    CHECK(res.relabeling == std::vector<std::vector<int>>{{0, 1, 1}});

    JointOutcomeTensor silent{{2, 3}, std::vector<double>(6, 0.0)};
    silent.p[static_cast<size_t>(silent.index_of({0, 0}))] = 0.3;
    silent.p[static_cast<size_t>(silent.index_of({1, 1}))] = 0.7;
    const AgreementResult sil = agreement_check(silent);
    CHECK(sil.pass);
    CHECK(sil.relabeling == std::vector<std::vector<int>>{{0, 1, -1}});
}

TEST_CASE("agreement: cross-talk is reported with a concrete witness") {
    JointOutcomeTensor confused{{2, 2, 2}, std::vector<double>(8, 0.0)};
    confused.p[static_cast<size_t>(confused.index_of({0, 0, 0}))] = 0.25;
    confused.p[static_cast<size_t>(confused.index_of({1, 1, 1}))] = 0.65;
    confused.p[static_cast<size_t>(confused.index_of({0, 1, 0}))] = 0.10;
    const AgreementResult res = agreement_check(confused);
    CHECK_FALSE(res.pass);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->indices == std::vector<int>{0, 1, 0});
    CHECK(res.witness->probability == doctest::Approx(0.10).epsilon(1e-12));
}

TEST_CASE("copying channel emits the branch product of the read-out label") {
    std::mt19937_64 rng(55);
    const SbsSpec spec = testutil::random_sbs_spec(rng, 2, 2);
    const DensityOperator in0 = projector_state(spec.pointer_basis[0], SubsystemDims{2});
    const DensityOperator out0 = cc_broadcast_channel(in0, spec);
    const DensityOperator expected = tensor(spec.branches[0][0], spec.branches[0][1]);
    CHECK(out0.dims == expected.dims);  // no system factor on the output
    CHECK((out0.entries - expected.entries).norm() < 1e-12);

    // the channel reads only pointer populations: dephasing the input is invisible
    const DensityOperator generic = testutil::random_density(rng, SubsystemDims{2});
    Matrix dephased = Matrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i) {
        const Vector& x = spec.pointer_basis[static_cast<size_t>(i)];
        const double q = (x.adjoint() * generic.entries * x)(0, 0).real();
        dephased += q * (x * x.adjoint());
    }
    const DensityOperator out_generic = cc_broadcast_channel(generic, spec);
    const DensityOperator out_dephased =
        cc_broadcast_channel({SubsystemDims{2}, dephased}, spec);
    CHECK((out_generic.entries - out_dephased.entries).norm() < 1e-12);

    // maximally mixed input -> uniform branch mixture
    const DensityOperator mixed{SubsystemDims{2}, Matrix::Identity(2, 2) * 0.5};
    const DensityOperator out_mixed = cc_broadcast_channel(mixed, spec);
    const Matrix target = 0.5 * tensor(spec.branches[0][0], spec.branches[0][1]).entries +
                          0.5 * tensor(spec.branches[1][0], spec.branches[1][1]).entries;
    CHECK((out_mixed.entries - target).norm() < 1e-12);
}

TEST_CASE("copying channel rejects weight outside the pointer span") {
    SbsSpec spec = two_qubit_env_spec();
    spec.pointer_basis = {ket(0, 3), ket(1, 3)};  // two labels inside a qutrit
    const DensityOperator leak{
        SubsystemDims{3}, Matrix(0.5 * ket(0, 3) * ket(0, 3).adjoint() +
                                 0.5 * ket(2, 3) * ket(2, 3).adjoint())};
    CHECK_THROWS_WITH_AS(cc_broadcast_channel(leak, spec),
                         doctest::Contains("pointer-basis span"), std::invalid_argument);
}

TEST_CASE("witness family: entropic identity holds while ppt fails") {
    const WitnessReport r1 = witness_report(0.1);
    CHECK(r1.ptilde == doctest::Approx(0.82).epsilon(1e-14));
    CHECK(r1.mutual_information == doctest::Approx(0.6800770457282796).epsilon(1e-10));
    CHECK(r1.ppt_min_eigenvalue == doctest::Approx(-0.22294688127912365).epsilon(1e-10));
    CHECK(r1.entropic_holds);
    CHECK(r1.ppt_violated);

    const WitnessReport r3 = witness_report(0.3);
    CHECK(r3.system_entropy == doctest::Approx(0.9814538950336537).epsilon(1e-12));
    CHECK(r3.mutual_information == doctest::Approx(r3.system_entropy).epsilon(1e-9));
    CHECK(r3.entropic_gap < 1e-9);
    CHECK(r3.ppt_min_eigenvalue == doctest::Approx(-0.17634337744161438).epsilon(1e-10));
    CHECK(r3.ppt_violated);

    CHECK_THROWS_AS(witness_report(0.5), std::invalid_argument);
    CHECK_THROWS_AS(witness_state(0.0), std::invalid_argument);
    CHECK_THROWS_AS(witness_state(1.0), std::invalid_argument);
}

TEST_CASE("witness slots place the flat marginal on the chosen factor") {
    const DensityOperator first = witness_state(0.3, SystemSlot::First);
    const DensityOperator second = witness_state(0.3, SystemSlot::Second);
    const Matrix m_first = partial_trace(first, {0}).entries;
    const Matrix m_second = partial_trace(second, {1}).entries;
    CHECK(std::abs(m_first(0, 0).real() - 0.58) < 1e-12);
    CHECK((m_first - m_second).norm() < 1e-12);
    CHECK(mutual_information(first, {0}) ==
          doctest::Approx(mutual_information(second, {1})).epsilon(1e-10));
}
