#include "sbs/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sbs {

namespace {

// stride of each subsystem in the row-major composite index
std::vector<long> strides_of(const SubsystemDims& dims) {
    std::vector<long> s(dims.extents.size(), 1);
    for (int k = dims.count() - 2; k >= 0; --k)
        s[static_cast<size_t>(k)] = s[static_cast<size_t>(k) + 1] * dims[k + 1];
    return s;
}

// composite offsets of every multi-index running over the listed subsystems
std::vector<long> offsets_of(const SubsystemDims& dims, const std::vector<int>& subs) {
    const auto strides = strides_of(dims);
    long n = 1;
    for (int k : subs) n *= dims[k];
    std::vector<long> out(static_cast<size_t>(n), 0);
    long repeat = 1;
    for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
        const long d = dims[*it], stride = strides[static_cast<size_t>(*it)];
        for (long i = 0; i < n; ++i) out[static_cast<size_t>(i)] += ((i / repeat) % d) * stride;
        repeat *= d;
    }
    return out;
}

void check_subsystem_index(const SubsystemDims& dims, int k) {
    if (k < 0 || k >= dims.count())
        throw std::invalid_argument("subsystem index " + std::to_string(k) +
                                    " out of range for " + std::to_string(dims.count()) +
                                    " subsystems");
}

}  // namespace

int SubsystemDims::total() const {
    long t = 1;
    for (int d : extents) t *= d;
    return static_cast<int>(t);
}

void SubsystemDims::validate() const {
    if (extents.empty()) throw std::invalid_argument("empty subsystem dimension list");
    for (int d : extents)
        if (d < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
}

void DensityOperator::validate(double tol) const {
    dims.validate();
    const int n = dims.total();
    if (entries.rows() != n || entries.cols() != n)
        throw std::invalid_argument("density matrix is " + std::to_string(entries.rows()) +
                                    "x" + std::to_string(entries.cols()) +
                                    " but subsystem dimensions give " + std::to_string(n));
    if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("density matrix is not Hermitian within tolerance");
    if (std::abs(entries.trace() - Cx(1.0, 0.0)) > tol)
        throw std::invalid_argument("density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es((entries + entries.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("density matrix has a negative eigenvalue");
}

DensityOperator DensityOperator::checked(SubsystemDims dims, Matrix entries, double tol) {
    DensityOperator rho{std::move(dims), std::move(entries)};
    rho.validate(tol);
    return rho;
}

void PureState::validate(double tol) const {
    dims.validate();
    if (amplitudes.size() != dims.total())
        throw std::invalid_argument("amplitude vector length does not match dimensions");
    if (std::abs(amplitudes.norm() - 1.0) > tol)
        throw std::invalid_argument("pure state is not normalized");
}

DensityOperator PureState::to_density() const {
    return {dims, amplitudes * amplitudes.adjoint()};
}

void VonNeumannMeasurement::validate(int dim, double tol) const {
    if (projectors.empty()) throw std::invalid_argument("measurement has no projectors");
    Matrix sum = Matrix::Zero(dim, dim);
    for (size_t i = 0; i < projectors.size(); ++i) {
        const Matrix& p = projectors[i];
        if (p.rows() != dim || p.cols() != dim)
            throw std::invalid_argument("projector dimension mismatch");
        if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol ||
            (p * p - p).cwiseAbs().maxCoeff() > tol)
            throw std::invalid_argument("projector is not an orthogonal projector");
        for (size_t j = i + 1; j < projectors.size(); ++j)
            if ((p * projectors[j]).cwiseAbs().maxCoeff() > tol)
                throw std::invalid_argument("projectors are not mutually orthogonal");
        sum += p;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((sum + sum.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > 1.0 + tol)
        throw std::invalid_argument("projector family exceeds the identity");
}

Matrix tensor(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector tensor(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    std::vector<int> d = a.dims.extents;
    d.insert(d.end(), b.dims.extents.begin(), b.dims.extents.end());
    return {SubsystemDims(std::move(d)), tensor(a.entries, b.entries)};
}

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<int> d = a.dims.extents;
    d.insert(d.end(), b.dims.extents.begin(), b.dims.extents.end());
    return {SubsystemDims(std::move(d)), tensor(a.amplitudes, b.amplitudes)};
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
    rho.dims.validate();
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep list");
    for (size_t i = 0; i < keep.size(); ++i) {
        check_subsystem_index(rho.dims, keep[i]);
        if (i > 0 && keep[i] <= keep[i - 1])
            throw std::invalid_argument("partial_trace: keep list must be strictly increasing");
    }
    std::vector<int> traced;
    for (int k = 0; k < rho.dims.count(); ++k)
        if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);

    std::vector<int> kept_dims;
    for (int k : keep) kept_dims.push_back(rho.dims[k]);
    SubsystemDims out_dims{kept_dims};

    const auto keep_off = offsets_of(rho.dims, keep);
    const auto tr_off = offsets_of(rho.dims, traced);
    const long nk = static_cast<long>(keep_off.size());
    Matrix out = Matrix::Zero(nk, nk);
    for (long r = 0; r < nk; ++r)
        for (long c = 0; c < nk; ++c) {
            Cx acc(0.0, 0.0);
            for (long s : tr_off) acc += rho.entries(keep_off[static_cast<size_t>(r)] + s,
                                                     keep_off[static_cast<size_t>(c)] + s);
            out(r, c) = acc;
        }
    return {std::move(out_dims), std::move(out)};
}

Matrix partial_transpose(const DensityOperator& rho, int subsystem) {
    rho.dims.validate();
    check_subsystem_index(rho.dims, subsystem);
    const auto strides = strides_of(rho.dims);
    const long d = rho.dims[subsystem], stride = strides[static_cast<size_t>(subsystem)];
    const long n = rho.dims.total();
    Matrix out(n, n);
    for (long r = 0; r < n; ++r) {
        const long rdig = (r / stride) % d;
        for (long c = 0; c < n; ++c) {
            const long cdig = (c / stride) % d;
            out(r + (cdig - rdig) * stride, c + (rdig - cdig) * stride) = rho.entries(r, c);
        }
    }
    return out;
}

EigResult eig_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eig_hermitian: matrix not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
        throw std::invalid_argument("eig_hermitian: matrix not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
    const Eigen::Index n = m.rows();
    EigResult out{Eigen::VectorXd(n), Matrix(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {  // ascending -> descending
        out.values(i) = es.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return out;
}

double shannon_entropy(const std::vector<double>& p) {
    double total = 0.0;
    for (double x : p) total += std::max(x, 0.0);
    if (total <= 0.0) throw std::invalid_argument("shannon_entropy: distribution sums to 0");
    double h = 0.0;
    for (double x : p) {
        const double q = std::max(x, 0.0) / total;
        if (q > 0.0) h -= q * std::log2(q);
    }
    return h;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double vn_entropy(const DensityOperator& rho, double tol) {
    const auto eig = eig_hermitian(rho.entries, tol);
    if (eig.values.minCoeff() < -tol)
        throw std::invalid_argument("vn_entropy: operator has a negative eigenvalue");
    std::vector<double> p(eig.values.data(), eig.values.data() + eig.values.size());
    return shannon_entropy(p);
}

double trace_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

Matrix matrix_sqrt(const Matrix& psd, double tol) {
    const auto eig = eig_hermitian(psd, tol);
    if (eig.values.minCoeff() < -tol)
        throw std::invalid_argument("matrix_sqrt: operator has a negative eigenvalue");
    // eigenvalues at the solver's noise floor are genuine zero modes; rounding
    // them away keeps sqrt(noise) out of the null space
    const double floor = 1e-13 * std::max(eig.values.maxCoeff(), 0.0);
    Eigen::VectorXd roots = eig.values;
    for (Eigen::Index i = 0; i < roots.size(); ++i)
        roots(i) = roots(i) > floor ? std::sqrt(roots(i)) : 0.0;
    return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

double generalized_overlap(const DensityOperator& rho, const DensityOperator& sigma,
                           double tol) {
    if (rho.entries.rows() != sigma.entries.rows())
        throw std::invalid_argument("generalized_overlap: dimension mismatch");
    // Tr sqrt(sqrt(rho) sigma sqrt(rho)) equals the trace norm of
    // sqrt(rho) sqrt(sigma); the product form is far better conditioned when
    // the supports are (near) orthogonal.
    return trace_norm(matrix_sqrt(rho.entries, tol) * matrix_sqrt(sigma.entries, tol));
}

Matrix pinch(const DensityOperator& rho, int system,
             const std::vector<Vector>& system_basis,
             const std::vector<VonNeumannMeasurement>& env) {
    rho.dims.validate();
    check_subsystem_index(rho.dims, system);
    const size_t labels = system_basis.size();
    if (labels == 0) throw std::invalid_argument("pinch: empty system basis");
    for (const Vector& v : system_basis)
        if (v.size() != rho.dims[system])
            throw std::invalid_argument("pinch: basis vector dimension mismatch");

    // one measurement per non-system subsystem, label counts matching
    std::vector<const VonNeumannMeasurement*> per_subsystem(
        static_cast<size_t>(rho.dims.count()), nullptr);
    for (const auto& m : env) {
        check_subsystem_index(rho.dims, m.subsystem);
        if (m.subsystem == system)
            throw std::invalid_argument("pinch: measurement attached to the system subsystem");
        if (per_subsystem[static_cast<size_t>(m.subsystem)])
            throw std::invalid_argument("pinch: duplicate measurement for a subsystem");
        if (m.projectors.size() != labels)
            throw std::invalid_argument(
                "pinch: projector family size does not match the system label count");
        m.validate(rho.dims[m.subsystem]);
        per_subsystem[static_cast<size_t>(m.subsystem)] = &m;
    }
    for (int k = 0; k < rho.dims.count(); ++k)
        if (k != system && !per_subsystem[static_cast<size_t>(k)])
            throw std::invalid_argument("pinch: subsystem " + std::to_string(k) +
                                        " has no measurement");

    const long n = rho.dims.total();
    Matrix out = Matrix::Zero(n, n);
    for (size_t i = 0; i < labels; ++i) {
        Matrix proj = Matrix::Ones(1, 1);
        for (int k = 0; k < rho.dims.count(); ++k) {
            if (k == system) {
                const Vector& v = system_basis[i];
                proj = tensor(proj, Matrix(v * v.adjoint()));
            } else {
                proj = tensor(proj, per_subsystem[static_cast<size_t>(k)]->projectors[i]);
            }
        }
        out += proj * rho.entries * proj;
    }
    return out;
}

}  // namespace sbs
