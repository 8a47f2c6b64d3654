#pragma once

// Dense multipartite density-operator algebra: tensor products, partial
// trace/transpose, Hermitian spectra, entropies, trace norm, the generalized
// overlap B(rho,sigma) = Tr sqrt(sqrt(rho) sigma sqrt(rho)), and the
// measure-and-forget pinching map used by the non-disturbance test.
//
// Conventions used throughout the library:
//  * subsystems are indexed left to right, row-major composite indices
//  * all entropies are base-2 (bits), 0 log 0 = 0
//  * eigenvalues in [-tol, 0) are clamped to 0 (renormalized before entropy)

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace sbs {

using Cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double default_tol = 1e-9;

// Dimensions of an ordered list of subsystems.
struct SubsystemDims {
    std::vector<int> extents;

    SubsystemDims() = default;
    SubsystemDims(std::initializer_list<int> d) : extents(d) {}
    explicit SubsystemDims(std::vector<int> d) : extents(std::move(d)) {}

    int count() const { return static_cast<int>(extents.size()); }
    int total() const;
    int operator[](int k) const { return extents.at(static_cast<size_t>(k)); }
    bool operator==(const SubsystemDims& o) const { return extents == o.extents; }

    // throws std::invalid_argument unless every extent is >= 1 and the list is nonempty
    void validate() const;
};

// Mixed state over SubsystemDims. Fields are public and cheap to construct;
// `validate` (or the `checked` factory) enforces the density-operator axioms.
struct DensityOperator {
    SubsystemDims dims;
    Matrix entries;

    // Hermitian within tol, trace 1 within tol, min eigenvalue >= -tol
    void validate(double tol = default_tol) const;
    static DensityOperator checked(SubsystemDims dims, Matrix entries,
                                   double tol = default_tol);
};

struct PureState {
    SubsystemDims dims;
    Vector amplitudes;

    void validate(double tol = default_tol) const;  // unit norm, matching dims
    DensityOperator to_density() const;
};

// Orthogonal projector family acting on one subsystem; projectors need not be
// rank-1 and need not sum to the identity.
struct VonNeumannMeasurement {
    int subsystem = 0;
    std::vector<Matrix> projectors;

    // idempotent, mutually orthogonal, sum <= identity, all of dimension dim
    void validate(int dim, double tol = default_tol) const;
};

Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
PureState tensor(const PureState& a, const PureState& b);

// Reduce onto `keep` (strictly increasing subsystem indices), tracing out the rest.
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

// Transpose one subsystem factor; the result is Hermitian but may fail to be PSD.
Matrix partial_transpose(const DensityOperator& rho, int subsystem);

// Hermitian eigensystem, eigenvalues descending, columns are eigenvectors.
struct EigResult {
    Eigen::VectorXd values;
    Matrix vectors;
};
EigResult eig_hermitian(const Matrix& m, double tol = default_tol);

// Shannon entropy (bits) of a nonnegative vector; small negatives are clamped
// and the result is computed on the renormalized distribution.
double shannon_entropy(const std::vector<double>& p);

double binary_entropy(double p);  // h(p), throws outside [0,1]

double vn_entropy(const DensityOperator& rho, double tol = default_tol);

double trace_norm(const Matrix& m);  // sum of singular values

// Principal square root of a PSD matrix via spectral decomposition.
Matrix matrix_sqrt(const Matrix& psd, double tol = default_tol);

// B(rho,sigma); 0 iff rho sigma = 0, 1 iff rho = sigma.
double generalized_overlap(const DensityOperator& rho, const DensityOperator& sigma,
                           double tol = default_tol);

// Measure-and-forget pinching: sum_i (|i><i| (x) P_i^(1) (x) ...) rho (same),
// with |i> from `system_basis` on subsystem `system` and P_i^(k) the i-th
// projector of the measurement attached to environment subsystem k. Every
// non-system subsystem must carry exactly one measurement whose projector
// count equals the number of system labels. Output trace can be < 1 when the
// projector families are incomplete.
Matrix pinch(const DensityOperator& rho, int system,
             const std::vector<Vector>& system_basis,
             const std::vector<VonNeumannMeasurement>& env);

}  // namespace sbs
