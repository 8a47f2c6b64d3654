#pragma once

// Construction and certification of spectrum broadcast structure: states of
// the form sum_i p_i |x_i><x_i| (x) rho_i^{E_1} (x) ... (x) rho_i^{E_K} with
// perfectly distinguishable branch states on every environment. Also the
// non-disturbance (pinching) residual, the classical agreement check on joint
// outcome statistics, the classical-copying channel those states realize, and
// the two-qubit witness family showing the entropic condition alone does not
// certify broadcast structure.

#include <optional>
#include <vector>

#include "sbs/qstate.hpp"

namespace sbs {

// Ingredients of an exact broadcast state. branches[i][k] is the state label i
// imprints on environment k; system is laid out as subsystem 0 of the output.
struct SbsSpec {
    std::vector<double> probabilities;
    std::vector<Vector> pointer_basis;
    std::vector<std::vector<DensityOperator>> branches;

    int label_count() const { return static_cast<int>(probabilities.size()); }
    int environment_count() const;
    void validate(double tol = default_tol) const;  // includes support orthogonality
};

DensityOperator build_sbs(const SbsSpec& spec, double tol = default_tol);

struct SbsTolerances {
    double residual = default_tol;      // pass threshold for every residual
    double degeneracy_gap = 1e-8;       // refuse if system eigenvalues are closer
    double drop_probability = 1e-12;    // branches below this are skipped
};

struct EntropicEntry {
    std::vector<int> subset;   // environment subsystem indices (original numbering)
    double mutual_information;
    double gap;                // |I - H_S|
};

struct SbsReport {
    std::vector<double> spectrum;            // system eigenvalues, descending
    std::vector<Vector> pointer_basis;       // matching eigenvectors
    double system_entropy = 0.0;             // H of `spectrum`
    double coherence_residual = 0.0;         // sum of off-diagonal block trace norms
    Eigen::MatrixXd distinguishability;      // worst per-environment overlap per pair
    std::vector<double> product_deviation;   // per label
    std::vector<EntropicEntry> entropic_sweep;
    double max_entropic_gap = 0.0;
    bool coherence_pass = false;
    bool distinguishability_pass = false;
    bool product_pass = false;
    bool entropic_pass = false;
    bool verdict = false;
};

// Certify broadcast structure of rho with the system at `system`. Throws on
// invalid input or a degenerate system spectrum (pointer basis ill-defined).
// The entropic sweep covers every nonempty environment subset up to 12
// environments, contiguous prefixes beyond that.
SbsReport check_sbs(const DensityOperator& rho, int system,
                    const SbsTolerances& tol = {});

// || pinch(rho) - rho ||_tr: 0 exactly on the fixed points (CQ states).
double bohr_residual(const DensityOperator& rho, int system,
                     const std::vector<Vector>& system_basis,
                     const std::vector<VonNeumannMeasurement>& env);

// Joint pmf p(i, j_1, ..., j_K) of the system label and K observer outcomes,
// stored flat row-major; shape[0] is the system label count.
struct JointOutcomeTensor {
    std::vector<int> shape;
    std::vector<double> p;

    long index_of(const std::vector<int>& idx) const;
    double at(const std::vector<int>& idx) const { return p[static_cast<size_t>(index_of(idx))]; }
    void validate(double tol = default_tol) const;
};

struct AgreementWitness {
    std::vector<int> indices;  // (i, j_1, ..., j_K) of an off-diagonal entry
    double probability;
};

struct AgreementResult {
    bool pass = false;
    // per observer: outcome -> system label (-1 when the outcome never occurs)
    std::vector<std::vector<int>> relabeling;
    std::optional<AgreementWitness> witness;
};

// Pass iff the support is diagonal after per-observer relabeling: every
// observer's outcome determines the system label.
AgreementResult agreement_check(const JointOutcomeTensor& joint, double tol = 1e-12);

// The classical copying channel a broadcast state realizes: read the
// pointer-basis populations of rho_s and emit the matching branch product
// state on the environments (the output carries no system factor). Input
// weight must lie in the pointer-basis span.
DensityOperator cc_broadcast_channel(const DensityOperator& rho_s, const SbsSpec& spec,
                                     double tol = default_tol);

// Which tensor factor of the witness family carries the system. The family is
// rho = p P[a|00>+b|11>] + (1-p) P[a|01>+b|10>], a = sqrt(p), b = sqrt(1-p);
// the system is the factor whose marginal is diag(ptilde, 1-ptilde) with
// ptilde = p^2 + (1-p)^2.
enum class SystemSlot { First, Second };

DensityOperator witness_state(double p, SystemSlot slot = SystemSlot::First);

struct WitnessReport {
    double p = 0.0;
    double ptilde = 0.0;
    double mutual_information = 0.0;
    double system_entropy = 0.0;       // S(rho_S) = h(ptilde)
    double spectrum_entropy = 0.0;     // H of the system marginal's spectrum
    double entropic_gap = 0.0;         // |I - S(rho_S)|
    double ppt_min_eigenvalue = 0.0;
    bool entropic_holds = false;
    bool ppt_violated = false;         // entangled despite the entropic identity
};

// Evaluates the witness at p (p = 1/2 is rejected: the two branches give the
// same marginal and the state is separable there).
WitnessReport witness_report(double p, double tol = default_tol);

}  // namespace sbs
