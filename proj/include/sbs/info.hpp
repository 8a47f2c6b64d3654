#pragma once

// Information measures over density operators and classical distributions:
// quantum mutual information across a cut, conditional von Neumann entropy,
// the Holevo quantity, classical mutual information, the entropy-continuity
// right-hand sides used by the broadcast bound chain, and the
// overlap-penalised lower bound on extractable information.

#include <vector>

#include "sbs/qstate.hpp"

namespace sbs {

// Finite ensemble {p_i, rho_i} of equal-dimension states.
struct Ensemble {
    std::vector<double> probabilities;
    std::vector<DensityOperator> states;

    void validate(double tol = default_tol) const;
};

// Joint pmf over (row, column) outcomes; entries nonnegative, sum 1.
struct JointPMF {
    Eigen::MatrixXd p;

    void validate(double tol = default_tol) const;
};

// I(A:B) = S(A) + S(B) - S(AB) for the bipartition (side_a, complement).
double mutual_information(const DensityOperator& rho, const std::vector<int>& side_a,
                          double tol = default_tol);

// S(rest | conditioning) = S(rho) - S(rho_conditioning); can be negative.
double conditional_vn_entropy(const DensityOperator& rho,
                              const std::vector<int>& conditioning,
                              double tol = default_tol);

// chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i); upper-bounds accessible information.
double holevo_chi(const Ensemble& ensemble, double tol = default_tol);

double classical_mutual_information(const JointPMF& pmf, double tol = default_tol);

// Entropy-difference continuity bound: for ||rho - sigma||_tr = eps on dimension d,
// |S(rho) - S(sigma)| <= (eps/2) log2(d-1) + h(eps/2). Callers pass the full trace
// norm (not halved); requires eps/2 <= 1 - 1/d.
double fannes_audenaert_rhs(double eps, int dim);

// Conditional-entropy continuity bound: 4 eps log2(d) + 2 h(eps), eps the full
// trace-norm distance, d the dimension of the non-conditioning factor.
double alicki_fannes_rhs(double eps, int dim);

// max(0, H({p1,p2}) - 2 sqrt(p1 p2) b^copies): information any observer holding
// `copies` branch records of pairwise overlap b is guaranteed to extract.
double distinguishability_lower_bound(double p1, double p2, double b, int copies);

}  // namespace sbs
