#pragma once

// Illuminated dielectric sphere: a two-position system decohered by photon
// scattering. The per-photon scattering overlap, decoherence timescale,
// exact rank-2 joint state of system + observed photon fraction, mutual
// information curves / phase diagram / redundancy, the entropic bound chain
// with its thermodynamic-limit estimate, and a dense brute-force checker for
// the underlying record-formation inequality on small collision models.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sbs/qstate.hpp"

namespace sbs {

// All quantities SI. box_edge is the quantization-box edge L; the physical
// content is L-independent in the thermodynamic limit.
struct SphereParams {
    double radius = 0.0;         // sphere radius a
    double permittivity = 0.0;   // relative dielectric constant, > 1
    double displacement = 0.0;   // separation dx of the two system positions
    double wavenumber = 0.0;     // photon wavenumber k0
    double theta = 0.0;          // angle between beam and displacement axis
    double photon_density = 0.0; // photons per volume
    double light_speed = 0.0;
    double box_edge = 0.0;       // L

    double effective_radius() const;  // a ((eps-1)/(eps+2))^(1/3)
    void validate() const;
    // non-fatal regime notes: soft-photon and point-dipole conditions want
    // k0*dx and k0*a below ~0.1
    std::vector<std::string> warnings() const;
};

// Split of the photon environment into equal macroscopic fractions of size
// macro_size (macro_count of them), an observed fraction f of the whole, and
// optionally micro_photons extra non-scaling photons.
struct FractionPartition {
    double macro_size = 0.1;
    int macro_count = 10;
    double observed_fraction = 0.0;
    int micro_photons = 0;

    void validate() const;
};

// Qubit state on the two system positions; entries given in that basis.
struct InitialSystemState {
    Eigen::Matrix2cd entries;

    double p1() const { return entries(0, 0).real(); }
    double p2() const { return entries(1, 1).real(); }
    Cx coherence() const { return entries(0, 1); }
    void validate(double tol = default_tol) const;

    static InitialSystemState uniform_pure();    // p = 1/2, maximal coherence
    static InitialSystemState diagonal(double p1);
};

enum class LimitMode { FiniteBox, Thermodynamic };

// N_t = L^2 (N/V) c t, the photon count scattered up to t (kept real-valued).
double photons_scattered(const SphereParams& params, double t);

// Second-order per-photon overlap z; |z| <= 1, Im z from the first-order term.
Cx single_photon_overlap(const SphereParams& params);

// 1/tau_D = (2 pi / 15) (N/V) dx^2 c k0^6 atilde^6 (3 + 11 cos^2 theta).
double decoherence_time(const SphereParams& params);

// |z|^((1-f) N_t) in FiniteBox mode (log-space), exp(-(1-f) t / tau_D) in
// Thermodynamic mode. Finite-box values converge to the limit from above.
double decoherence_factor(const SphereParams& params, double t, double f, LimitMode mode);

// Overlap of the two branch states of one macro-fraction of size m:
// |z|^(m N_t) resp. exp(-m t / tau_D).
double macro_overlap(const SphereParams& params, double t, double m, LimitMode mode);

// rho(t) restricted to system + observed fraction, in the orthonormal frame
// |x_i> (x) |Psi_i>: entries coeff(i,j) * kappa(i,j) with kappa(0,1) = kappa,
// kappa(i,i) = 1. observed_overlap is <Psi_2|Psi_1>. All exponents are
// evaluated in log-space; Thermodynamic mode keeps only modulus decay and
// sends the micro-photon overlap to 1.
struct Rank2JointState {
    Eigen::Matrix2cd coeff;  // initial system entries in the position basis
    Cx kappa{1.0, 0.0};
    Cx observed_overlap{1.0, 0.0};
    Cx macro_overlap{1.0, 0.0};  // per-macrofraction branch overlap
};

Rank2JointState exact_joint_state(const SphereParams& params, const InitialSystemState& rho0,
                                  const FractionPartition& part, double t, LimitMode mode);

// I(S : observed fraction) in bits. Every spectrum in play is 2x2: the joint
// state in the orthonormal frame above, the observed-side Gram mixture, and
// the system marginal whose off-diagonal carries the full-environment damping
// kappa * conj(observed_overlap).
double exact_mutual_information(const Rank2JointState& state);

struct PhasePoint {
    double fraction = 0.0;
    double mutual_information = 0.0;
};

// I(f) over the given fraction grid at fixed t; part supplies macro_size and
// micro_photons (its observed_fraction is ignored). f = 0 with micro_photons
// > 0 probes the product phase, f = 1 the full-information point.
std::vector<PhasePoint> phase_diagram(const SphereParams& params,
                                      const InitialSystemState& rho0,
                                      const FractionPartition& part,
                                      const std::vector<double>& fractions, double t,
                                      LimitMode mode);

struct RedundancyResult {
    bool reached = false;
    double f_star = 0.0;  // smallest grid fraction with I >= (1-delta) H_S
    double value = 0.0;   // 1 / f_star
};

// Scans f over whole macro-fractions (m, 2m, ..., 1). reached = false means
// the plateau never attains (1-delta) H_S at this time.
RedundancyResult redundancy(const SphereParams& params, const InitialSystemState& rho0,
                            const FractionPartition& part, double t, double delta,
                            LimitMode mode);

// One grid point of the entropic bound chain
//   |H_S - I| <= h(eps_full/2) + 2 h(eps_traced) + 4 eps_traced
//                + 2 sqrt(p1 p2) record_overlap
// (bits) with eps_full = 2|c12| |z|^{N_t}, eps_traced = 2|c12| |z|^{(1-f)N_t},
// record_overlap = |z|^{f N_t}, alongside the closed-form estimate with the
// thermodynamic decay factors substituted. Applicable iff both eps <= 1/2.
struct BoundPoint {
    double t = 0.0;
    double t_over_tau = 0.0;
    double fraction = 0.0;
    double box_edge = 0.0;  // +inf in Thermodynamic mode
    double mutual_information = 0.0;
    double system_entropy = 0.0;  // H of the initial pointer populations
    double exact_gap = 0.0;
    double eps_full = 0.0;
    double eps_traced = 0.0;
    double record_overlap = 0.0;
    double term_full = 0.0;
    double term_traced_entropy = 0.0;
    double term_traced_linear = 0.0;
    double term_records = 0.0;
    double rhs = 0.0;
    double estimate_rhs = 0.0;
    double decoh_factor = 0.0;
    double macro_overlap = 0.0;
    double slack = 0.0;  // rhs - exact_gap
    bool applicable = false;
};

struct BoundReport {
    std::vector<BoundPoint> points;
    double worst_slack = 0.0;  // min slack over applicable points; +inf if none
};

BoundReport bound_suite(const SphereParams& params, const InitialSystemState& rho0,
                        const FractionPartition& part, const std::vector<double>& times,
                        const std::vector<double>& fractions, LimitMode mode);

// Small collision model: qubit system controlling identical unitaries on N
// independent environments, observed fraction f of them kept.
struct Lemma1Instance {
    InitialSystemState system_state;
    DensityOperator env_state;  // one environment
    Matrix u1, u2;              // branch unitaries
    int env_count = 0;
    double fraction = 0.0;
};

struct Lemma1Record {
    int kept = 0;               // observed environments, clamped to [1, N-1]
    double mutual_information = 0.0;
    double system_entropy = 0.0;
    double exact_gap = 0.0;
    double eps_full = 0.0;
    double eps_traced = 0.0;
    double record_overlap = 0.0;  // B(branch states)^kept
    double rhs = 0.0;
    double slack = 0.0;
    bool holds = false;  // slack >= -1e-10
};

// Dense brute force: builds the controlled product unitary, evolves the full
// product state, traces the unobserved environments, and compares the exact
// |H_S - I| against the bound chain. Throws if 2 * d^N exceeds dense limits.
Lemma1Record lemma1_check(const Lemma1Instance& instance);

// Deterministic pseudo-random instance (identical across platforms for a
// given seed): Haar-ish branch unitaries, random Bloch-ball system state,
// rank-1-or-2 environment state.
Lemma1Instance random_lemma1_instance(std::uint64_t seed, int env_count, int env_dim,
                                      double fraction);

}  // namespace sbs
