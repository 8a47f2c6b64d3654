#include "sbs/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sbs/info.hpp"

namespace sbs {

namespace {

constexpr double pi = 3.14159265358979323846;

// First- and second-order coefficients of the per-photon overlap
// z = 1 + i*alpha - beta. Both are O(1/L^2) and tiny in any sane regime, so
// moduli and arguments are assembled from them directly instead of from z.
struct OverlapSeries {
    double alpha = 0.0;
    double beta = 0.0;
};

OverlapSeries series_of(const SphereParams& p) {
    const double at = p.effective_radius();
    const double at6 = std::pow(at, 6);
    const double k = p.wavenumber;
    const double c = std::cos(p.theta);
    const double l2 = p.box_edge * p.box_edge;
    OverlapSeries s;
    s.alpha = 8.0 * pi * p.displacement * std::pow(k, 5) * at6 * c / (3.0 * l2);
    s.beta = 2.0 * pi * p.displacement * p.displacement * std::pow(k, 6) * at6 *
             (3.0 + 11.0 * c * c) / (15.0 * l2);
    return s;
}

// ln|z| = (1/2) ln((1-beta)^2 + alpha^2), kept cancellation-free via log1p.
double log_abs_overlap(const OverlapSeries& s) {
    return 0.5 * std::log1p(-2.0 * s.beta + s.beta * s.beta + s.alpha * s.alpha);
}

Cx overlap_power(const OverlapSeries& s, double exponent) {
    const double mod = std::exp(exponent * log_abs_overlap(s));
    const double arg = exponent * std::atan2(s.alpha, 1.0 - s.beta);
    return Cx(mod * std::cos(arg), mod * std::sin(arg));
}

double eig2_entropy(double d1, double d2, double off_modulus) {
    const double disc = std::hypot(d1 - d2, 2.0 * off_modulus);
    return shannon_entropy({0.5 * (d1 + d2 + disc), 0.5 * (d1 + d2 - disc)});
}

void check_fraction(double f) {
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("fraction outside [0,1]");
}

void check_time(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("negative time");
}

}  // namespace

double SphereParams::effective_radius() const {
    return radius * std::cbrt((permittivity - 1.0) / (permittivity + 2.0));
}

void SphereParams::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    if (!(permittivity > 1.0)) throw std::invalid_argument("permittivity must exceed 1");
    if (!(displacement >= 0.0)) throw std::invalid_argument("negative displacement");
    if (!(wavenumber > 0.0)) throw std::invalid_argument("wavenumber must be positive");
    if (!(photon_density > 0.0)) throw std::invalid_argument("photon density must be positive");
    if (!(light_speed > 0.0)) throw std::invalid_argument("light speed must be positive");
    if (!(box_edge > 0.0)) throw std::invalid_argument("box edge must be positive");
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
}

std::vector<std::string> SphereParams::warnings() const {
    std::vector<std::string> w;
    const double soft = wavenumber * displacement;
    if (soft > 0.1)
        w.push_back("soft-photon condition violated: k0*dx = " + std::to_string(soft) +
                    " exceeds 0.1; the second-order overlap is unreliable");
    const double dipole = wavenumber * radius;
    if (dipole > 0.1)
        w.push_back("dipole condition violated: k0*a = " + std::to_string(dipole) +
                    " exceeds 0.1; the polarizability formula is unreliable");
    return w;
}

void FractionPartition::validate() const {
    if (!(macro_size > 0.0 && macro_size <= 1.0))
        throw std::invalid_argument("macro fraction size outside (0,1]");
    if (macro_count < 1) throw std::invalid_argument("need at least one macro fraction");
    if (std::abs(macro_size * macro_count - 1.0) > 0.5 * macro_size)
        throw std::invalid_argument("macro fractions do not tile the environment");
    check_fraction(observed_fraction);
    if (micro_photons < 0) throw std::invalid_argument("negative micro photon count");
}

void InitialSystemState::validate(double tol) const {
    if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("system state not Hermitian");
    if (std::abs(entries.trace().real() - 1.0) > tol || std::abs(entries.trace().imag()) > tol)
        throw std::invalid_argument("system state trace != 1");
    const double d1 = entries(0, 0).real();
    const double d2 = entries(1, 1).real();
    const double disc = std::hypot(d1 - d2, 2.0 * std::abs(entries(0, 1)));
    if (0.5 * (d1 + d2 - disc) < -tol)
        throw std::invalid_argument("system state not positive semidefinite");
}

InitialSystemState InitialSystemState::uniform_pure() {
    InitialSystemState s;
    s.entries << 0.5, 0.5, 0.5, 0.5;
    return s;
}

InitialSystemState InitialSystemState::diagonal(double p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("p1 outside [0,1]");
    InitialSystemState s;
    s.entries << p1, 0.0, 0.0, 1.0 - p1;
    return s;
}

double photons_scattered(const SphereParams& params, double t) {
    params.validate();
    check_time(t);
    return params.box_edge * params.box_edge * params.photon_density * params.light_speed * t;
}

Cx single_photon_overlap(const SphereParams& params) {
    params.validate();
    const OverlapSeries s = series_of(params);
    return Cx(1.0 - s.beta, s.alpha);
}

double decoherence_time(const SphereParams& params) {
    params.validate();
    const double c = std::cos(params.theta);
    const double rate = (2.0 * pi / 15.0) * params.photon_density * params.displacement *
                        params.displacement * params.light_speed *
                        std::pow(params.wavenumber, 6) * std::pow(params.effective_radius(), 6) *
                        (3.0 + 11.0 * c * c);
    return 1.0 / rate;
}

double decoherence_factor(const SphereParams& params, double t, double f, LimitMode mode) {
    check_fraction(f);
    check_time(t);
    if (mode == LimitMode::Thermodynamic) {
        params.validate();
        return std::exp(-(1.0 - f) * t / decoherence_time(params));
    }
    const double n = (1.0 - f) * photons_scattered(params, t);
    return std::exp(n * log_abs_overlap(series_of(params)));
}

double macro_overlap(const SphereParams& params, double t, double m, LimitMode mode) {
    if (!(m > 0.0 && m <= 1.0)) throw std::invalid_argument("macro size outside (0,1]");
    check_time(t);
    if (mode == LimitMode::Thermodynamic) {
        params.validate();
        return std::exp(-m * t / decoherence_time(params));
    }
    const double n = m * photons_scattered(params, t);
    return std::exp(n * log_abs_overlap(series_of(params)));
}

Rank2JointState exact_joint_state(const SphereParams& params, const InitialSystemState& rho0,
                                  const FractionPartition& part, double t, LimitMode mode) {
    params.validate();
    rho0.validate();
    part.validate();
    check_time(t);
    Rank2JointState st;
    st.coeff = rho0.entries;
    const double f = part.observed_fraction;
    if (mode == LimitMode::Thermodynamic) {
        const double tau = decoherence_time(params);
        st.kappa = std::exp(-(1.0 - f) * t / tau);
        st.observed_overlap = std::exp(-f * t / tau);
        st.macro_overlap = std::exp(-part.macro_size * t / tau);
        return st;
    }
    const OverlapSeries s = series_of(params);
    const double nt = photons_scattered(params, t);
    const double observed = std::min(f * nt + part.micro_photons, nt);
    st.kappa = overlap_power(s, nt - observed);
    st.observed_overlap = overlap_power(s, observed);
    st.macro_overlap = overlap_power(s, part.macro_size * nt);
    return st;
}

double exact_mutual_information(const Rank2JointState& state) {
    const double c11 = state.coeff(0, 0).real();
    const double c22 = state.coeff(1, 1).real();
    const double q = std::abs(state.coeff(0, 1));
    const double g = std::abs(state.observed_overlap);
    const double k = std::abs(state.kappa);
    const double s_joint = eig2_entropy(c11, c22, q * k);
    const double s_env = eig2_entropy(c11, c22, std::sqrt(std::max(c11 * c22, 0.0)) * g);
    const double s_sys = eig2_entropy(c11, c22, q * k * g);
    return std::max(0.0, s_sys + s_env - s_joint);
}

std::vector<PhasePoint> phase_diagram(const SphereParams& params,
                                      const InitialSystemState& rho0,
                                      const FractionPartition& part,
                                      const std::vector<double>& fractions, double t,
                                      LimitMode mode) {
    std::vector<PhasePoint> out;
    FractionPartition p = part;
    for (double f : fractions) {
        p.observed_fraction = f;
        out.push_back({f, exact_mutual_information(exact_joint_state(params, rho0, p, t, mode))});
    }
    return out;
}

RedundancyResult redundancy(const SphereParams& params, const InitialSystemState& rho0,
                            const FractionPartition& part, double t, double delta,
                            LimitMode mode) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta outside (0,1)");
    rho0.validate();
    const double target = (1.0 - delta) * shannon_entropy({rho0.p1(), rho0.p2()});
    FractionPartition p = part;
    RedundancyResult res;
    for (int j = 1; j <= part.macro_count; ++j) {
        const double f = std::min(1.0, j * part.macro_size);
        p.observed_fraction = f;
        const double info =
            exact_mutual_information(exact_joint_state(params, rho0, p, t, mode));
        if (info >= target) {
            res.reached = true;
            res.f_star = f;
            res.value = 1.0 / f;
            return res;
        }
    }
    return res;
}

BoundReport bound_suite(const SphereParams& params, const InitialSystemState& rho0,
                        const FractionPartition& part, const std::vector<double>& times,
                        const std::vector<double>& fractions, LimitMode mode) {
    rho0.validate();
    const double tau = decoherence_time(params);
    const double p1 = rho0.p1();
    const double p2 = rho0.p2();
    const double c12 = std::abs(rho0.coherence());
    const double h_s = shannon_entropy({p1, p2});
    const double record_weight = 2.0 * std::sqrt(std::max(p1 * p2, 0.0));

    BoundReport rep;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    FractionPartition p = part;
    for (double t : times)
        for (double f : fractions) {
            p.observed_fraction = f;
            const Rank2JointState st = exact_joint_state(params, rho0, p, t, mode);
            BoundPoint pt;
            pt.t = t;
            pt.t_over_tau = t / tau;
            pt.fraction = f;
            pt.box_edge = mode == LimitMode::FiniteBox
                              ? params.box_edge
                              : std::numeric_limits<double>::infinity();
            pt.mutual_information = exact_mutual_information(st);
            pt.system_entropy = h_s;
            pt.exact_gap = std::abs(h_s - pt.mutual_information);
            pt.decoh_factor = std::abs(st.kappa);
            pt.macro_overlap = std::abs(st.macro_overlap);
            pt.record_overlap = std::abs(st.observed_overlap);
            pt.eps_full = 2.0 * c12 * pt.decoh_factor * pt.record_overlap;
            pt.eps_traced = 2.0 * c12 * pt.decoh_factor;
            pt.term_full = binary_entropy(0.5 * pt.eps_full);
            pt.term_traced_entropy = 2.0 * binary_entropy(pt.eps_traced);
            pt.term_traced_linear = 4.0 * pt.eps_traced;
            pt.term_records = record_weight * pt.record_overlap;
            pt.rhs = pt.term_full + pt.term_traced_entropy + pt.term_traced_linear +
                     pt.term_records;
            const double e_full = std::exp(-t / tau);
            const double e_traced = std::exp(-(1.0 - f) * t / tau);
            const double e_records = std::exp(-f * t / tau);
            pt.estimate_rhs = binary_entropy(c12 * e_full) +
                              2.0 * binary_entropy(std::min(1.0, 2.0 * c12 * e_traced)) +
                              8.0 * c12 * e_traced + record_weight * e_records;
            pt.slack = pt.rhs - pt.exact_gap;
            pt.applicable = pt.eps_full <= 0.5 && pt.eps_traced <= 0.5;
            if (pt.applicable) rep.worst_slack = std::min(rep.worst_slack, pt.slack);
            rep.points.push_back(pt);
        }
    return rep;
}

Lemma1Record lemma1_check(const Lemma1Instance& instance) {
    instance.system_state.validate();
    instance.env_state.validate();
    const int n = instance.env_count;
    if (n < 2) throw std::invalid_argument("need at least two environments");
    check_fraction(instance.fraction);
    const long d = instance.env_state.dims.total();
    if (instance.u1.rows() != d || instance.u1.cols() != d || instance.u2.rows() != d ||
        instance.u2.cols() != d)
        throw std::invalid_argument("unitary dimension mismatch");
    for (const Matrix* u : {&instance.u1, &instance.u2})
        if (((*u).adjoint() * (*u) - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
            throw std::invalid_argument("branch operator not unitary");
    double total = 2.0;
    for (int k = 0; k < n; ++k) {
        total *= static_cast<double>(d);
        if (total > 4096.0)
            throw std::invalid_argument("instance too large for dense computation");
    }

    std::vector<int> extents(static_cast<size_t>(n) + 1, static_cast<int>(d));
    extents[0] = 2;
    const SubsystemDims dims{extents};

    Matrix u1n = instance.u1;
    Matrix u2n = instance.u2;
    Matrix env = instance.env_state.entries;
    for (int k = 1; k < n; ++k) {
        u1n = tensor(u1n, instance.u1);
        u2n = tensor(u2n, instance.u2);
        env = tensor(env, instance.env_state.entries);
    }
    const long dn = u1n.rows();
    Matrix u = Matrix::Zero(2 * dn, 2 * dn);
    u.topLeftCorner(dn, dn) = u1n;
    u.bottomRightCorner(dn, dn) = u2n;
    Matrix rho0 = Matrix::Zero(2 * dn, 2 * dn);
    const Eigen::Matrix2cd& s = instance.system_state.entries;
    rho0.topLeftCorner(dn, dn) = s(0, 0) * env;
    rho0.topRightCorner(dn, dn) = s(0, 1) * env;
    rho0.bottomLeftCorner(dn, dn) = s(1, 0) * env;
    rho0.bottomRightCorner(dn, dn) = s(1, 1) * env;
    const DensityOperator joint{dims, u * rho0 * u.adjoint()};

    Lemma1Record rec;
    rec.kept = std::clamp(static_cast<int>(std::lround(instance.fraction * n)), 1, n - 1);
    std::vector<int> keep{0};
    for (int k = 1; k <= rec.kept; ++k) keep.push_back(k);
    const DensityOperator observed = partial_trace(joint, keep);
    rec.mutual_information = mutual_information(observed, {0});

    const double p1 = instance.system_state.p1();
    const double p2 = instance.system_state.p2();
    const double c12 = std::abs(instance.system_state.coherence());
    rec.system_entropy = shannon_entropy({p1, p2});
    rec.exact_gap = std::abs(rec.system_entropy - rec.mutual_information);

    const double w =
        std::abs((instance.u1 * instance.env_state.entries * instance.u2.adjoint()).trace());
    const DensityOperator b1{instance.env_state.dims,
                             instance.u1 * instance.env_state.entries * instance.u1.adjoint()};
    const DensityOperator b2{instance.env_state.dims,
                             instance.u2 * instance.env_state.entries * instance.u2.adjoint()};
    const double b = generalized_overlap(b1, b2);
    rec.eps_full = 2.0 * c12 * std::pow(w, n);
    rec.eps_traced = 2.0 * c12 * std::pow(w, n - rec.kept);
    rec.record_overlap = std::pow(b, rec.kept);
    rec.rhs = binary_entropy(0.5 * rec.eps_full) + 2.0 * binary_entropy(rec.eps_traced) +
              4.0 * rec.eps_traced +
              2.0 * std::sqrt(std::max(p1 * p2, 0.0)) * rec.record_overlap;
    rec.slack = rec.rhs - rec.exact_gap;
    rec.holds = rec.slack >= -1e-10;
    return rec;
}

namespace {

// Hand-rolled draws over mt19937_64 so instances are identical across
// standard libraries.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * pi * uniform01(rng));
}

Matrix random_unitary(std::mt19937_64& rng, int d) {
    Matrix g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = Cx(gaussian(rng), gaussian(rng));
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c) {
        const Cx piv = r(c, c);
        q.col(c) *= std::abs(piv) > 0.0 ? piv / std::abs(piv) : Cx(1.0, 0.0);
    }
    return q;
}

}  // namespace

Lemma1Instance random_lemma1_instance(std::uint64_t seed, int env_count, int env_dim,
                                      double fraction) {
    if (env_count < 2) throw std::invalid_argument("need at least two environments");
    if (env_dim < 2) throw std::invalid_argument("environment dimension must be >= 2");
    std::mt19937_64 rng(seed);

    Lemma1Instance inst;
    inst.env_count = env_count;
    inst.fraction = fraction;
    inst.u1 = random_unitary(rng, env_dim);
    inst.u2 = random_unitary(rng, env_dim);

    // Bloch ball with radius bounded away from the surface and the center
    const double r = 0.05 + 0.9 * uniform01(rng);
    const double z = 2.0 * uniform01(rng) - 1.0;
    const double phi = 2.0 * pi * uniform01(rng);
    const double sxy = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double bx = r * sxy * std::cos(phi);
    const double by = r * sxy * std::sin(phi);
    const double bz = r * z;
    inst.system_state.entries << Cx(0.5 * (1.0 + bz), 0.0), Cx(0.5 * bx, -0.5 * by),
        Cx(0.5 * bx, 0.5 * by), Cx(0.5 * (1.0 - bz), 0.0);

    const int rank = uniform01(rng) < 0.5 ? 1 : 2;
    Matrix g(env_dim, rank);
    for (int r2 = 0; r2 < env_dim; ++r2)
        for (int c = 0; c < rank; ++c) g(r2, c) = Cx(gaussian(rng), gaussian(rng));
    Matrix raw = g * g.adjoint();
    raw /= raw.trace().real();
    inst.env_state = DensityOperator{SubsystemDims{env_dim}, std::move(raw)};
    return inst;
}

}  // namespace sbs
