#include "sbs/info.hpp"

#include <algorithm>
#include <cmath>

namespace sbs {

void Ensemble::validate(double tol) const {
    if (probabilities.size() != states.size() || probabilities.empty())
        throw std::invalid_argument("ensemble: probability/state count mismatch");
    double total = 0.0;
    for (double p : probabilities) {
        if (p < -tol) throw std::invalid_argument("ensemble: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > tol)
        throw std::invalid_argument("ensemble: probabilities do not sum to 1");
    for (const auto& s : states)
        if (s.entries.rows() != states.front().entries.rows())
            throw std::invalid_argument("ensemble: state dimension mismatch");
}

void JointPMF::validate(double tol) const {
    if (p.size() == 0) throw std::invalid_argument("joint pmf: empty table");
    if (p.minCoeff() < -tol) throw std::invalid_argument("joint pmf: negative entry");
    if (std::abs(p.sum() - 1.0) > tol)
        throw std::invalid_argument("joint pmf: entries do not sum to 1");
}

namespace {

std::vector<int> complement_of(const SubsystemDims& dims, const std::vector<int>& side) {
    std::vector<int> rest;
    for (int k = 0; k < dims.count(); ++k)
        if (std::find(side.begin(), side.end(), k) == side.end()) rest.push_back(k);
    return rest;
}

}  // namespace

double mutual_information(const DensityOperator& rho, const std::vector<int>& side_a,
                          double tol) {
    const std::vector<int> side_b = complement_of(rho.dims, side_a);
    if (side_a.empty() || side_b.empty())
        throw std::invalid_argument("mutual_information: cut must leave both sides nonempty");
    const double sa = vn_entropy(partial_trace(rho, side_a), tol);
    const double sb = vn_entropy(partial_trace(rho, side_b), tol);
    return sa + sb - vn_entropy(rho, tol);
}

double conditional_vn_entropy(const DensityOperator& rho,
                              const std::vector<int>& conditioning, double tol) {
    if (complement_of(rho.dims, conditioning).empty())
        throw std::invalid_argument("conditional_vn_entropy: nothing left unconditioned");
    return vn_entropy(rho, tol) - vn_entropy(partial_trace(rho, conditioning), tol);
}

double holevo_chi(const Ensemble& ensemble, double tol) {
    ensemble.validate(tol);
    Matrix avg = Matrix::Zero(ensemble.states.front().entries.rows(),
                              ensemble.states.front().entries.cols());
    double conditional = 0.0;
    for (size_t i = 0; i < ensemble.states.size(); ++i) {
        const double p = std::max(ensemble.probabilities[i], 0.0);
        avg += p * ensemble.states[i].entries;
        if (p > 0.0) conditional += p * vn_entropy(ensemble.states[i], tol);
    }
    DensityOperator mixture{SubsystemDims{static_cast<int>(avg.rows())}, std::move(avg)};
    return vn_entropy(mixture, tol) - conditional;
}

double classical_mutual_information(const JointPMF& pmf, double tol) {
    pmf.validate(tol);
    const Eigen::VectorXd rows = pmf.p.rowwise().sum();
    const Eigen::VectorXd cols = pmf.p.colwise().sum();
    double info = 0.0;
    for (Eigen::Index i = 0; i < pmf.p.rows(); ++i)
        for (Eigen::Index j = 0; j < pmf.p.cols(); ++j) {
            const double q = pmf.p(i, j);
            if (q > 0.0) info += q * std::log2(q / (rows(i) * cols(j)));
        }
    return info;
}

double fannes_audenaert_rhs(double eps, int dim) {
    if (dim < 2) throw std::invalid_argument("fannes_audenaert_rhs: dimension must be >= 2");
    if (eps < 0.0) throw std::domain_error("fannes_audenaert_rhs: negative distance");
    const double t = eps / 2.0;
    if (t > 1.0 - 1.0 / dim)
        throw std::domain_error("fannes_audenaert_rhs: distance outside the bound's range");
    return t * std::log2(static_cast<double>(dim - 1)) + binary_entropy(t);
}

double alicki_fannes_rhs(double eps, int dim) {
    if (dim < 2) throw std::invalid_argument("alicki_fannes_rhs: dimension must be >= 2");
    if (eps < 0.0 || eps > 1.0)
        throw std::domain_error("alicki_fannes_rhs: distance outside [0,1]");
    return 4.0 * eps * std::log2(static_cast<double>(dim)) + 2.0 * binary_entropy(eps);
}

double distinguishability_lower_bound(double p1, double p2, double b, int copies) {
    if (p1 < 0.0 || p2 < 0.0 || std::abs(p1 + p2 - 1.0) > default_tol)
        throw std::invalid_argument("distinguishability_lower_bound: bad probabilities");
    if (b < 0.0 || b > 1.0)
        throw std::domain_error("distinguishability_lower_bound: overlap outside [0,1]");
    if (copies < 0) throw std::invalid_argument("distinguishability_lower_bound: copies < 0");
    const double h = shannon_entropy({p1, p2});
    return std::max(0.0, h - 2.0 * std::sqrt(p1 * p2) * std::pow(b, copies));
}

}  // namespace sbs
