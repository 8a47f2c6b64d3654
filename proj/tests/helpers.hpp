#pragma once

// Deterministic random fixtures for the test suites. Draws are hand-rolled
// over mt19937_64 so every platform sees the same instances.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sbs/broadcast.hpp"
#include "sbs/qstate.hpp"

namespace testutil {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1)) % (hi - lo + 1);
}

inline double gaussian(std::mt19937_64& rng) {
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(2.0 * 3.14159265358979323846 * uniform01(rng));
}

inline sbs::Vector random_unit_vector(std::mt19937_64& rng, int n) {
    sbs::Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = sbs::Cx(gaussian(rng), gaussian(rng));
    return v / v.norm();
}

inline sbs::Matrix random_unitary(std::mt19937_64& rng, int n) {
    sbs::Matrix g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g(r, c) = sbs::Cx(gaussian(rng), gaussian(rng));
    Eigen::HouseholderQR<sbs::Matrix> qr(g);
    sbs::Matrix q = qr.householderQ();
    const sbs::Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < n; ++c) {
        const sbs::Cx piv = r(c, c);
        q.col(c) *= std::abs(piv) > 0.0 ? piv / std::abs(piv) : sbs::Cx(1.0, 0.0);
    }
    return q;
}

inline sbs::DensityOperator random_density(std::mt19937_64& rng, sbs::SubsystemDims dims,
                                           int rank = 0) {
    const int n = dims.total();
    const int r = rank > 0 ? rank : n;
    sbs::Matrix g(n, r);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < r; ++j) g(i, j) = sbs::Cx(gaussian(rng), gaussian(rng));
    sbs::Matrix m = g * g.adjoint();
    m /= m.trace().real();
    return {std::move(dims), std::move(m)};
}

inline sbs::PureState random_pure(std::mt19937_64& rng, sbs::SubsystemDims dims) {
    const int n = dims.total();
    return {std::move(dims), random_unit_vector(rng, n)};
}

// simplex draw with all entries >= min_p and pairwise gaps >= min_gap
inline std::vector<double> random_probabilities(std::mt19937_64& rng, int n, double min_p,
                                                double min_gap) {
    for (;;) {
        std::vector<double> p(static_cast<size_t>(n));
        double total = 0.0;
        for (double& v : p) total += v = -std::log(1.0 - uniform01(rng));
        for (double& v : p) v /= total;
        bool ok = true;
        for (size_t i = 0; i < p.size() && ok; ++i) {
            if (p[i] < min_p) ok = false;
            for (size_t j = i + 1; j < p.size() && ok; ++j)
                if (std::abs(p[i] - p[j]) < min_gap) ok = false;
        }
        if (ok) return p;
    }
}

// Broadcast spec with exactly orthogonal branch supports: each environment is
// carved into contiguous slices (one per label) rotated by a common unitary.
inline sbs::SbsSpec random_sbs_spec(std::mt19937_64& rng, int d_s, int env_count,
                                    int max_env_dim = 4) {
    sbs::SbsSpec spec;
    spec.probabilities = random_probabilities(rng, d_s, 0.05, 0.03);
    const sbs::Matrix basis = random_unitary(rng, d_s);
    for (int i = 0; i < d_s; ++i) spec.pointer_basis.push_back(basis.col(i));
    spec.branches.assign(static_cast<size_t>(d_s), {});
    for (int k = 0; k < env_count; ++k) {
        const int dim = uniform_int(rng, d_s, max_env_dim);
        // slice sizes >= 1 summing to dim
        std::vector<int> sizes(static_cast<size_t>(d_s), 1);
        for (int extra = dim - d_s; extra > 0; --extra)
            ++sizes[static_cast<size_t>(uniform_int(rng, 0, d_s - 1))];
        const sbs::Matrix u = random_unitary(rng, dim);
        int offset = 0;
        for (int i = 0; i < d_s; ++i) {
            const int s = sizes[static_cast<size_t>(i)];
            sbs::Matrix g(s, s);
            for (int r = 0; r < s; ++r)
                for (int c = 0; c < s; ++c) g(r, c) = sbs::Cx(gaussian(rng), gaussian(rng));
            sbs::Matrix block = g * g.adjoint();
            block /= block.trace().real();
            sbs::Matrix embedded = sbs::Matrix::Zero(dim, dim);
            embedded.block(offset, offset, s, s) = block;
            spec.branches[static_cast<size_t>(i)].push_back(
                {sbs::SubsystemDims{dim}, u * embedded * u.adjoint()});
            offset += s;
        }
    }
    return spec;
}

}  // namespace testutil
