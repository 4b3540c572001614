#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vkl/basis.hpp"
#include "vkl/grid.hpp"
#include "vkl/transform.hpp"

namespace vkl {

enum class KernelKind { dirichlet, fejer, theta, log };

struct KernelSpec {
    KernelKind kind;
    index_t n;
};

inline constexpr index_t kOracleMaxKernelIndex = 512;

namespace detail {

inline void check_kernel_index(const VilenkinBasis& basis, index_t n, index_t lo) {
    require(n >= lo && n <= basis.point_count(), errc::out_of_range,
            "kernel index " + std::to_string(n) + " outside [" + std::to_string(lo) + ", M_N]");
}

inline void check_oracle_kernel(const VilenkinBasis& basis, index_t n) {
    require(basis.point_count() <= kOracleMaxPoints && n <= kOracleMaxKernelIndex,
            errc::oracle_cutoff_exceeded,
            "naive kernels limited to M_N <= " + std::to_string(kOracleMaxPoints) +
                " and n <= " + std::to_string(kOracleMaxKernelIndex));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed-form coefficient profiles.  Each one is validated against the naive
// summation oracle in the test suite before the growth experiments rely on it.
// ---------------------------------------------------------------------------

/// D_hat_n(v) = 1 for v < n.
inline std::vector<cplx> dirichlet_profile(const VilenkinBasis& basis, index_t n) {
    detail::check_kernel_index(basis, n, 0);
    std::vector<cplx> p(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t v = 0; v < n; ++v) p[static_cast<std::size_t>(v)] = 1.0;
    return p;
}

/// K_hat_n(v) = (n - v)/n for v < n.
inline std::vector<cplx> fejer_profile(const VilenkinBasis& basis, index_t n) {
    detail::check_kernel_index(basis, n, 1);
    std::vector<cplx> p(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t v = 0; v < n; ++v)
        p[static_cast<std::size_t>(v)] = static_cast<double>(n - v) / static_cast<double>(n);
    return p;
}

/// theta_hat_n(v) = l_{n-v} for v <= n-2 (zero beyond, since l_1 = 0).
inline std::vector<cplx> theta_profile(const VilenkinBasis& basis, index_t n) {
    detail::check_kernel_index(basis, n, 2);
    std::vector<cplx> p(static_cast<std::size_t>(basis.point_count()), cplx{});
    std::vector<double> h = harmonic_prefix(n);
    for (index_t v = 0; v + 2 <= n; ++v) p[static_cast<std::size_t>(v)] = h[static_cast<std::size_t>(n - v)];
    return p;
}

// ---------------------------------------------------------------------------
// Spectral constructions: one inverse transform over the profile.
// ---------------------------------------------------------------------------

inline GridFunction dirichlet_kernel(const VilenkinBasis& basis, index_t n) {
    return inverse(Spectrum{basis, dirichlet_profile(basis, n)});
}

inline GridFunction fejer_kernel(const VilenkinBasis& basis, index_t n) {
    return inverse(Spectrum{basis, fejer_profile(basis, n)});
}

inline GridFunction theta_kernel(const VilenkinBasis& basis, index_t n) {
    return inverse(Spectrum{basis, theta_profile(basis, n)});
}

/// F_n = theta_n / l_n, the kernel of the logarithmic mean.
inline GridFunction log_kernel(const VilenkinBasis& basis, index_t n) {
    return scale(theta_kernel(basis, n), 1.0 / harmonic(n));
}

inline GridFunction make_kernel(const VilenkinBasis& basis, KernelSpec spec) {
    switch (spec.kind) {
        case KernelKind::dirichlet: return dirichlet_kernel(basis, spec.n);
        case KernelKind::fejer: return fejer_kernel(basis, spec.n);
        case KernelKind::theta: return theta_kernel(basis, spec.n);
        case KernelKind::log: return log_kernel(basis, spec.n);
    }
    fail(errc::out_of_range, "unknown kernel kind");
}

// ---------------------------------------------------------------------------
// Naive summation oracles (cutoff-guarded).
// ---------------------------------------------------------------------------

/// Running sum D_{j+1} = D_j + psi_j.
inline GridFunction naive_dirichlet_kernel(const VilenkinBasis& basis, index_t n) {
    detail::check_kernel_index(basis, n, 0);
    detail::check_oracle_kernel(basis, n);
    std::vector<cplx> acc(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t j = 0; j < n; ++j) {
        GridFunction psi = character(basis, j);
        for (index_t t = 0; t < basis.point_count(); ++t) acc[static_cast<std::size_t>(t)] += psi.value(t);
    }
    return GridFunction(basis, std::move(acc));
}

/// Plain average of D_1..D_n.
inline GridFunction naive_fejer_kernel(const VilenkinBasis& basis, index_t n) {
    detail::check_kernel_index(basis, n, 1);
    detail::check_oracle_kernel(basis, n);
    std::vector<cplx> running(static_cast<std::size_t>(basis.point_count()), cplx{});  // D_j
    std::vector<cplx> acc(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t j = 1; j <= n; ++j) {
        GridFunction psi = character(basis, j - 1);
        for (index_t t = 0; t < basis.point_count(); ++t) {
            running[static_cast<std::size_t>(t)] += psi.value(t);
            acc[static_cast<std::size_t>(t)] += running[static_cast<std::size_t>(t)];
        }
    }
    double inv = 1.0 / static_cast<double>(n);
    for (cplx& v : acc) v *= inv;
    return GridFunction(basis, std::move(acc));
}

/// theta_n = sum_{j=1}^{n-1} D_j / (n - j), summed directly.
inline GridFunction naive_theta_kernel(const VilenkinBasis& basis, index_t n) {
    detail::check_kernel_index(basis, n, 2);
    detail::check_oracle_kernel(basis, n);
    std::vector<cplx> running(static_cast<std::size_t>(basis.point_count()), cplx{});  // D_j
    std::vector<cplx> acc(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t j = 1; j < n; ++j) {
        GridFunction psi = character(basis, j - 1);
        double w = 1.0 / static_cast<double>(n - j);
        for (index_t t = 0; t < basis.point_count(); ++t) {
            running[static_cast<std::size_t>(t)] += psi.value(t);
            acc[static_cast<std::size_t>(t)] += running[static_cast<std::size_t>(t)] * w;
        }
    }
    return GridFunction(basis, std::move(acc));
}

inline GridFunction naive_log_kernel(const VilenkinBasis& basis, index_t n) {
    return scale(naive_theta_kernel(basis, n), 1.0 / harmonic(n));
}

// ---------------------------------------------------------------------------
// Structural identities.
// ---------------------------------------------------------------------------

/// Checks D_{j+M_n} = D_{M_n} + psi_{M_n} D_j cellwise (requires j < M_n).
inline bool shift_identity_check(const VilenkinBasis& basis, index_t j, int n,
                                 double tol = 1e-12) {
    require(n >= 0 && n <= basis.resolution(), errc::out_of_range, "rank out of range");
    index_t mn = basis.power(n);
    require(j >= 0 && j < mn, errc::out_of_range, "need j < M_n");
    require(j + mn <= basis.point_count(), errc::out_of_range, "need j + M_n <= M_N");
    GridFunction lhs = dirichlet_kernel(basis, j + mn);
    GridFunction rhs = add(dirichlet_kernel(basis, mn),
                           multiply(character(basis, mn), dirichlet_kernel(basis, j)));
    return max_abs_diff(lhs, rhs) <= tol;
}

/// theta_{q_A} split into the shifted head
///   I = l_{q_{A-1}} D_{M_{2A}} + r_{2A} theta_{q_{A-1}}
/// and the tail II = sum_{j=1}^{M_{2A}} D_j / (q_A - j), with an Abel-
/// transform L1 bound for the tail derived from ||K_n||_1 <= 2:
///   ||II||_1 <= 2 M_{2A}/q_{A-1} + 2 sum_{k=q_{A-1}+1}^{q_A-1} (q_A-k)/(k(k-1)).
struct SparseThetaSplit {
    index_t q;        // q_A
    index_t q_prev;   // q_{A-1}
    GridFunction head;
    GridFunction tail;
    double tail_norm1;
    double tail_norm1_bound;
    double recombination_error;
};

inline SparseThetaSplit sparse_theta_split(const VilenkinBasis& basis, int level) {
    require(level >= 1, errc::out_of_range, "decomposition needs level >= 1");
    require(2 * level + 1 <= basis.resolution(), errc::insufficient_resolution,
            "level " + std::to_string(level) + " needs resolution >= " +
                std::to_string(2 * level + 1));
    const index_t q = q_index(basis, level);
    const index_t qp = q_index(basis, level - 1);
    const index_t m2a = basis.power(2 * level);
    const std::vector<double> h = harmonic_prefix(q);

    GridFunction theta_q = theta_kernel(basis, q);

    // Head: the j > M_{2A} part collapses through the Dirichlet shift identity.
    GridFunction head = GridFunction::zero(basis);
    if (qp >= 2) {
        head = add(scale(dirichlet_kernel(basis, m2a), h[static_cast<std::size_t>(qp)]),
                   multiply(character(basis, m2a), theta_kernel(basis, qp)));
    }
    // level == 1: q_0 = 1, l_1 = 0 and theta_1 is the empty sum, so head = 0.

    // Tail, built from its own coefficient profile
    // (sum_{i=q_{A-1}}^{q_A-1-v} 1/i = l_{q_A-v} - l_{q_{A-1}} for v < M_{2A}).
    std::vector<cplx> tail_profile(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t v = 0; v < m2a; ++v)
        tail_profile[static_cast<std::size_t>(v)] =
            h[static_cast<std::size_t>(q - v)] - h[static_cast<std::size_t>(qp)];
    GridFunction tail = inverse(Spectrum{basis, std::move(tail_profile)});

    double recomb = max_abs_diff(theta_q, add(head, tail));
    require(recomb <= 1e-10, errc::identity_violation,
            "theta_{q_A} != head + tail, max cell error " + format_double(recomb));

    kahan_sum bound;
    bound.add(2.0 * static_cast<double>(m2a) / static_cast<double>(qp));
    for (index_t k = qp + 1; k <= q - 1; ++k)
        bound.add(2.0 * static_cast<double>(q - k) /
                  (static_cast<double>(k) * static_cast<double>(k - 1)));

    double tail_norm = norm_1(tail);
    return SparseThetaSplit{q, qp, std::move(head), std::move(tail), tail_norm,
                               bound.value(), recomb};
}

}  // namespace vkl
