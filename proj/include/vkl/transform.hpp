#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "vkl/basis.hpp"
#include "vkl/grid.hpp"

namespace vkl {

/// Vilenkin--Fourier coefficients f_hat(0..M_N-1).
struct Spectrum {
    VilenkinBasis basis;
    std::vector<cplx> coeffs;
};

/// Frequency-domain weight sequence; applying it realizes every
/// summability method used here as f_hat(v) -> w(v) f_hat(v).
struct Multiplier {
    std::vector<cplx> weights;
};

inline constexpr index_t kOracleMaxPoints = 4096;

namespace detail {

/// m-th roots of unity exp(sign * 2 pi i j / m), exact on the real and
/// imaginary axes so the Walsh case stays in {+1, -1}.
inline std::vector<cplx> unit_roots(index_t m, int sign) {
    std::vector<cplx> w(static_cast<std::size_t>(m));
    for (index_t j = 0; j < m; ++j) {
        if (j == 0) {
            w[0] = {1.0, 0.0};
        } else if (2 * j == m) {
            w[static_cast<std::size_t>(j)] = {-1.0, 0.0};
        } else if (4 * j == m) {
            w[static_cast<std::size_t>(j)] = {0.0, sign * 1.0};
        } else if (4 * j == 3 * m) {
            w[static_cast<std::size_t>(j)] = {0.0, sign * -1.0};
        } else {
            double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
            w[static_cast<std::size_t>(j)] = {std::cos(ang), std::sin(ang)};
        }
    }
    return w;
}

/// One digit-axis pass of the tensor-product transform: an m_k-point DFT
/// across stride M_k within every group, in place.  The group is a direct
/// product, so there are no cross-axis twiddle factors.
inline void axis_pass(std::vector<cplx>& v, const VilenkinBasis& basis, int k, int sign) {
    const index_t m = basis.radix(k);
    const index_t stride = basis.power(k);
    const index_t span = stride * m;  // = M_{k+1}
    const index_t total = static_cast<index_t>(v.size());

    if (m == 2) {
        for (index_t base = 0; base < total; base += span)
            for (index_t lo = 0; lo < stride; ++lo) {
                cplx a = v[static_cast<std::size_t>(base + lo)];
                cplx b = v[static_cast<std::size_t>(base + lo + stride)];
                v[static_cast<std::size_t>(base + lo)] = a + b;
                v[static_cast<std::size_t>(base + lo + stride)] = a - b;
            }
        return;
    }

    const std::vector<cplx> w = unit_roots(m, sign);
    std::vector<cplx> tmp(static_cast<std::size_t>(m));
    for (index_t base = 0; base < total; base += span)
        for (index_t lo = 0; lo < stride; ++lo) {
            for (index_t d = 0; d < m; ++d) tmp[static_cast<std::size_t>(d)] = v[static_cast<std::size_t>(base + lo + d * stride)];
            for (index_t out_d = 0; out_d < m; ++out_d) {
                cplx acc{};
                for (index_t d = 0; d < m; ++d)
                    acc += tmp[static_cast<std::size_t>(d)] * w[static_cast<std::size_t>((out_d * d) % m)];
                v[static_cast<std::size_t>(base + lo + out_d * stride)] = acc;
            }
        }
}

}  // namespace detail

/// The Vilenkin character psi_n: value exp(2 pi i sum_k n_k x_k / m_k) at
/// the point with digits x.  Built by tensor expansion in O(M_N).
inline GridFunction character(const VilenkinBasis& basis, index_t n) {
    require(n >= 0 && n < basis.point_count(), errc::out_of_range,
            "character index " + std::to_string(n) + " not in [0, M_N)");
    DigitExpansion nd = expand(basis, n);
    std::vector<cplx> v;
    v.reserve(static_cast<std::size_t>(basis.point_count()));
    v.push_back({1.0, 0.0});
    for (int k = 0; k < basis.resolution(); ++k) {
        const index_t m = basis.radix(k);
        const index_t nk = nd.digits[static_cast<std::size_t>(k)];
        const std::vector<cplx> w = detail::unit_roots(m, +1);
        const std::size_t block = v.size();
        v.resize(block * static_cast<std::size_t>(m));
        for (index_t d = m - 1; d >= 1; --d) {
            cplx f = w[static_cast<std::size_t>((nk * d) % m)];
            for (std::size_t t = 0; t < block; ++t)
                v[static_cast<std::size_t>(d) * block + t] = v[t] * f;
        }
    }
    return GridFunction(basis, std::move(v));
}

/// Fast forward transform: f_hat(n) = (1/M_N) sum_t f(t) conj(psi_n(t)),
/// computed as one cyclic DFT per digit axis.
inline Spectrum forward(const GridFunction& f) {
    std::vector<cplx> v(f.values().begin(), f.values().end());
    for (int k = 0; k < f.basis().resolution(); ++k) detail::axis_pass(v, f.basis(), k, -1);
    double inv = 1.0 / static_cast<double>(f.size());
    for (cplx& x : v) x *= inv;
    return Spectrum{f.basis(), std::move(v)};
}

/// Fast inverse transform: sum_v coeffs[v] psi_v, no normalization factor.
inline GridFunction inverse(const Spectrum& s) {
    require(static_cast<index_t>(s.coeffs.size()) == s.basis.point_count(),
            errc::incompatible_operands, "spectrum length must equal M_N");
    std::vector<cplx> v(s.coeffs.begin(), s.coeffs.end());
    for (int k = 0; k < s.basis.resolution(); ++k) detail::axis_pass(v, s.basis, k, +1);
    return GridFunction(s.basis, std::move(v));
}

/// Quadratic-time oracle for the forward transform; guarded so it is only
/// usable at oracle sizes.
inline Spectrum naive_forward(const GridFunction& f) {
    require(f.size() <= kOracleMaxPoints, errc::oracle_cutoff_exceeded,
            "naive transform limited to M_N <= " + std::to_string(kOracleMaxPoints));
    std::vector<cplx> coeffs(static_cast<std::size_t>(f.size()), cplx{});
    for (index_t n = 0; n < f.size(); ++n) {
        GridFunction psi = character(f.basis(), n);
        kahan_sum re, im;
        for (index_t t = 0; t < f.size(); ++t) {
            cplx term = f.value(t) * std::conj(psi.value(t));
            re.add(term.real());
            im.add(term.imag());
        }
        double inv = 1.0 / static_cast<double>(f.size());
        coeffs[static_cast<std::size_t>(n)] = cplx{re.value(), im.value()} * inv;
    }
    return Spectrum{f.basis(), std::move(coeffs)};
}

inline GridFunction naive_inverse(const Spectrum& s) {
    require(static_cast<index_t>(s.coeffs.size()) == s.basis.point_count(),
            errc::incompatible_operands, "spectrum length must equal M_N");
    require(s.basis.point_count() <= kOracleMaxPoints, errc::oracle_cutoff_exceeded,
            "naive transform limited to M_N <= " + std::to_string(kOracleMaxPoints));
    std::vector<cplx> acc(static_cast<std::size_t>(s.basis.point_count()), cplx{});
    for (index_t n = 0; n < s.basis.point_count(); ++n) {
        if (s.coeffs[static_cast<std::size_t>(n)] == cplx{}) continue;
        GridFunction psi = character(s.basis, n);
        for (index_t t = 0; t < s.basis.point_count(); ++t)
            acc[static_cast<std::size_t>(t)] += s.coeffs[static_cast<std::size_t>(n)] * psi.value(t);
    }
    return GridFunction(s.basis, std::move(acc));
}

/// inverse(w . forward(f)).
inline GridFunction apply_multiplier(const GridFunction& f, const Multiplier& w) {
    require(static_cast<index_t>(w.weights.size()) == f.size(), errc::incompatible_operands,
            "multiplier length must equal M_N");
    Spectrum s = forward(f);
    for (index_t v = 0; v < f.size(); ++v)
        s.coeffs[static_cast<std::size_t>(v)] *= w.weights[static_cast<std::size_t>(v)];
    return inverse(s);
}

}  // namespace vkl
