#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "vkl/basis.hpp"
#include "vkl/errors.hpp"

namespace vkl {

using rational = boost::multiprecision::cpp_rational;

inline constexpr index_t kExactHarmonicMax = 10000;

/// Exact-rational l_n for oracle tests; capped because the reduced
/// denominator grows like lcm(1..n).
inline rational harmonic_exact(index_t n) {
    require(n >= 2, errc::undefined_mean, "harmonic sum needs n >= 2");
    require(n <= kExactHarmonicMax, errc::out_of_range,
            "exact harmonic sums capped at n = " + std::to_string(kExactHarmonicMax));
    rational acc = 0;
    for (index_t k = 1; k < n; ++k) acc += rational(1, k);
    return acc;
}

/// theta_n at the zero point, summed directly: sum_{k=1}^{n-1} (n-k)/k.
/// Every Dirichlet kernel equals its index at the identity, so this is
/// exact in rational arithmetic.
inline rational theta_at_zero_exact(index_t n) {
    require(n >= 2, errc::undefined_mean, "theta needs n >= 2");
    require(n <= kExactHarmonicMax, errc::out_of_range,
            "exact theta values capped at n = " + std::to_string(kExactHarmonicMax));
    rational acc = 0;
    for (index_t k = 1; k < n; ++k) acc += rational(n - k, k);
    return acc;
}

}  // namespace vkl
