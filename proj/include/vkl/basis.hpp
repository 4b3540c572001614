#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "vkl/errors.hpp"

namespace vkl {

using index_t = std::int64_t;

/// Mixed-radix structure of a bounded Vilenkin group: the generating
/// sequence m_0..m_{N-1} together with the place values M_0..M_N
/// (M_0 = 1, M_{k+1} = m_k * M_k).  Indices in [0, M_N) double as group
/// points via their digit expansion.
class VilenkinBasis {
public:
    VilenkinBasis() = default;

    int resolution() const { return static_cast<int>(m_.size()); }
    const std::vector<index_t>& radices() const { return m_; }
    index_t radix(int k) const { return m_.at(static_cast<std::size_t>(k)); }
    index_t power(int k) const { return powers_.at(static_cast<std::size_t>(k)); }
    index_t point_count() const { return powers_.back(); }
    index_t max_radix() const { return max_radix_; }

    bool operator==(const VilenkinBasis&) const = default;

private:
    friend VilenkinBasis build_basis(std::span<const index_t>, int);

    std::vector<index_t> m_;
    std::vector<index_t> powers_;  // M_0..M_N
    index_t max_radix_ = 0;
};

/// Builds a basis by repeating `pattern` cyclically to length `resolution`.
inline VilenkinBasis build_basis(std::span<const index_t> pattern, int resolution) {
    require(!pattern.empty(), errc::invalid_basis, "empty generating pattern");
    require(resolution >= 1, errc::invalid_basis, "resolution must be >= 1");
    for (index_t p : pattern)
        require(p >= 2, errc::invalid_basis,
                "generating sequence entry " + std::to_string(p) + " < 2");

    VilenkinBasis b;
    b.m_.resize(static_cast<std::size_t>(resolution));
    b.powers_.resize(static_cast<std::size_t>(resolution) + 1);
    b.powers_[0] = 1;
    b.max_radix_ = 0;
    for (int k = 0; k < resolution; ++k) {
        index_t mk = pattern[static_cast<std::size_t>(k) % pattern.size()];
        b.m_[static_cast<std::size_t>(k)] = mk;
        if (mk > b.max_radix_) b.max_radix_ = mk;
        index_t prev = b.powers_[static_cast<std::size_t>(k)];
        require(prev <= std::numeric_limits<index_t>::max() / mk, errc::resolution_too_large,
                "M_" + std::to_string(k + 1) + " exceeds the machine index range");
        b.powers_[static_cast<std::size_t>(k) + 1] = prev * mk;
    }
    return b;
}

inline VilenkinBasis build_basis(std::initializer_list<index_t> pattern, int resolution) {
    return build_basis(std::span<const index_t>(pattern.begin(), pattern.size()), resolution);
}

/// Digits n_k of n = sum n_k M_k, with order = max{k : n_k != 0}
/// (order = -1 for n = 0).
struct DigitExpansion {
    std::vector<index_t> digits;
    int order = -1;
};

inline DigitExpansion expand(const VilenkinBasis& basis, index_t n) {
    require(n >= 0 && n < basis.point_count(), errc::out_of_range,
            "index " + std::to_string(n) + " not in [0, M_N)");
    DigitExpansion e;
    e.digits.resize(static_cast<std::size_t>(basis.resolution()), 0);
    index_t rest = n;
    for (int k = 0; k < basis.resolution(); ++k) {
        index_t d = rest % basis.radix(k);
        e.digits[static_cast<std::size_t>(k)] = d;
        rest /= basis.radix(k);
        if (d != 0) e.order = k;
    }
    return e;
}

/// Digitwise addition mod m_k (the group operation carried to indices).
inline index_t digitwise_add(const VilenkinBasis& basis, index_t a, index_t b) {
    DigitExpansion da = expand(basis, a), db = expand(basis, b);
    index_t out = 0;
    for (int k = basis.resolution() - 1; k >= 0; --k) {
        index_t d = (da.digits[static_cast<std::size_t>(k)] + db.digits[static_cast<std::size_t>(k)]) %
                    basis.radix(k);
        out = out * basis.radix(k) + d;
    }
    return out;
}

/// The sparse index q_A = M_{2A} + M_{2A-2} + ... + M_0.  Requires
/// 2A+1 <= N so every kernel with spectrum below q_A fits the grid.
inline index_t q_index(const VilenkinBasis& basis, int level) {
    require(level >= 0, errc::out_of_range, "negative level");
    require(2 * level + 1 <= basis.resolution(), errc::out_of_range,
            "level " + std::to_string(level) + " needs resolution >= " +
                std::to_string(2 * level + 1));
    index_t q = 0;
    for (int j = 0; j <= level; ++j) q += basis.power(2 * j);
    return q;
}

/// Compensated (Kahan) accumulator for long non-negative/real sums.
class kahan_sum {
public:
    void add(double x) {
        double y = x - carry_;
        double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Harmonic sum l_n = sum_{k=1}^{n-1} 1/k, the normalizer of the
/// logarithmic mean; the weights 1/(n-j), j=1..n-1, add up to exactly
/// this value.  Undefined for n < 2.
inline double harmonic(index_t n) {
    require(n >= 2, errc::undefined_mean, "harmonic sum needs n >= 2");
    kahan_sum acc;
    for (index_t k = 1; k < n; ++k) acc.add(1.0 / static_cast<double>(k));
    return acc.value();
}

/// Prefix table H with H[j] = l_j for j <= n_max (H[0] = H[1] = 0).
inline std::vector<double> harmonic_prefix(index_t n_max) {
    require(n_max >= 1, errc::out_of_range, "harmonic prefix needs n_max >= 1");
    std::vector<double> h(static_cast<std::size_t>(n_max) + 1, 0.0);
    kahan_sum acc;
    for (index_t j = 2; j <= n_max; ++j) {
        acc.add(1.0 / static_cast<double>(j - 1));
        h[static_cast<std::size_t>(j)] = acc.value();
    }
    return h;
}

}  // namespace vkl
