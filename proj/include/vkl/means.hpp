#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "vkl/basis.hpp"
#include "vkl/grid.hpp"
#include "vkl/transform.hpp"

namespace vkl {

/// Nonnegative Noerlund weight sequence q_1, q_2, ...; the mean t_n
/// averages S_1..S_{n-1} with reversed weights q_{n-k}.
struct NorlundWeights {
    enum class Kind { constant_one, reciprocal, custom };

    Kind kind = Kind::constant_one;
    std::vector<double> custom;  // custom[k-1] = q_k

    double weight(index_t k) const {
        switch (kind) {
            case Kind::constant_one: return 1.0;
            case Kind::reciprocal: return 1.0 / static_cast<double>(k);
            case Kind::custom:
                require(k >= 1 && k <= static_cast<index_t>(custom.size()), errc::out_of_range,
                        "custom weight index " + std::to_string(k) + " unavailable");
                return custom[static_cast<std::size_t>(k - 1)];
        }
        fail(errc::out_of_range, "unknown weight kind");
    }

    static NorlundWeights fejer() { return NorlundWeights{Kind::constant_one, {}}; }
    static NorlundWeights logarithmic() { return NorlundWeights{Kind::reciprocal, {}}; }
    static NorlundWeights from(std::vector<double> q) {
        for (double v : q)
            require(v >= 0.0, errc::invalid_config, "Noerlund weights must be nonnegative");
        return NorlundWeights{Kind::custom, std::move(q)};
    }
};

/// Normalizer choice for t_n: the sum of the weights actually used
/// (default, makes t_n a genuine mean) or the harmonic sum l_n.
enum class NorlundNormalizer { weight_sum, harmonic };

// ---------------------------------------------------------------------------
// Multiplier profiles.
// ---------------------------------------------------------------------------

inline Multiplier partial_sum_multiplier(const VilenkinBasis& basis, index_t n) {
    require(n >= 0 && n <= basis.point_count(), errc::out_of_range,
            "partial-sum order " + std::to_string(n) + " outside [0, M_N]");
    std::vector<cplx> w(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t v = 0; v < n; ++v) w[static_cast<std::size_t>(v)] = 1.0;
    return Multiplier{std::move(w)};
}

/// L_n multiplier l_{n-v}/l_n for v <= n-2; zero beyond.
inline Multiplier log_mean_multiplier(const VilenkinBasis& basis, index_t n) {
    require(n >= 2, errc::undefined_mean, "logarithmic mean needs n >= 2");
    require(n <= basis.point_count(), errc::out_of_range, "mean order exceeds M_N");
    std::vector<double> h = harmonic_prefix(n);
    double inv_ln = 1.0 / h[static_cast<std::size_t>(n)];
    std::vector<cplx> w(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t v = 0; v + 2 <= n; ++v)
        w[static_cast<std::size_t>(v)] = h[static_cast<std::size_t>(n - v)] * inv_ln;
    return Multiplier{std::move(w)};
}

/// t_n multiplier: with P_j = q_1 + ... + q_j, weight(v) = P_{n-1-v} over
/// the chosen normalizer.
inline Multiplier norlund_multiplier(const VilenkinBasis& basis, index_t n,
                                     const NorlundWeights& weights,
                                     NorlundNormalizer normalizer = NorlundNormalizer::weight_sum) {
    require(n >= 2, errc::undefined_mean, "Noerlund mean needs n >= 2");
    require(n <= basis.point_count(), errc::out_of_range, "mean order exceeds M_N");
    std::vector<double> prefix(static_cast<std::size_t>(n), 0.0);  // prefix[j] = P_j
    kahan_sum acc;
    for (index_t j = 1; j <= n - 1; ++j) {
        acc.add(weights.weight(j));
        prefix[static_cast<std::size_t>(j)] = acc.value();
    }
    double q_n = prefix[static_cast<std::size_t>(n - 1)];
    require(q_n > 0.0, errc::undefined_mean, "Noerlund weights sum to zero over the used prefix");
    double norm = normalizer == NorlundNormalizer::weight_sum ? q_n : harmonic(n);
    std::vector<cplx> w(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t v = 0; v + 2 <= n; ++v)
        w[static_cast<std::size_t>(v)] = prefix[static_cast<std::size_t>(n - 1 - v)] / norm;
    return Multiplier{std::move(w)};
}

// ---------------------------------------------------------------------------
// Means.
// ---------------------------------------------------------------------------

/// S_n f, spectral truncation below n.
inline GridFunction partial_sum(const GridFunction& f, index_t n) {
    return apply_multiplier(f, partial_sum_multiplier(f.basis(), n));
}

inline GridFunction norlund_mean(const GridFunction& f, index_t n, const NorlundWeights& weights,
                                 NorlundNormalizer normalizer = NorlundNormalizer::weight_sum) {
    return apply_multiplier(f, norlund_multiplier(f.basis(), n, weights, normalizer));
}

/// The Noerlund logarithmic mean L_n f.
inline GridFunction log_mean(const GridFunction& f, index_t n) {
    return apply_multiplier(f, log_mean_multiplier(f.basis(), n));
}

// ---------------------------------------------------------------------------
// Weighted maximal operators.
// ---------------------------------------------------------------------------

/// Nondecreasing normalizer phi in sup_n |T_n f| / phi(n).
struct WeightFunction {
    enum class Preset { constant, log1p, sqrt_log, pow_log };

    Preset preset = Preset::log1p;
    double gamma = 1.0;  // only for pow_log

    double operator()(index_t n) const {
        double l = std::log(static_cast<double>(n) + 1.0);
        switch (preset) {
            case Preset::constant: return 1.0;
            case Preset::log1p: return l;
            case Preset::sqrt_log: return std::sqrt(l);
            case Preset::pow_log: return std::pow(l, gamma);
        }
        fail(errc::invalid_config, "unknown weight preset");
    }

    /// Whether limsup log(n+1)/phi(n) is infinite, i.e. phi grows
    /// strictly slower than the logarithm.
    bool strictly_sublogarithmic() const {
        switch (preset) {
            case Preset::constant: return true;
            case Preset::log1p: return false;
            case Preset::sqrt_log: return true;
            case Preset::pow_log: return gamma < 1.0;
        }
        return false;
    }

    std::string name() const {
        switch (preset) {
            case Preset::constant: return "constant";
            case Preset::log1p: return "log1p";
            case Preset::sqrt_log: return "sqrt-log";
            case Preset::pow_log: return "pow-log:" + format_double(gamma);
        }
        return "unknown";
    }

    /// Parses "constant" | "log1p" | "sqrt-log" | "pow-log[:gamma]".
    static WeightFunction parse(const std::string& text) {
        if (text == "constant") return {Preset::constant, 1.0};
        if (text == "log1p") return {Preset::log1p, 1.0};
        if (text == "sqrt-log") return {Preset::sqrt_log, 1.0};
        if (text == "pow-log") return {Preset::pow_log, 0.5};
        const std::string prefix = "pow-log:";
        if (text.rfind(prefix, 0) == 0) {
            double g = 0.0;
            try {
                g = std::stod(text.substr(prefix.size()));
            } catch (const std::exception&) {
                fail(errc::invalid_config, "bad pow-log exponent in '" + text + "'");
            }
            require(g > 0.0, errc::invalid_config, "pow-log exponent must be positive");
            return {Preset::pow_log, g};
        }
        fail(errc::invalid_config, "unknown weight preset '" + text + "'");
    }
};

enum class MeanMethod { partial_sum, log_mean };

/// Cellwise sup over n in [n_lo, n_max] of |T_n f| / phi(n), where T is
/// the partial sum (n_lo = 1) or the logarithmic mean (n_lo = 2).  The
/// partial-sum branch accumulates S_n incrementally; the log-mean branch
/// runs one inverse transform per n.
inline GridFunction maximal_ratio(const GridFunction& f, index_t n_max, const WeightFunction& phi,
                                  MeanMethod method) {
    require(n_max <= f.size(), errc::out_of_range, "n_max exceeds M_N");
    const index_t n_lo = method == MeanMethod::partial_sum ? 1 : 2;
    require(n_max >= n_lo, errc::out_of_range, "n_max below the first admissible order");

    const std::size_t cells = static_cast<std::size_t>(f.size());
    std::vector<cplx> env(cells, cplx{});
    Spectrum spec = forward(f);

    if (method == MeanMethod::partial_sum) {
        std::vector<cplx> running(cells, cplx{});  // S_n f
        for (index_t n = 1; n <= n_max; ++n) {
            const cplx coeff = spec.coeffs[static_cast<std::size_t>(n - 1)];
            if (coeff != cplx{}) {
                GridFunction psi = character(f.basis(), n - 1);
                for (std::size_t t = 0; t < cells; ++t) running[t] += coeff * psi.value(t);
            }
            const double inv_phi = 1.0 / phi(n);
            for (std::size_t t = 0; t < cells; ++t) {
                double m = std::abs(running[t]) * inv_phi;
                if (m > env[t].real()) env[t] = m;
            }
        }
        return GridFunction(f.basis(), std::move(env));
    }

    for (index_t n = n_lo; n <= n_max; ++n) {
        Multiplier w = log_mean_multiplier(f.basis(), n);
        Spectrum s{f.basis(), spec.coeffs};
        for (index_t v = 0; v < f.size(); ++v)
            s.coeffs[static_cast<std::size_t>(v)] *= w.weights[static_cast<std::size_t>(v)];
        GridFunction ln = inverse(s);
        const double inv_phi = 1.0 / phi(n);
        for (std::size_t t = 0; t < cells; ++t) {
            double m = std::abs(ln.value(static_cast<index_t>(t))) * inv_phi;
            if (m > env[t].real()) env[t] = m;
        }
    }
    return GridFunction(f.basis(), std::move(env));
}

}  // namespace vkl
