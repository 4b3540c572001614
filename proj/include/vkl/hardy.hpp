#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vkl/basis.hpp"
#include "vkl/grid.hpp"
#include "vkl/kernels.hpp"
#include "vkl/means.hpp"
#include "vkl/transform.hpp"

namespace vkl {

/// Martingale maximal function f*(x) = sup_n |average of f over the
/// rank-n cylinder at x|, n = 0..N.
inline GridFunction maximal_function(const GridFunction& f) {
    std::vector<cplx> env(static_cast<std::size_t>(f.size()), cplx{});
    for (int n = 0; n <= f.basis().resolution(); ++n) {
        GridFunction avg = restrict_mean(f, n);
        for (index_t t = 0; t < f.size(); ++t) {
            double m = std::abs(avg.value(t));
            if (m > env[static_cast<std::size_t>(t)].real()) env[static_cast<std::size_t>(t)] = m;
        }
    }
    return GridFunction(f.basis(), std::move(env));
}

inline double h1_norm(const GridFunction& f) { return norm_1(maximal_function(f)); }

// ---------------------------------------------------------------------------
// Atoms and atomic decompositions.
// ---------------------------------------------------------------------------

/// Rank-r cylinder through the point whose first r digits encode `base`
/// (base = sum_{k<r} x_k M_k < M_r); its cells are the residue class
/// base mod M_r.
struct Cylinder {
    int rank = 0;
    index_t base = 0;
};

struct Atom {
    GridFunction values;
    Cylinder support;
    bool is_unit = false;
};

struct AtomReport {
    bool valid = true;
    std::vector<std::string> violations;
};

/// A 1-atom is the constant 1, or a function supported on a cylinder I
/// with zero mean over I and sup norm at most 1/mu(I).
inline AtomReport validate_atom(const Atom& a) {
    AtomReport report;
    const GridFunction& f = a.values;
    if (a.is_unit) {
        for (index_t t = 0; t < f.size(); ++t)
            if (f.value(t) != cplx{1.0, 0.0}) {
                report.valid = false;
                report.violations.push_back("unit atom must be constant 1");
                break;
            }
        return report;
    }

    require(a.support.rank >= 0 && a.support.rank <= f.basis().resolution(), errc::invalid_atom,
            "support rank exceeds resolution");
    const index_t mr = f.basis().power(a.support.rank);
    require(a.support.base >= 0 && a.support.base < mr, errc::invalid_atom,
            "support base point outside [0, M_r)");

    bool support_ok = true;
    for (index_t t = 0; t < f.size(); ++t)
        if (t % mr != a.support.base && f.value(t) != cplx{}) {
            support_ok = false;
            break;
        }
    if (!support_ok) {
        report.valid = false;
        report.violations.push_back("support: nonzero value outside the cylinder");
    }

    kahan_sum re, im;
    for (index_t t = a.support.base; t < f.size(); t += mr) {
        re.add(f.value(t).real());
        im.add(f.value(t).imag());
    }
    double mean_mod = std::abs(cplx{re.value(), im.value()}) / static_cast<double>(f.size() / mr);
    if (mean_mod > 1e-14) {
        report.valid = false;
        report.violations.push_back("mean: cylinder average " + format_double(mean_mod) + " != 0");
    }

    // Sup bound ||a||_inf <= 1/mu(I) = M_r, with a relative slack of 1e-12
    // so boundary-normalized atoms assembled through transforms pass.
    double cap = static_cast<double>(mr) * (1.0 + 1e-12);
    double sup = norm_inf(f);
    if (sup > cap) {
        report.valid = false;
        report.violations.push_back("sup: " + format_double(sup) + " exceeds 1/mu(I) = " +
                                    format_double(static_cast<double>(mr)));
    }
    return report;
}

struct AtomicDecomposition {
    double coefficient_sum = 0.0;  // sum |mu_k|
    GridFunction reconstruction;
};

/// Assembles f = sum mu_k a_k and returns sum |mu_k|; every atom must
/// validate.
inline AtomicDecomposition decomposition_bound(const VilenkinBasis& basis,
                                               std::span<const std::pair<double, Atom>> terms) {
    GridFunction f = GridFunction::zero(basis);
    kahan_sum total;
    for (const auto& [mu, atom] : terms) {
        AtomReport r = validate_atom(atom);
        if (!r.valid) {
            std::string what = "atom rejected:";
            for (const std::string& v : r.violations) what += " " + v;
            fail(errc::invalid_atom, what);
        }
        f = add(f, scale(atom.values, mu));
        total.add(std::abs(mu));
    }
    return AtomicDecomposition{total.value(), std::move(f)};
}

// ---------------------------------------------------------------------------
// Counterexample constructions.
// ---------------------------------------------------------------------------

/// Spectrum-block index sequence alpha_0 < alpha_1 < ... used by the
/// divergent-martingale construction.  Strict mode enforces the two
/// lacunarity conditions
///   (growth)  sum_{eta<k} M_{2 alpha_eta}/sqrt(alpha_eta) < M_{2 alpha_k}/sqrt(alpha_k)
///   (spacing) M_{2 alpha_{k-1}}/sqrt(alpha_{k-1}) < alpha_k
/// for every k; relaxed mode only enforces monotonicity and reports
/// violations.
struct CounterexampleSpec {
    enum class Mode { strict, relaxed };

    std::vector<index_t> alpha;
    Mode mode = Mode::strict;
    std::vector<std::string> violations;  // relaxed-mode findings
};

namespace detail {

inline double block_weight(const VilenkinBasis& basis, index_t a) {
    return static_cast<double>(basis.power(static_cast<int>(2 * a))) /
           std::sqrt(static_cast<double>(a));
}

inline bool growth_condition(const VilenkinBasis& basis, const std::vector<index_t>& alpha,
                             std::size_t k) {
    kahan_sum lhs;
    for (std::size_t e = 0; e < k; ++e) lhs.add(block_weight(basis, alpha[e]));
    return lhs.value() < block_weight(basis, alpha[k]);
}

inline bool spacing_condition(const VilenkinBasis& basis, const std::vector<index_t>& alpha,
                              std::size_t k) {
    if (k == 0) return true;
    return block_weight(basis, alpha[k - 1]) < static_cast<double>(alpha[k]);
}

}  // namespace detail

inline CounterexampleSpec build_alpha(const VilenkinBasis& basis, int k_max,
                                      CounterexampleSpec::Mode mode) {
    require(k_max >= 0, errc::out_of_range, "need K >= 0");
    CounterexampleSpec spec;
    spec.mode = mode;

    if (mode == CounterexampleSpec::Mode::relaxed) {
        require(2 * (k_max + 1) + 1 <= basis.resolution(), errc::insufficient_resolution,
                "relaxed sequence alpha_K = " + std::to_string(k_max + 1) +
                    " needs resolution >= " + std::to_string(2 * (k_max + 1) + 1));
        for (int k = 0; k <= k_max; ++k) spec.alpha.push_back(k + 1);
        for (std::size_t k = 0; k < spec.alpha.size(); ++k) {
            if (!detail::growth_condition(basis, spec.alpha, k))
                spec.violations.push_back("growth condition fails at k = " + std::to_string(k));
            if (!detail::spacing_condition(basis, spec.alpha, k))
                spec.violations.push_back("spacing condition fails at k = " + std::to_string(k));
        }
        return spec;
    }

    // Strict: greedy-minimal.  The spacing condition pins a hard lower
    // bound on each alpha_k, so jump there first and report it honestly
    // when it already exceeds what the resolution can represent.
    const index_t max_level = (basis.resolution() - 1) / 2;
    for (int k = 0; k <= k_max; ++k) {
        index_t cand = 1;
        if (k > 0) {
            double spacing_min = std::floor(detail::block_weight(basis, spec.alpha.back())) + 1.0;
            if (spacing_min > static_cast<double>(max_level))
                fail(errc::insufficient_resolution,
                     "strict alpha_" + std::to_string(k) + " must be at least " +
                         format_double(spacing_min) +
                         " by the spacing condition, which needs resolution >= " +
                         format_double(2.0 * spacing_min + 1.0) + "; unreachable at resolution " +
                         std::to_string(basis.resolution()));
            cand = std::max(spec.alpha.back() + 1, static_cast<index_t>(spacing_min));
        }
        for (;; ++cand) {
            if (cand > max_level)
                fail(errc::insufficient_resolution,
                     "strict alpha_" + std::to_string(k) + " needs at least " +
                         std::to_string(cand) + ", i.e. resolution >= " +
                         std::to_string(2 * cand + 1));
            spec.alpha.push_back(cand);
            bool ok = detail::growth_condition(basis, spec.alpha, static_cast<std::size_t>(k)) &&
                      detail::spacing_condition(basis, spec.alpha, static_cast<std::size_t>(k));
            spec.alpha.pop_back();
            if (ok) break;
        }
        spec.alpha.push_back(cand);
    }
    return spec;
}

inline nlohmann::json to_json(const CounterexampleSpec& spec, const VilenkinBasis& basis) {
    nlohmann::json j;
    j["alpha"] = spec.alpha;
    j["mode"] = spec.mode == CounterexampleSpec::Mode::strict ? "strict" : "relaxed";
    j["base"] = basis.radices();
    j["resolution"] = basis.resolution();
    if (!spec.violations.empty()) j["violations"] = spec.violations;
    return j;
}

inline CounterexampleSpec counterexample_from_json(const nlohmann::json& j) {
    CounterexampleSpec spec;
    spec.alpha = j.at("alpha").get<std::vector<index_t>>();
    std::string mode = j.at("mode").get<std::string>();
    require(mode == "strict" || mode == "relaxed", errc::invalid_config, "bad mode " + mode);
    spec.mode = mode == "strict" ? CounterexampleSpec::Mode::strict
                                 : CounterexampleSpec::Mode::relaxed;
    if (j.contains("violations")) spec.violations = j.at("violations").get<std::vector<std::string>>();
    return spec;
}

/// Block spectrum of the divergent-martingale candidate: coefficient
/// 1/sqrt(alpha_k) on [M_{2 alpha_k}, M_{2 alpha_k + 1}), zero elsewhere.
inline Spectrum counterexample_spectrum(const VilenkinBasis& basis, const CounterexampleSpec& spec) {
    require(!spec.alpha.empty(), errc::invalid_config, "empty alpha sequence");
    for (std::size_t k = 0; k + 1 < spec.alpha.size(); ++k)
        require(spec.alpha[k] < spec.alpha[k + 1], errc::invalid_config,
                "alpha must be strictly increasing");
    index_t top = spec.alpha.back();
    require(2 * top + 1 <= basis.resolution(), errc::insufficient_resolution,
            "block at alpha = " + std::to_string(top) + " needs resolution >= " +
                std::to_string(2 * top + 1));
    std::vector<cplx> coeffs(static_cast<std::size_t>(basis.point_count()), cplx{});
    for (index_t a : spec.alpha) {
        double c = 1.0 / std::sqrt(static_cast<double>(a));
        for (index_t v = basis.power(static_cast<int>(2 * a)); v < basis.power(static_cast<int>(2 * a + 1)); ++v)
            coeffs[static_cast<std::size_t>(v)] = c;
    }
    return Spectrum{basis, std::move(coeffs)};
}

inline GridFunction counterexample_function(const VilenkinBasis& basis, const CounterexampleSpec& spec) {
    return inverse(counterexample_spectrum(basis, spec));
}

/// The sharpness test function f_n = D_{M_{2n+1}} - D_{M_{2n}}; its
/// coefficients are the indicator of [M_{2n}, M_{2n+1}).
inline GridFunction sharpness_function(const VilenkinBasis& basis, int n_k) {
    require(n_k >= 0, errc::out_of_range, "need n_k >= 0");
    require(2 * n_k + 1 <= basis.resolution(), errc::insufficient_resolution,
            "n_k = " + std::to_string(n_k) + " needs resolution >= " + std::to_string(2 * n_k + 1));
    return sub(dirichlet_kernel(basis, basis.power(2 * n_k + 1)),
               dirichlet_kernel(basis, basis.power(2 * n_k)));
}

// ---------------------------------------------------------------------------
// The decomposition of L_{q_{alpha_k}} f into head/tail pieces.
// ---------------------------------------------------------------------------

/// L_{q_A} f = I + II_1 + II_2 at block level A = alpha_k:
///   I    - partial sums below the k-th block,
///   II_1 - the frozen lower blocks,
///   II_2 - the k-th block collapsed through the Dirichlet shift identity
///          into psi_{M_{2A}} theta_{q_{A-1}} / (l_{q_A} sqrt(alpha_k)).
struct LogMeanSplit {
    index_t q = 0;       // q_{alpha_k}
    index_t q_prev = 0;  // q_{alpha_k - 1}
    GridFunction total;
    GridFunction head;         // I
    GridFunction lower_blocks; // II_1
    GridFunction top_block;    // II_2
    double recombination_error = 0.0;
};

inline LogMeanSplit counterexample_log_mean_split(const VilenkinBasis& basis,
                                           const CounterexampleSpec& spec, std::size_t k) {
    require(k < spec.alpha.size(), errc::out_of_range, "block index k exceeds the sequence");
    const index_t a = spec.alpha[k];
    const int level = static_cast<int>(a);
    const index_t q = q_index(basis, level);
    const index_t qp = q_index(basis, level - 1);
    const index_t m2a = basis.power(2 * level);
    const std::vector<double> h = harmonic_prefix(q + 1);
    const double l_q = h[static_cast<std::size_t>(q)];

    Spectrum fhat = counterexample_spectrum(basis, spec);

    // Total, through the standard log-mean multiplier.
    Multiplier lw = log_mean_multiplier(basis, q);
    Spectrum stot{basis, fhat.coeffs};
    for (index_t v = 0; v < basis.point_count(); ++v)
        stot.coeffs[static_cast<std::size_t>(v)] *= lw.weights[static_cast<std::size_t>(v)];
    GridFunction total = inverse(stot);

    // I: sum_{j < M_{2A}} S_j f / (q - j), whose multiplier on v < M_{2A}-1
    // is (l_{q-v} - l_{q_prev + 1}) / l_q.
    Spectrum shead{basis, std::vector<cplx>(static_cast<std::size_t>(basis.point_count()), cplx{})};
    for (index_t v = 0; v + 2 <= m2a; ++v)
        shead.coeffs[static_cast<std::size_t>(v)] =
            fhat.coeffs[static_cast<std::size_t>(v)] *
            ((h[static_cast<std::size_t>(q - v)] - h[static_cast<std::size_t>(qp + 1)]) / l_q);
    GridFunction head = inverse(shead);

    // II_1: the blocks below k, frozen across the tail range.
    Spectrum slow{basis, std::vector<cplx>(static_cast<std::size_t>(basis.point_count()), cplx{})};
    for (index_t v = 0; v < m2a; ++v) slow.coeffs[static_cast<std::size_t>(v)] = fhat.coeffs[static_cast<std::size_t>(v)];
    GridFunction lower = scale(inverse(slow), h[static_cast<std::size_t>(qp + 1)] / l_q);

    // II_2: psi_{M_{2A}} theta_{q_prev} / (l_q sqrt(alpha_k)); theta_1 is
    // the empty sum, so the piece vanishes at level 1.
    GridFunction top = GridFunction::zero(basis);
    if (qp >= 2)
        top = scale(multiply(character(basis, m2a), theta_kernel(basis, qp)),
                    1.0 / (l_q * std::sqrt(static_cast<double>(a))));

    double err = max_abs_diff(total, add(add(head, lower), top));
    return LogMeanSplit{q, qp, std::move(total), std::move(head), std::move(lower), std::move(top), err};
}

// ---------------------------------------------------------------------------
// The sharpness identity.
// ---------------------------------------------------------------------------

/// For f_n = D_{M_{2n+1}} - D_{M_{2n}} the logarithmic mean at the sparse
/// index collapses exactly:  |L_{q_n} f_n| = (l_{q_{n-1}}/l_{q_n}) |F_{q_{n-1}}|,
/// with q_{n-1} the previous sparse index (= q_n - M_{2n}).
struct SharpnessIdentity {
    int n_k = 0;
    index_t q = 0;       // q_{n_k}
    index_t q_prev = 0;  // q_{n_k - 1}
    double l_ratio = 0.0;
    double max_residual = 0.0;
    double h1 = 0.0;          // ||f_{n_k}||_{H_1}
    double log_mean_norm1 = 0.0;
    GridFunction log_mean_value;
};

inline SharpnessIdentity sharpness_identity(const VilenkinBasis& basis, int n_k) {
    require(n_k >= 1, errc::out_of_range, "need n_k >= 1");
    require(2 * n_k + 1 <= basis.resolution(), errc::insufficient_resolution,
            "n_k = " + std::to_string(n_k) + " needs resolution >= " + std::to_string(2 * n_k + 1));
    const index_t q = q_index(basis, n_k);
    const index_t qp = q_index(basis, n_k - 1);

    GridFunction f = sharpness_function(basis, n_k);
    GridFunction lf = log_mean(f, q);

    const double l_q = harmonic(q);
    double ratio = 0.0;
    GridFunction rhs = GridFunction::zero(basis);
    if (qp >= 2) {
        ratio = harmonic(qp) / l_q;
        rhs = scale(modulus(log_kernel(basis, qp)), ratio);
    }
    // n_k = 1: q_prev = 1, theta_1 = 0, so L_{q_1} f_1 = 0 and both sides vanish.

    double resid = max_abs_diff(modulus(lf), rhs);
    double lf_norm = norm_1(lf);
    return SharpnessIdentity{n_k, q, qp, ratio, resid, h1_norm(f), lf_norm, std::move(lf)};
}

}  // namespace vkl
