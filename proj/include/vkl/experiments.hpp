#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vkl/basis.hpp"
#include "vkl/grid.hpp"
#include "vkl/hardy.hpp"
#include "vkl/kernels.hpp"
#include "vkl/means.hpp"
#include "vkl/table.hpp"
#include "vkl/transform.hpp"

namespace vkl {

struct ExperimentConfig {
    std::vector<index_t> base;
    int resolution = 0;
    std::string experiment;

    int a_max = 0;           // kernel-growth: largest level; divergence: largest alpha index K
    index_t nk_lo = 2;       // sharpness
    index_t nk_hi = 8;
    std::string phi = "log1p";
    index_t n_max = 0;       // fejer-bound / maximal-ratio
    std::string mode = "strict";
    int samples = 0;         // maximal-ratio
    std::uint64_t seed = 0;
    bool seed_set = false;

    std::string format = "csv";
};

namespace detail {

inline VilenkinBasis config_basis(const ExperimentConfig& cfg) {
    try {
        return build_basis(std::span<const index_t>(cfg.base.data(), cfg.base.size()),
                           cfg.resolution);
    } catch (const error& e) {
        fail(errc::invalid_config, e.what());
    }
}

inline nlohmann::json base_meta(const ExperimentConfig& cfg) {
    nlohmann::json meta;
    meta["command"] = cfg.experiment;
    meta["base"] = cfg.base;
    meta["resolution"] = cfg.resolution;
    meta["conventions"] = {
        {"harmonic-sum", "l_n = sum_{k=1}^{n-1} 1/k"},
        {"norlund-normalizer", "weight-sum"},
        {"atom-sup-bound", "sup <= 1/mu(I)"},
    };
    return meta;
}

/// Deterministic standard normal pairs from the seeded engine; the
/// distribution code is hand-rolled so identical seeds give identical
/// streams everywhere.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : eng_(seed) {}

    cplx next_complex() {
        double u1 = 1.0 - std::ldexp(static_cast<double>(eng_() >> 11), -53);  // (0, 1]
        double u2 = std::ldexp(static_cast<double>(eng_() >> 11), -53);        // [0, 1)
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace detail

/// L1 growth of the logarithmic-mean kernel along the sparse indices q_A,
/// with the iterated head/tail lower bound reported for comparison.
inline Table cmd_kernel_growth(const ExperimentConfig& cfg) {
    VilenkinBasis basis = detail::config_basis(cfg);
    require(cfg.a_max >= 1, errc::invalid_config, "kernel-growth needs --a-max >= 1");
    require(2 * cfg.a_max + 1 <= basis.resolution(), errc::invalid_config,
            "a-max " + std::to_string(cfg.a_max) + " needs resolution >= " +
                std::to_string(2 * cfg.a_max + 1));

    Table table;
    table.meta = detail::base_meta(cfg);
    table.meta["a-max"] = cfg.a_max;
    table.columns = {"A", "q_A", "l_qA", "F_norm1", "log_qA", "ratio", "iteration_lower_bound"};

    std::vector<double> l_at_q(static_cast<std::size_t>(cfg.a_max) + 1, 0.0);
    for (int a = 1; a <= cfg.a_max; ++a) l_at_q[static_cast<std::size_t>(a)] = harmonic(q_index(basis, a));

    for (int a = 1; a <= cfg.a_max; ++a) {
        index_t q = q_index(basis, a);
        double f_norm = norm_1(log_kernel(basis, q));
        double logq = std::log(static_cast<double>(q));
        kahan_sum iter;
        for (int k = 1; k <= a - 1; ++k)
            iter.add(l_at_q[static_cast<std::size_t>(k)] / l_at_q[static_cast<std::size_t>(a)]);
        table.add_row({static_cast<index_t>(a), q, l_at_q[static_cast<std::size_t>(a)], f_norm, logq,
                       f_norm / logq, 0.125 * iter.value()});
    }
    return table;
}

/// ||K_n||_1 for n = 1..n_max; the run fails if the classical bound of 2
/// is ever exceeded.
inline Table cmd_fejer_bound(const ExperimentConfig& cfg) {
    VilenkinBasis basis = detail::config_basis(cfg);
    require(cfg.n_max >= 1, errc::invalid_config, "fejer-bound needs --n-max >= 1");
    require(cfg.n_max <= basis.point_count(), errc::invalid_config, "n-max exceeds M_N");

    Table table;
    table.meta = detail::base_meta(cfg);
    table.meta["n-max"] = cfg.n_max;
    table.columns = {"n", "K_norm1"};

    double worst = 0.0;
    for (index_t n = 1; n <= cfg.n_max; ++n) {
        double v = norm_1(fejer_kernel(basis, n));
        worst = std::max(worst, v);
        table.add_row({n, v});
    }
    table.meta["max-K-norm1"] = worst;
    require(worst <= 2.0 + 1e-12, errc::identity_violation,
            "Fejer kernel L1 bound exceeded: " + format_double(worst));
    return table;
}

/// The divergent-martingale probe: builds the block function for the
/// alpha sequence and decomposes L_{q_{alpha_k}} f at every level.
inline Table cmd_divergence(const ExperimentConfig& cfg) {
    VilenkinBasis basis = detail::config_basis(cfg);
    require(cfg.mode == "strict" || cfg.mode == "relaxed", errc::invalid_config,
            "mode must be strict or relaxed");
    require(cfg.a_max >= 0, errc::invalid_config, "divergence needs --a-max >= 0");

    CounterexampleSpec spec;
    try {
        spec = build_alpha(basis, cfg.a_max,
                           cfg.mode == "strict" ? CounterexampleSpec::Mode::strict
                                                : CounterexampleSpec::Mode::relaxed);
    } catch (const error& e) {
        if (e.code() == errc::insufficient_resolution) fail(errc::invalid_config, e.what());
        throw;
    }

    Table table;
    table.meta = detail::base_meta(cfg);
    table.meta["counterexample"] = to_json(spec, basis);
    kahan_sum tail;
    for (index_t a : spec.alpha) tail.add(1.0 / std::sqrt(static_cast<double>(a)));
    table.meta["sum-alpha-inv-sqrt"] = tail.value();
    table.columns = {"k",        "alpha_k",   "q_alpha",  "L_norm1",
                     "I_norm1",  "II1_norm1", "II2_norm1", "II2_norm1_closed",
                     "recombination_error", "relaxed"};

    for (std::size_t k = 0; k < spec.alpha.size(); ++k) {
        LogMeanSplit split = counterexample_log_mean_split(basis, spec, k);
        double closed = 0.0;
        if (split.q_prev >= 2)
            closed = harmonic(split.q_prev) / harmonic(split.q) /
                     std::sqrt(static_cast<double>(spec.alpha[k])) *
                     norm_1(log_kernel(basis, split.q_prev));
        table.add_row({static_cast<index_t>(k), spec.alpha[k], split.q, norm_1(split.total),
                       norm_1(split.head), norm_1(split.lower_blocks), norm_1(split.top_block),
                       closed, split.recombination_error,
                       static_cast<index_t>(spec.mode == CounterexampleSpec::Mode::relaxed ? 1 : 0)});
    }
    return table;
}

/// Sharpness probe: the exact collapse of L_{q_{n_k}} f_{n_k} and the
/// weighted ratio under a strictly sublogarithmic phi.
inline Table cmd_sharpness(const ExperimentConfig& cfg) {
    VilenkinBasis basis = detail::config_basis(cfg);
    WeightFunction phi = WeightFunction::parse(cfg.phi);
    require(phi.strictly_sublogarithmic(), errc::invalid_config,
            "phi preset '" + phi.name() +
                "' does not grow strictly slower than log(n+1); the weighted operator stays "
                "bounded there and the sharpness probe is vacuous");
    require(cfg.nk_lo >= 1 && cfg.nk_lo <= cfg.nk_hi, errc::invalid_config, "bad n_k range");
    require(2 * cfg.nk_hi + 1 <= basis.resolution(), errc::invalid_config,
            "n_k = " + std::to_string(cfg.nk_hi) + " needs resolution >= " +
                std::to_string(2 * cfg.nk_hi + 1));

    Table table;
    table.meta = detail::base_meta(cfg);
    table.meta["phi"] = phi.name();
    table.meta["nk-range"] = {cfg.nk_lo, cfg.nk_hi};
    table.columns = {"n_k", "q_nk", "h1_norm", "weighted_ratio", "identity_residual"};

    for (index_t nk = cfg.nk_lo; nk <= cfg.nk_hi; ++nk) {
        SharpnessIdentity id = sharpness_identity(basis, static_cast<int>(nk));
        table.add_row({nk, id.q, id.h1, id.log_mean_norm1 / phi(id.q), id.max_residual});
    }
    return table;
}

/// Maximal-operator probe on seeded random spectra: the log-weighted
/// partial-sum and log-mean maximal functions, normalized by the H_1 norm,
/// with the cellwise domination of the latter by the former checked on
/// every sample.
inline Table cmd_maximal_ratio(const ExperimentConfig& cfg) {
    VilenkinBasis basis = detail::config_basis(cfg);
    require(cfg.seed_set, errc::invalid_config, "maximal-ratio needs an explicit --seed");
    require(cfg.samples >= 1, errc::invalid_config, "maximal-ratio needs --samples >= 1");
    require(cfg.n_max >= 2 && cfg.n_max <= basis.point_count(), errc::invalid_config,
            "need 2 <= n-max <= M_N");
    WeightFunction phi = WeightFunction::parse(cfg.phi);

    Table table;
    table.meta = detail::base_meta(cfg);
    table.meta["phi"] = phi.name();
    table.meta["n-max"] = cfg.n_max;
    table.meta["samples"] = cfg.samples;
    table.meta["seed"] = cfg.seed;
    table.columns = {"sample", "L_ratio", "S_ratio", "dominated"};

    detail::GaussianSource rng(cfg.seed);
    double max_l = 0.0, max_s = 0.0;
    index_t resamples = 0;
    for (int s = 0; s < cfg.samples; ++s) {
        GridFunction f = GridFunction::zero(basis);
        double h1 = 0.0;
        for (;;) {
            std::vector<cplx> coeffs(static_cast<std::size_t>(basis.point_count()));
            for (cplx& c : coeffs) c = rng.next_complex();
            f = inverse(Spectrum{basis, std::move(coeffs)});
            h1 = h1_norm(f);
            if (h1 > 0.0) break;
            ++resamples;
        }
        GridFunction s_sup = maximal_ratio(f, cfg.n_max, phi, MeanMethod::partial_sum);
        GridFunction l_sup = maximal_ratio(f, cfg.n_max, phi, MeanMethod::log_mean);

        double slack = 1e-12 * norm_inf(s_sup);
        bool dominated = true;
        for (index_t t = 0; t < f.size(); ++t)
            if (l_sup.value(t).real() > s_sup.value(t).real() + slack) {
                dominated = false;
                break;
            }

        double l_ratio = norm_1(l_sup) / h1;
        double s_ratio = norm_1(s_sup) / h1;
        max_l = std::max(max_l, l_ratio);
        max_s = std::max(max_s, s_ratio);
        table.add_row({static_cast<index_t>(s), l_ratio, s_ratio,
                       static_cast<index_t>(dominated ? 1 : 0)});
        require(dominated, errc::identity_violation,
                "log-mean maximal ratio exceeded the partial-sum one on sample " +
                    std::to_string(s));
    }
    table.meta["max-L-ratio"] = max_l;
    table.meta["max-S-ratio"] = max_s;
    table.meta["resamples"] = resamples;
    return table;
}

inline Table run_command(const ExperimentConfig& cfg) {
    if (cfg.experiment == "kernel-growth") return cmd_kernel_growth(cfg);
    if (cfg.experiment == "fejer-bound") return cmd_fejer_bound(cfg);
    if (cfg.experiment == "divergence") return cmd_divergence(cfg);
    if (cfg.experiment == "sharpness") return cmd_sharpness(cfg);
    if (cfg.experiment == "maximal-ratio") return cmd_maximal_ratio(cfg);
    fail(errc::invalid_config, "unknown experiment '" + cfg.experiment + "'");
}

inline std::string render(const Table& table, const std::string& format) {
    if (format == "csv") return to_csv(table);
    if (format == "json") return to_json_text(table);
    fail(errc::invalid_config, "unknown format '" + format + "'");
}

}  // namespace vkl
