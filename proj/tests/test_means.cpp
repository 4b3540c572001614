#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vkl/kernels.hpp"
#include "vkl/means.hpp"

using namespace vkl;

namespace {

GridFunction random_function(const VilenkinBasis& basis, std::mt19937_64& rng) {
    std::vector<cplx> v(static_cast<std::size_t>(basis.point_count()));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (cplx& x : v) x = {u(rng), u(rng)};
    return inverse(Spectrum{basis, std::move(v)});
}

/// Direct-summation oracle: (1/norm) sum_{k=1}^{n-1} w_{n-k} S_k f.
GridFunction naive_weighted_mean(const GridFunction& f, index_t n,
                                 const std::vector<double>& w_rev, double norm) {
    GridFunction acc = GridFunction::zero(f.basis());
    for (index_t k = 1; k <= n - 1; ++k)
        acc = add(acc, scale(partial_sum(f, k), w_rev[static_cast<std::size_t>(n - k)] / norm));
    return acc;
}

}  // namespace

TEST_CASE("partial sums truncate the spectrum") {
    std::mt19937_64 rng(41);
    VilenkinBasis basis = build_basis({2, 3}, 4);
    GridFunction f = random_function(basis, rng);

    REQUIRE(max_abs_diff(partial_sum(f, basis.point_count()), f) < 1e-12 * norm_inf(f));
    REQUIRE(norm_inf(partial_sum(f, 0)) < 1e-13);
    REQUIRE(norm_inf(partial_sum(character(basis, 5), 5)) < 1e-12);

    REQUIRE_THROWS_AS(partial_sum(f, basis.point_count() + 1), error);
}

TEST_CASE("partial sum at the powers equals the cylinder average") {
    std::mt19937_64 rng(43);
    for (const VilenkinBasis& basis : {build_basis({2}, 6), build_basis({3, 4}, 4)}) {
        GridFunction f = random_function(basis, rng);
        for (int k = 0; k <= basis.resolution(); ++k)
            REQUIRE(max_abs_diff(partial_sum(f, basis.power(k)), restrict_mean(f, k)) <=
                    1e-12 * std::max(1.0, norm_inf(f)));
    }
}

TEST_CASE("log mean against the direct weighted sum") {
    std::mt19937_64 rng(47);
    for (const VilenkinBasis& basis : {build_basis({2}, 6), build_basis({2, 3}, 4)}) {
        GridFunction f = random_function(basis, rng);
        for (index_t n : {index_t{2}, index_t{5}, index_t{17}, index_t{33}}) {
            if (n > basis.point_count()) continue;
            std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
            for (index_t k = 1; k <= n; ++k) w[static_cast<std::size_t>(k)] = 1.0 / static_cast<double>(k);
            GridFunction direct = naive_weighted_mean(f, n, w, harmonic(n));
            REQUIRE(max_abs_diff(log_mean(f, n), direct) <= 1e-10);
        }
    }
}

TEST_CASE("norlund mean specializations") {
    std::mt19937_64 rng(53);
    VilenkinBasis basis = build_basis({2}, 6);
    GridFunction f = random_function(basis, rng);

    // Reciprocal weights reproduce the logarithmic mean.
    for (index_t n : {index_t{2}, index_t{9}, index_t{30}})
        REQUIRE(max_abs_diff(norlund_mean(f, n, NorlundWeights::logarithmic()), log_mean(f, n)) <
                1e-12);

    // Constant weights give the plain average of S_1..S_{n-1}.
    index_t n = 8;
    std::vector<double> ones(static_cast<std::size_t>(n) + 1, 1.0);
    GridFunction direct = naive_weighted_mean(f, n, ones, static_cast<double>(n - 1));
    REQUIRE(max_abs_diff(norlund_mean(f, n, NorlundWeights::fejer()), direct) <= 1e-10);

    // Means reproduce constants.
    GridFunction c = GridFunction::constant(basis, cplx{2.0, -0.5});
    for (index_t m : {index_t{2}, index_t{7}, index_t{51}}) {
        REQUIRE(max_abs_diff(norlund_mean(c, m, NorlundWeights::fejer()), c) < 1e-12);
        REQUIRE(max_abs_diff(log_mean(c, m), c) < 1e-12);
    }

    // The harmonic normalizer and the weight-sum normalizer coincide for
    // reciprocal weights and differ otherwise.
    REQUIRE(max_abs_diff(
                norlund_mean(f, 9, NorlundWeights::logarithmic(), NorlundNormalizer::harmonic),
                norlund_mean(f, 9, NorlundWeights::logarithmic())) < 1e-13);

    REQUIRE_THROWS_MATCHES(norlund_mean(f, 4, NorlundWeights::from({0.0, 0.0, 0.0})), error,
                           Catch::Matchers::Predicate<error>([](const error& e) {
                               return e.code() == errc::undefined_mean;
                           }));
    REQUIRE_THROWS_AS(log_mean(f, 1), error);
}

TEST_CASE("log mean multiplier values") {
    VilenkinBasis basis = build_basis({2}, 4);
    Multiplier w = log_mean_multiplier(basis, 3);
    REQUIRE(std::abs(w.weights[0] - cplx{1.0, 0.0}) < 1e-15);
    REQUIRE(std::abs(w.weights[1] - cplx{2.0 / 3.0, 0.0}) < 1e-15);
    REQUIRE(std::abs(w.weights[2]) == 0.0);

    // L_n of a delta spectrum at v = n-1 vanishes.
    std::vector<cplx> c(static_cast<std::size_t>(basis.point_count()), cplx{});
    c[4] = 1.0;
    REQUIRE(norm_inf(log_mean(inverse(Spectrum{basis, c}), 5)) < 1e-13);

    // L_3 D_4 = F_3: the coefficients below the range are all one.
    REQUIRE(max_abs_diff(log_mean(dirichlet_kernel(basis, 4), 3), log_kernel(basis, 3)) < 1e-12);
}

TEST_CASE("weight function presets") {
    WeightFunction log1p = WeightFunction::parse("log1p");
    REQUIRE_THAT(log1p(1), Catch::Matchers::WithinRel(std::log(2.0), 1e-15));
    REQUIRE(!log1p.strictly_sublogarithmic());

    WeightFunction sqrt_log = WeightFunction::parse("sqrt-log");
    REQUIRE(sqrt_log.strictly_sublogarithmic());
    REQUIRE_THAT(sqrt_log(7), Catch::Matchers::WithinRel(std::sqrt(std::log(8.0)), 1e-15));

    WeightFunction g = WeightFunction::parse("pow-log:0.25");
    REQUIRE(g.strictly_sublogarithmic());
    REQUIRE(!WeightFunction::parse("pow-log:1.5").strictly_sublogarithmic());
    REQUIRE(WeightFunction::parse("constant").strictly_sublogarithmic());

    REQUIRE_THROWS_AS(WeightFunction::parse("nope"), error);
    REQUIRE_THROWS_AS(WeightFunction::parse("pow-log:x"), error);

    // Presets are nondecreasing.
    for (const char* name : {"constant", "log1p", "sqrt-log", "pow-log:0.5"}) {
        WeightFunction phi = WeightFunction::parse(name);
        for (index_t n = 1; n < 200; ++n) REQUIRE(phi(n + 1) >= phi(n));
    }
}

TEST_CASE("maximal ratio basics") {
    VilenkinBasis basis = build_basis({2}, 5);
    WeightFunction one = WeightFunction::parse("constant");

    // All partial sums of psi_0 are psi_0 itself.
    GridFunction psi0 = character(basis, 0);
    GridFunction sup = maximal_ratio(psi0, 16, one, MeanMethod::partial_sum);
    REQUIRE(max_abs_diff(sup, GridFunction::constant(basis, 1.0)) < 1e-12);

    // Single-term sup.
    std::mt19937_64 rng(59);
    GridFunction f = random_function(basis, rng);
    WeightFunction log1p = WeightFunction::parse("log1p");
    GridFunction single = maximal_ratio(f, 1, log1p, MeanMethod::partial_sum);
    GridFunction expected = scale(modulus(partial_sum(f, 1)), 1.0 / log1p(1));
    REQUIRE(max_abs_diff(single, expected) < 1e-12);

    GridFunction single_log = maximal_ratio(f, 2, log1p, MeanMethod::log_mean);
    REQUIRE(max_abs_diff(single_log, scale(modulus(log_mean(f, 2)), 1.0 / log1p(2))) < 1e-12);

    // phi >= 1 shrinks the envelope relative to phi = 1.
    GridFunction weighted = maximal_ratio(f, 16, log1p, MeanMethod::partial_sum);
    GridFunction flat = maximal_ratio(f, 16, one, MeanMethod::partial_sum);
    REQUIRE(norm_1(weighted) <= norm_1(flat) / std::log(2.0) + 1e-12);

    REQUIRE_THROWS_AS(maximal_ratio(f, 64, one, MeanMethod::partial_sum), error);
    REQUIRE_THROWS_AS(maximal_ratio(f, 1, one, MeanMethod::log_mean), error);
}

TEST_CASE("maximal ratio agrees with the direct per-order sup") {
    std::mt19937_64 rng(61);
    VilenkinBasis basis = build_basis({2, 3}, 3);
    GridFunction f = random_function(basis, rng);
    WeightFunction phi = WeightFunction::parse("log1p");
    index_t n_max = 10;

    std::vector<GridFunction> terms;
    for (index_t n = 1; n <= n_max; ++n)
        terms.push_back(scale(partial_sum(f, n), 1.0 / phi(n)));
    REQUIRE(max_abs_diff(maximal_ratio(f, n_max, phi, MeanMethod::partial_sum),
                         sup_envelope(terms)) < 1e-11);

    terms.clear();
    for (index_t n = 2; n <= n_max; ++n)
        terms.push_back(scale(log_mean(f, n), 1.0 / phi(n)));
    REQUIRE(max_abs_diff(maximal_ratio(f, n_max, phi, MeanMethod::log_mean),
                         sup_envelope(terms)) < 1e-11);
}

TEST_CASE("log-mean maximal ratio is dominated by the partial-sum one") {
    std::mt19937_64 rng(67);
    WeightFunction log1p = WeightFunction::parse("log1p");
    for (const VilenkinBasis& basis : {build_basis({2}, 6), build_basis({2, 3}, 4)}) {
        for (int i = 0; i < 10; ++i) {
            GridFunction f = random_function(basis, rng);
            GridFunction l = maximal_ratio(f, basis.point_count(), log1p, MeanMethod::log_mean);
            GridFunction s = maximal_ratio(f, basis.point_count(), log1p, MeanMethod::partial_sum);
            for (index_t t = 0; t < f.size(); ++t)
                REQUIRE(l.value(t).real() <= s.value(t).real() + 1e-12 * norm_inf(s));
        }
    }
}
