#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vkl/experiments.hpp"

using namespace vkl;

namespace {

ExperimentConfig walsh_config(const std::string& experiment, int resolution) {
    ExperimentConfig cfg;
    cfg.base = {2};
    cfg.resolution = resolution;
    cfg.experiment = experiment;
    return cfg;
}

double cell_double(const Table& t, std::size_t row, const std::string& column) {
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        if (t.columns[c] == column) {
            const Table::Cell& cell = t.rows.at(row).at(c);
            if (std::holds_alternative<index_t>(cell))
                return static_cast<double>(std::get<index_t>(cell));
            return std::get<double>(cell);
        }
    FAIL("no column " + column);
    return 0.0;
}

}  // namespace

TEST_CASE("kernel growth table") {
    ExperimentConfig cfg = walsh_config("kernel-growth", 11);
    cfg.a_max = 5;
    Table t = run_command(cfg);
    REQUIRE(t.rows.size() == 5);
    double prev = 0.0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        double norm = cell_double(t, r, "F_norm1");
        REQUIRE(norm > prev);
        prev = norm;
        REQUIRE(cell_double(t, r, "ratio") > 0.0);
    }
    // The A = 1 kernel norm against the naive oracle.
    VilenkinBasis small = build_basis({2}, 11);
    REQUIRE_THAT(cell_double(t, 0, "F_norm1"),
                 Catch::Matchers::WithinAbs(norm_1(naive_log_kernel(small, 5)), 1e-10));

    cfg.a_max = 6;
    REQUIRE_THROWS_MATCHES(run_command(cfg), error, Catch::Matchers::Predicate<error>([](const error& e) {
                               return e.code() == errc::invalid_config;
                           }));
}

TEST_CASE("fejer bound table") {
    ExperimentConfig cfg = walsh_config("fejer-bound", 8);
    cfg.n_max = 128;
    Table t = run_command(cfg);
    REQUIRE(t.rows.size() == 128);
    REQUIRE_THAT(cell_double(t, 0, "K_norm1"), Catch::Matchers::WithinAbs(1.0, 1e-13));
    REQUIRE(t.meta.at("max-K-norm1").get<double>() <= 2.0 + 1e-12);
}

TEST_CASE("divergence table, strict and relaxed") {
    ExperimentConfig cfg = walsh_config("divergence", 12);
    cfg.a_max = 1;
    cfg.mode = "strict";
    Table t = run_command(cfg);
    REQUIRE(t.rows.size() == 2);
    REQUIRE(cell_double(t, 1, "recombination_error") <= 1e-10);
    REQUIRE_THAT(cell_double(t, 1, "II2_norm1"),
                 Catch::Matchers::WithinAbs(cell_double(t, 1, "II2_norm1_closed"), 1e-10));
    REQUIRE(t.meta.at("counterexample").at("alpha") == std::vector<index_t>{1, 5});

    cfg.resolution = 14;
    cfg.a_max = 5;
    cfg.mode = "relaxed";
    Table rel = run_command(cfg);
    REQUIRE(rel.rows.size() == 6);
    double prev = -1.0;
    for (std::size_t r = 0; r < rel.rows.size(); ++r) {
        double norm = cell_double(rel, r, "L_norm1");
        REQUIRE(norm > prev);
        prev = norm;
        REQUIRE(cell_double(rel, r, "relaxed") == 1.0);
    }

    cfg.mode = "strict";
    cfg.a_max = 2;
    REQUIRE_THROWS_MATCHES(run_command(cfg), error, Catch::Matchers::Predicate<error>([](const error& e) {
                               return e.code() == errc::invalid_config;
                           }));
}

TEST_CASE("sharpness table rejects weights that are not sublogarithmic") {
    ExperimentConfig cfg = walsh_config("sharpness", 13);
    cfg.nk_lo = 2;
    cfg.nk_hi = 6;
    cfg.phi = "log1p";
    REQUIRE_THROWS_MATCHES(run_command(cfg), error, Catch::Matchers::Predicate<error>([](const error& e) {
                               return e.code() == errc::invalid_config;
                           }));

    cfg.phi = "sqrt-log";
    Table t = run_command(cfg);
    REQUIRE(t.rows.size() == 5);
    double prev = 0.0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        REQUIRE(cell_double(t, r, "identity_residual") <= 1e-10);
        double ratio = cell_double(t, r, "weighted_ratio");
        REQUIRE(ratio > prev);
        prev = ratio;
    }
}

TEST_CASE("maximal ratio table checks domination and needs a seed") {
    ExperimentConfig cfg = walsh_config("maximal-ratio", 6);
    cfg.n_max = 64;
    cfg.samples = 5;
    cfg.seed = 1234;
    REQUIRE_THROWS_AS(run_command(cfg), error);  // seed not marked explicit

    cfg.seed_set = true;
    Table t = run_command(cfg);
    REQUIRE(t.rows.size() == 5);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        REQUIRE(cell_double(t, r, "dominated") == 1.0);
        REQUIRE(cell_double(t, r, "L_ratio") <= cell_double(t, r, "S_ratio") + 1e-12);
    }
}

TEST_CASE("the constant character gives the closed-form ratios") {
    // f = psi_0: every partial sum from n = 1 on is f, every log mean from
    // n = 2 on is f, so the sups are 1/log 2 and 1/log 3 and h1 = 1.
    VilenkinBasis basis = build_basis({2}, 5);
    GridFunction psi0 = character(basis, 0);
    WeightFunction log1p = WeightFunction::parse("log1p");
    GridFunction s = maximal_ratio(psi0, basis.point_count(), log1p, MeanMethod::partial_sum);
    GridFunction l = maximal_ratio(psi0, basis.point_count(), log1p, MeanMethod::log_mean);
    REQUIRE_THAT(norm_1(s) / h1_norm(psi0),
                 Catch::Matchers::WithinRel(1.0 / std::log(2.0), 1e-12));
    REQUIRE_THAT(norm_1(l) / h1_norm(psi0),
                 Catch::Matchers::WithinRel(1.0 / std::log(3.0), 1e-12));
}

TEST_CASE("tables round-trip and commands are reproducible") {
    ExperimentConfig cfg = walsh_config("kernel-growth", 9);
    cfg.a_max = 4;
    Table t = run_command(cfg);
    std::string csv = to_csv(t);
    Table back = table_from_csv(csv);
    REQUIRE(to_csv(back) == csv);
    REQUIRE(back.meta == t.meta);
    REQUIRE(back.columns == t.columns);

    // Byte-identical re-runs, including the seeded command.
    ExperimentConfig mr = walsh_config("maximal-ratio", 6);
    mr.n_max = 32;
    mr.samples = 3;
    mr.seed = 99;
    mr.seed_set = true;
    REQUIRE(to_csv(run_command(mr)) == to_csv(run_command(mr)));
    REQUIRE(to_json_text(run_command(mr)) == to_json_text(run_command(mr)));

    std::string bytes_99 = to_csv(run_command(mr));
    mr.seed = 100;
    REQUIRE(to_csv(run_command(mr)) != bytes_99);
}

TEST_CASE("csv cells keep their types") {
    Table t;
    t.meta = {{"command", "unit"}};
    t.columns = {"i", "x", "s"};
    t.add_row({index_t{-4}, 0.1, std::string("plain")});
    t.add_row({index_t{7}, 2.0, std::string("with,comma and \"quote\"")});
    std::string csv = to_csv(t);
    Table back = table_from_csv(csv);
    REQUIRE(std::get<index_t>(back.rows[0][0]) == -4);
    REQUIRE(std::get<double>(back.rows[0][1]) == 0.1);
    REQUIRE(std::get<std::string>(back.rows[1][2]) == "with,comma and \"quote\"");
    REQUIRE(to_csv(back) == csv);
}

TEST_CASE("unknown experiments and formats are config errors") {
    ExperimentConfig cfg = walsh_config("nope", 5);
    REQUIRE_THROWS_AS(run_command(cfg), error);
    Table t;
    REQUIRE_THROWS_AS(render(t, "yaml"), error);
}
