// vkl - numerical experiments on Vilenkin-group summability kernels.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vkl/vkl.hpp"

namespace {

std::vector<vkl::index_t> parse_base(const std::string& text) {
    std::vector<vkl::index_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    if (out.empty()) vkl::fail(vkl::errc::invalid_config, "empty --base list");
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) vkl::fail(vkl::errc::invalid_config, "cannot open output file " + path);
    os << text;
}

struct CliOptions {
    std::string base = "2";
    std::string out = "-";
    std::string nk_range;
    vkl::ExperimentConfig cfg;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--base", opt.base, "comma-separated generating pattern, e.g. 2 or 2,3")
        ->required();
    cmd->add_option("--resolution", opt.cfg.resolution, "number of digit coordinates N")
        ->required();
    cmd->add_option("--format", opt.cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", opt.out, "output path, or - for stdout");
}

int run(const CliOptions& opt) {
    vkl::ExperimentConfig cfg = opt.cfg;
    cfg.base = parse_base(opt.base);
    if (!opt.nk_range.empty()) {
        auto dots = opt.nk_range.find("..");
        if (dots == std::string::npos)
            vkl::fail(vkl::errc::invalid_config, "--nk-range must look like lo..hi");
        cfg.nk_lo = std::stoll(opt.nk_range.substr(0, dots));
        cfg.nk_hi = std::stoll(opt.nk_range.substr(dots + 2));
    }
    vkl::Table table = vkl::run_command(cfg);
    write_output(opt.out, vkl::render(table, cfg.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic analysis on bounded Vilenkin groups: kernels, means, counterexample probes"};
    app.require_subcommand(1);

    CliOptions opt;

    CLI::App* growth = app.add_subcommand("kernel-growth",
                                          "L1 growth of the log-mean kernel at the sparse indices");
    add_common(growth, opt);
    growth->add_option("--a-max", opt.cfg.a_max, "largest level A")->required();

    CLI::App* fejer = app.add_subcommand("fejer-bound", "L1 norms of the Fejer kernels");
    add_common(fejer, opt);
    fejer->add_option("--n-max", opt.cfg.n_max, "largest kernel order")->required();

    CLI::App* divergence = app.add_subcommand(
        "divergence", "decompose the log means of the divergent-martingale candidate");
    add_common(divergence, opt);
    divergence->add_option("--a-max", opt.cfg.a_max, "largest alpha index K")->required();
    divergence->add_option("--mode", opt.cfg.mode, "strict or relaxed")
        ->check(CLI::IsMember({"strict", "relaxed"}));

    CLI::App* sharpness =
        app.add_subcommand("sharpness", "weighted ratios of the sharpness test functions");
    add_common(sharpness, opt);
    sharpness->add_option("--nk-range", opt.nk_range, "levels lo..hi")->required();
    sharpness->add_option("--phi", opt.cfg.phi, "weight preset: constant|sqrt-log|pow-log[:g]");

    CLI::App* maximal = app.add_subcommand(
        "maximal-ratio", "weighted maximal operators on seeded random functions");
    add_common(maximal, opt);
    maximal->add_option("--n-max", opt.cfg.n_max, "sup range cap")->required();
    maximal->add_option("--samples", opt.cfg.samples, "number of random functions")->required();
    maximal
        ->add_option("--seed", opt.cfg.seed, "RNG seed (recorded in the output)")
        ->required();
    maximal->add_option("--phi", opt.cfg.phi, "weight preset (default log1p)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    opt.cfg.seed_set = maximal->parsed();
    if (growth->parsed()) opt.cfg.experiment = "kernel-growth";
    if (fejer->parsed()) opt.cfg.experiment = "fejer-bound";
    if (divergence->parsed()) opt.cfg.experiment = "divergence";
    if (sharpness->parsed()) opt.cfg.experiment = "sharpness";
    if (maximal->parsed()) opt.cfg.experiment = "maximal-ratio";

    try {
        return run(opt);
    } catch (const vkl::error& e) {
        std::cerr << "vkl: " << e.what() << '\n';
        return e.code() == vkl::errc::identity_violation ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "vkl: " << e.what() << '\n';
        return 1;
    }
}
