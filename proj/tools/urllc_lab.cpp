// urllc_lab: batch driver for the latency/reliability experiments.
//
//   urllc_lab <experiment> --config <path> [--seed N] [--out DIR]
//   urllc_lab presets
//
// Seed precedence: --seed flag, then the URLLC_LAB_SEED environment
// variable, then the config file, then the schema default.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "urllc/config.hpp"
#include "urllc/experiments.hpp"
#include "urllc/presets.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_one(const std::string& experiment, const std::string& config_path, long long seed_flag,
            bool seed_set, const std::string& out_dir) {
    auto cfg = urllc::parse_config(read_file(config_path), experiment);
    if (const char* env = std::getenv("URLLC_LAB_SEED"); env != nullptr && !seed_set) {
        urllc::ParamValue v;
        v.type = urllc::ParamType::Int;
        v.int_v = std::strtoll(env, nullptr, 10);
        cfg.params["seed"] = v;
    }
    if (seed_set) {
        urllc::ParamValue v;
        v.type = urllc::ParamType::Int;
        v.int_v = seed_flag;
        cfg.params["seed"] = v;
    }
    const auto files = urllc::run_experiment(cfg, out_dir);
    for (const auto& f : files) {
        std::cout << f << "\n";
    }
    return 0;
}

void print_presets() {
    std::printf("%-36s %-8s %-10s %-14s %-11s %-14s %s\n", "name", "pattern", "latency",
                "latency_bound", "reliability", "rel_bound", "data_rate");
    for (const auto& p : urllc::list_presets()) {
        std::printf("%-36s %-8s %-10s %-14g %-11s %-14g %s\n", p.name.c_str(), p.pattern.c_str(),
                    p.latency_class.c_str(), p.latency_bound_s, p.reliability_class.c_str(),
                    p.reliability_bound, p.data_rate_class.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latency/reliability modeling toolkit for vehicular networks"};
    app.require_subcommand(1);

    struct SubArgs {
        std::string config;
        long long seed = 0;
        bool seed_set = false;
        std::string out = ".";
    };
    std::vector<std::pair<std::string, SubArgs>> runs;
    runs.reserve(urllc::experiment_names().size());
    for (const auto& name : urllc::experiment_names()) {
        runs.emplace_back(name, SubArgs{});
    }
    for (auto& [name, args] : runs) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", args.config, "experiment config file")->required();
        auto* seed_opt = sub->add_option("--seed", args.seed, "override the config seed");
        sub->add_option("--out", args.out, "output directory (default: current)");
        sub->final_callback([&args, seed_opt]() { args.seed_set = seed_opt->count() > 0; });
    }
    app.add_subcommand("presets", "list the named requirement presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("presets")) {
            print_presets();
            return 0;
        }
        for (auto& [name, args] : runs) {
            if (app.got_subcommand(name)) {
                return run_one(name, args.config, args.seed, args.seed_set, args.out);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
