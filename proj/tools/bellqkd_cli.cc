// Copyright 2026 The bellqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Distance scans and Monte Carlo sessions from the command line.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bellqkd/monte_carlo.h"
#include "bellqkd/scan.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAllInfeasible = 3;

bellqkd::Config load_config(const std::string &path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw bellqkd::ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return bellqkd::parse_config(buf.str());
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw std::runtime_error("write to standard output failed");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Key-rate scans and parameter estimation for Bell-inequality MDI-QKD"};
    app.set_version_flag("--version", "bellqkd 1.0.0");

    std::string config_path, mode = "two-decoy-asymptotic", estimator = "analytic", protocols = "p1,p2,mdi";
    std::string distances = "0:250:10", format = "csv", output;
    double pulses = 0;
    uint64_t seed = 1;
    bool lp_full_grid = false, no_pair_fluctuation = false, synthetic = false;
    int lp_cutoff = 12, threads = 1;
    uint64_t synthetic_pulses = 1000000;

    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--mode", mode, "asymptotic-ideal | two-decoy-asymptotic | two-decoy-finite")->capture_default_str();
    app.add_option("--estimator", estimator, "analytic | lp")->capture_default_str();
    app.add_option("--protocols", protocols, "comma-separated subset of p1,p2,mdi")->capture_default_str();
    app.add_option("--distances", distances, "START:STOP:STEP in km, or a comma-separated list")->capture_default_str();
    app.add_option("--pulses", pulses, "pulse pairs per channel for finite-data mode (overrides the config)");
    app.add_option("--seed", seed, "seed for Monte Carlo observations")->capture_default_str();
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--output", output, "output file (default standard output)");
    app.add_flag("--lp-full-grid", lp_full_grid, "LP uses all 9 intensity pairs");
    app.add_option("--lp-cutoff", lp_cutoff, "LP photon-number cutoff per party")->capture_default_str();
    app.add_flag("--no-pair-fluctuation", no_pair_fluctuation, "finite-data mode leaves Bell-channel gains unfluctuated");
    app.add_flag("--synthetic", synthetic, "estimate from Monte Carlo frequencies instead of closed forms");
    app.add_option("--synthetic-pulses", synthetic_pulses, "pulses per channel for --synthetic")->capture_default_str();
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    auto *sim = app.add_subcommand("simulate", "run a Monte Carlo session and print its counts as JSON");
    double sim_distance = 100;
    uint64_t sim_pulses = 1000000;
    std::string source = "coherent", channels = "full";
    sim->add_option("--distance", sim_distance, "total distance in km")->capture_default_str();
    sim->add_option("--pulses", sim_pulses, "pulses per channel")->capture_default_str();
    sim->add_option("--source", source, "coherent | single-photon")
        ->check(CLI::IsMember({"coherent", "single-photon"}))
        ->capture_default_str();
    sim->add_option("--channels", channels, "full | key | bell")
        ->check(CLI::IsMember({"full", "key", "bell"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        bellqkd::Config config = load_config(config_path);

        if (*sim) {
            config.system.distance_km = sim_distance;
            bellqkd::validate(config);
            bellqkd::SessionConfig session;
            session.pulses = sim_pulses;
            session.seed = seed;
            session.threads = threads;
            session.source =
                source == "coherent" ? bellqkd::SourceMode::coherent : bellqkd::SourceMode::single_photon;
            for (const auto &ch : bellqkd::full_channel_set()) {
                bool is_key = ch.kind == bellqkd::McChannel::Kind::key;
                if (channels == "full" || (channels == "key") == is_key) session.channels.push_back(ch);
            }
            auto counts = bellqkd::simulate_session(session, config.system, config.intensities);
            write_output(output, bellqkd::session_to_json(counts));
            return 0;
        }

        bellqkd::ScanSpec spec;
        spec.mode = bellqkd::parse_scan_mode(mode);
        spec.estimator = bellqkd::parse_method(estimator);
        spec.protocols = bellqkd::parse_protocols(protocols);
        spec.distances = bellqkd::parse_distances(distances);
        spec.lp.full_grid = lp_full_grid;
        spec.lp.cutoff = lp_cutoff;
        spec.fluctuation.fluctuate_pair_gains = !no_pair_fluctuation;
        spec.threads = threads;
        if (synthetic) spec.synthetic = bellqkd::SyntheticSource{synthetic_pulses, seed};
        if (pulses > 0) {
            bellqkd::FiniteDataParams finite = config.finite.value_or(bellqkd::FiniteDataParams{});
            finite.pulses_per_channel = pulses;
            config.finite = finite;
        } else if (app.get_option("--pulses")->count()) {
            throw bellqkd::ConfigError("--pulses must be > 0");
        }
        if (spec.mode == bellqkd::ScanMode::two_decoy_finite && !config.finite) config.finite = bellqkd::FiniteDataParams{};
        if (spec.lp.cutoff < 2) throw bellqkd::ConfigError("--lp-cutoff must be >= 2");

        auto rows = bellqkd::run_scan(spec, config);
        std::string text = format == "json" ? bellqkd::emit_json(rows, spec.protocols)
                                            : bellqkd::emit_csv(rows, spec.protocols);
        write_output(output, text);
        bool all_infeasible = !rows.empty();
        for (const auto &r : rows) all_infeasible = all_infeasible && r.infeasible;
        return all_infeasible ? kExitAllInfeasible : 0;
    } catch (const bellqkd::ConfigError &e) {
        std::fprintf(stderr, "bellqkd: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "bellqkd: %s\n", e.what());
        return 1;
    }
}
