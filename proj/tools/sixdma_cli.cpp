// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sixdma/cell_grid.hpp"
#include "sixdma/errors.hpp"
#include "sixdma/harness.hpp"
#include "sixdma/optimizer.hpp"
#include "sixdma/selftest.hpp"

using namespace sixdma;

namespace {

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("config file " + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text << '\n';
}

struct ScenarioFlags {
    std::optional<int> J, N, q, e;
    std::optional<double> region, power_dbm, noise_dbm;

    void add(CLI::App* app) {
        app->add_option("--J", J, "Number of occupied BSs");
        app->add_option("--N", N, "Number of antennas");
        app->add_option("--region", region, "Normalized panel size 2L/lambda");
        app->add_option("--q", q, "Interfering cell tiers");
        app->add_option("--e", e, "ICIC tiers");
        app->add_option("--power-dbm", power_dbm, "BS transmit power (dBm)");
        app->add_option("--noise-dbm", noise_dbm, "Noise power (dBm)");
    }

    void apply(ScenarioParams& p) const {
        if (J) p.J = *J;
        if (N) p.N = *N;
        if (region) p.region_2L_over_lambda = *region;
        if (q) p.q = *q;
        if (e) p.e = *e;
        if (power_dbm) p.tx_power_dbm = *power_dbm;
        if (noise_dbm) p.noise_power_dbm = *noise_dbm;
    }
};

int run_solve(const std::string& config, std::uint64_t seed, const ScenarioFlags& flags, std::optional<int> top_c,
              bool fpa, bool no_rotation, const std::string& trace_path, const std::string& out) {
    ScenarioParams params;
    SolverConfig solver;
    if (!config.empty()) {
        const nlohmann::json j = read_json(config);
        if (j.contains("scenario")) update_from_json(params, j["scenario"]);
        if (j.contains("solver")) update_from_json(solver, j["solver"]);
    }
    flags.apply(params);
    if (top_c) solver.top_c_candidates = *top_c;
    if (fpa) solver.array_mode = ArrayMode::Fixed;
    if (no_rotation) solver.optimize_rotation = false;

    const Scenario sc = make_scenario(params, seed);
    const SolveResult r = select_bs(sc, solver);
    nlohmann::json j = to_json(r, sc);
    j["seed"] = seed;
    write_text(out, j.dump(2));

    if (!trace_path.empty()) {
        std::ofstream t(trace_path);
        if (!t) throw IoError("cannot write " + trace_path);
        for (const auto& e : r.trace)
            t << nlohmann::json{{"stage", e.stage}, {"iteration", e.iteration}, {"gamma", e.gamma},
                                {"penalty", e.penalty}, {"violation", e.violation}}
                     .dump()
              << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV receiver with movable, rotatable antenna arrays: solver and Monte Carlo sweeps"};
    app.require_subcommand(1);

    // layout
    auto* layout = app.add_subcommand("layout", "Dump the hexagonal BS layout as JSON");
    int layout_q = 4;
    double layout_radius = 100.0, layout_height = 30.0;
    std::string layout_out;
    layout->add_option("--q", layout_q, "Number of tiers around the central cell");
    layout->add_option("--radius", layout_radius, "Cell circumradius (m)");
    layout->add_option("--bs-height", layout_height, "BS height (m)");
    layout->add_option("--out", layout_out, "Output file (default stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "Solve one random scenario and print the result as JSON");
    std::string solve_config, solve_trace, solve_out;
    std::uint64_t solve_seed = 1;
    ScenarioFlags solve_flags;
    std::optional<int> solve_top_c;
    bool solve_fpa = false, solve_no_rot = false;
    solve->add_option("--config", solve_config, "JSON file with \"scenario\" and \"solver\" sections");
    solve->add_option("--seed", solve_seed, "Scenario seed");
    solve_flags.add(solve);
    solve->add_option("--top-c", solve_top_c, "Evaluate only the C nearest available BSs");
    solve->add_flag("--fpa", solve_fpa, "Use the fixed lambda/2 array");
    solve->add_flag("--no-rotation", solve_no_rot, "Keep the panel parallel to the ground");
    solve->add_option("--trace", solve_trace, "Write the outer-iteration trace of the chosen BS as JSON lines");
    solve->add_option("--out", solve_out, "Output file (default stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep and write CSV plus a JSON summary");
    std::string sweep_config, sweep_preset, sweep_out, sweep_fpa_rot;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<int> sweep_trials, sweep_workers, sweep_top_c;
    bool sweep_timing = false;
    sweep->add_option("--config", sweep_config, "JSON sweep config");
    sweep->add_option("--preset", sweep_preset, "Bundled sweep")->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
    sweep->add_option("--seed", sweep_seed, "Base seed");
    sweep->add_option("--trials", sweep_trials, "Trials per point");
    sweep->add_option("--workers", sweep_workers, "Worker threads");
    sweep->add_option("--out", sweep_out, "CSV output path");
    sweep->add_option("--top-c", sweep_top_c, "Evaluate only the C nearest available BSs");
    sweep->add_option("--fpa-rotation", sweep_fpa_rot, "Rotate the fixed array in PROPOSED/S1 FPA variants")
        ->check(CLI::IsMember({"on", "off"}));
    sweep->add_flag("--timing", sweep_timing, "Record wall-clock time per trial (output is then not reproducible)");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "Run the property checks");
    std::uint64_t self_seed = 7;
    int self_trials = 6;
    selftest->add_option("--seed", self_seed, "Seed for the random draws");
    selftest->add_option("--trials", self_trials, "Full trials for the dominance check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*layout) {
            const CellLayout l = build_hex_layout(layout_q, layout_radius, layout_height);
            write_text(layout_out, layout_to_json(l));
            return 0;
        }
        if (*solve)
            return run_solve(solve_config, solve_seed, solve_flags, solve_top_c, solve_fpa, solve_no_rot, solve_trace,
                             solve_out);
        if (*sweep) {
            SweepSpec spec = sweep_preset.empty() ? SweepSpec{} : preset(sweep_preset);
            if (!sweep_config.empty()) spec = sweep_spec_from_json(read_json(sweep_config), spec);
            if (sweep_seed) spec.base_seed = *sweep_seed;
            if (sweep_trials) spec.trials = *sweep_trials;
            if (sweep_workers) spec.workers = *sweep_workers;
            if (!sweep_out.empty()) spec.output_path = sweep_out;
            if (sweep_top_c) spec.solver.top_c_candidates = *sweep_top_c;
            if (!sweep_fpa_rot.empty()) spec.fpa_rotation = sweep_fpa_rot == "on";
            if (sweep_timing) spec.record_wall_time = true;
            const SweepOutput out = run_sweep(spec);
            std::cerr << "wrote " << out.records.size() << " rows to " << out.csv_path << " and " << out.summary_path
                      << '\n';
            return 0;
        }
        if (*selftest) {
            const SelftestReport rep = run_selftest(self_seed, self_trials);
            for (const auto& c : rep.checks)
                std::printf("%s  %-40s %8.3f s  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.seconds,
                            c.detail.c_str());
            return rep.passed() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
