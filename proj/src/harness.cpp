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

#include "sixdma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "sixdma/array_layouts.hpp"
#include "sixdma/errors.hpp"

namespace sixdma {

namespace {

constexpr int kScenarioSubSeeds = 16;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------- schemes

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Proposed: return "PROPOSED";
        case Scheme::S1NearestBs: return "S1_NEAREST_BS";
        case Scheme::S2FixedArv: return "S2_FIXED_ARV";
        case Scheme::S3NearestFixedArv: return "S3_NEAREST_AND_FIXED_ARV";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    for (Scheme s : {Scheme::Proposed, Scheme::S1NearestBs, Scheme::S2FixedArv, Scheme::S3NearestFixedArv})
        if (scheme_name(s) == name) return s;
    throw InvalidArgument("unknown scheme '" + name + "'");
}

std::string scheme_label(const SchemeId& id) { return scheme_name(id.scheme) + (id.with_fpa ? "+FPA" : ""); }

SchemeId parse_scheme_label(const std::string& label) {
    const std::string suffix = "+FPA";
    if (label.size() > suffix.size() && label.ends_with(suffix))
        return {parse_scheme(label.substr(0, label.size() - suffix.size())), true};
    return {parse_scheme(label), false};
}

std::vector<SchemeId> all_schemes() {
    std::vector<SchemeId> out;
    for (bool fpa : {false, true})
        for (Scheme s : {Scheme::Proposed, Scheme::S1NearestBs, Scheme::S2FixedArv, Scheme::S3NearestFixedArv})
            out.push_back({s, fpa});
    return out;
}

std::string axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::J: return "J";
        case SweepAxis::Region: return "region";
        case SweepAxis::N: return "N";
    }
    return "?";
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "J") return SweepAxis::J;
    if (name == "region") return SweepAxis::Region;
    if (name == "N") return SweepAxis::N;
    throw InvalidArgument("unknown sweep axis '" + name + "' (expected J, region or N)");
}

// ------------------------------------------------------------- parameters

PhysParams ScenarioParams::phys() const {
    PhysParams p;
    p.wavelength = wavelength;
    p.tx_power = dbm_to_watts(tx_power_dbm);
    p.noise_power = dbm_to_watts(noise_power_dbm);
    p.panel_half_side = 0.5 * region_2L_over_lambda * wavelength;
    p.min_spacing = min_spacing_over_lambda * wavelength;
    p.antenna_count = N;
    return p;
}

ScenarioParams ScenarioParams::at(SweepAxis axis, double value) const {
    ScenarioParams p = *this;
    switch (axis) {
        case SweepAxis::J: p.J = static_cast<int>(std::lround(value)); break;
        case SweepAxis::Region: p.region_2L_over_lambda = value; break;
        case SweepAxis::N: p.N = static_cast<int>(std::lround(value)); break;
    }
    return p;
}

void SweepSpec::validate() const {
    if (values.empty()) throw InvalidArgument("SweepSpec: axis values must not be empty");
    if (!std::is_sorted(values.begin(), values.end())) throw InvalidArgument("SweepSpec: axis values must be sorted");
    if (trials < 1) throw InvalidArgument("SweepSpec: trials must be at least 1");
    if (schemes.empty()) throw InvalidArgument("SweepSpec: no schemes selected");
    if (workers < 1) throw InvalidArgument("SweepSpec: workers must be at least 1");
    solver.validate();
    for (double v : values) fixed.at(axis, v).phys().validate();
}

// ---------------------------------------------------------------- scenario

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept {
    std::uint64_t z = base ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

bool inside_central_cell(const Vec3& p, double cell_radius) noexcept {
    const double apothem = 0.5 * std::sqrt(3.0) * cell_radius;
    const double c60 = 0.5, s60 = 0.5 * std::sqrt(3.0);
    return std::abs(p[0]) <= apothem && std::abs(c60 * p[0] + s60 * p[1]) <= apothem &&
           std::abs(-c60 * p[0] + s60 * p[1]) <= apothem;
}

Vec3 sample_uav_position(const CellLayout& layout, double uav_height, std::mt19937_64& rng) {
    const double r = layout.cell_radius;
    const double half_w = 0.5 * std::sqrt(3.0) * r;
    for (;;) {
        const Vec3 p{(2.0 * uniform01(rng) - 1.0) * half_w, (2.0 * uniform01(rng) - 1.0) * r, uav_height};
        if (inside_central_cell(p, r)) return p;
    }
}

Scenario make_scenario(const ScenarioParams& params, std::uint64_t seed) {
    Scenario sc;
    sc.layout = build_hex_layout(params.q, params.cell_radius, params.bs_height);
    sc.phys = params.phys();
    sc.phys.validate();
    for (int attempt = 0;; ++attempt) {
        std::mt19937_64 rng(attempt == 0 ? seed : mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        sc.uav = params.fixed_uav ? *params.fixed_uav : sample_uav_position(sc.layout, params.uav_height, rng);
        try {
            sc.draw = sample_occupancy(sc.layout, params.J, params.e, sc.uav, rng);
            return sc;
        } catch (const SamplingError&) {
            if (attempt + 1 >= kScenarioSubSeeds) throw;
        }
    }
}

// ------------------------------------------------------------------ trials

SolverConfig scheme_solver_config(const SolverConfig& base, const SchemeId& id, bool fpa_rotation) {
    SolverConfig cfg = base;
    cfg.array_mode = id.with_fpa ? ArrayMode::Fixed : ArrayMode::Movable;
    const bool rotating_scheme = id.scheme == Scheme::Proposed || id.scheme == Scheme::S1NearestBs;
    cfg.optimize_rotation = rotating_scheme && (!id.with_fpa || fpa_rotation);
    return cfg;
}

std::vector<TrialRecord> run_trial_batch(const ScenarioParams& point, SweepAxis axis, double axis_value,
                                         std::span<const SchemeId> schemes, std::uint64_t seed,
                                         const SolverConfig& solver, bool fpa_rotation, bool record_wall_time) {
    const Scenario sc = make_scenario(point, seed);
    std::vector<TrialRecord> out(schemes.size());

    for (bool fpa : {false, true}) {
        bool any = false, need_rotation = false, need_all = false;
        for (const auto& s : schemes) {
            if (s.with_fpa != fpa) continue;
            any = true;
            need_rotation = need_rotation || scheme_solver_config(solver, s, fpa_rotation).optimize_rotation;
            need_all = need_all || s.scheme == Scheme::Proposed || s.scheme == Scheme::S2FixedArv;
        }
        if (!any) continue;

        const auto t0 = std::chrono::steady_clock::now();
        SolverConfig cfg = solver;
        cfg.array_mode = fpa ? ArrayMode::Fixed : ArrayMode::Movable;
        cfg.optimize_rotation = need_rotation;
        const std::vector<int> pool = candidate_pool(sc, solver.top_c_candidates);
        std::vector<CandidateResult> results;
        if (need_all) {
            for (int k : pool) results.push_back(bcd_solve(sc, k, cfg));
        } else {
            results.push_back(bcd_solve(sc, pool.front(), cfg));  // nearest available BS
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

        auto full = [](const CandidateResult& c) { return c.final.gamma; };
        auto flat = [](const CandidateResult& c) { return c.fixed_arv.gamma; };
        for (std::size_t i = 0; i < schemes.size(); ++i) {
            const SchemeId& s = schemes[i];
            if (s.with_fpa != fpa) continue;
            const bool rotates = scheme_solver_config(solver, s, fpa_rotation).optimize_rotation;
            const bool nearest_only = s.scheme == Scheme::S1NearestBs || s.scheme == Scheme::S3NearestFixedArv;
            // results[0] is always the nearest available BS.
            const std::size_t idx = nearest_only ? 0 : argmax_candidate(results, rotates ? std::function<double(const CandidateResult&)>(full)
                                                                                           : std::function<double(const CandidateResult&)>(flat));
            const CandidateResult& c = results[idx];
            TrialRecord& r = out[i];
            r.seed = seed;
            r.scheme = s;
            r.axis = axis;
            r.axis_value = axis_value;
            r.J = point.J;
            r.N = point.N;
            r.region_2L_over_lambda = point.region_2L_over_lambda;
            r.k_star = c.k;
            r.sinr_linear = rotates ? c.final.gamma : c.fixed_arv.gamma;
            r.sinr_db = linear_to_db(r.sinr_linear);
            r.wall_time_ms = record_wall_time ? ms : 0.0;
        }
    }
    return out;
}

TrialRecord run_trial(const ScenarioParams& point, SweepAxis axis, double axis_value, const SchemeId& scheme,
                      std::uint64_t seed, const SolverConfig& solver, bool fpa_rotation, bool record_wall_time) {
    const SchemeId one[] = {scheme};
    return run_trial_batch(point, axis, axis_value, one, seed, solver, fpa_rotation, record_wall_time).front();
}

std::string csv_row(const TrialRecord& r) {
    std::string s;
    s += std::to_string(r.seed);
    s += ',' + scheme_name(r.scheme.scheme);
    s += ',' + std::string(r.scheme.with_fpa ? "1" : "0");
    s += ',' + axis_name(r.axis);
    s += ',' + format_number(r.axis_value);
    s += ',' + std::to_string(r.J);
    s += ',' + std::to_string(r.N);
    s += ',' + format_number(r.region_2L_over_lambda);
    s += ',' + std::to_string(r.k_star);
    s += ',' + format_number(r.sinr_db);
    s += ',' + format_number(r.wall_time_ms);
    return s;
}

// ------------------------------------------------------------------ sweeps

std::vector<double> mean_sinr_db(const std::vector<TrialRecord>& records, const SweepSpec& spec,
                                 const SchemeId& scheme) {
    std::vector<double> out;
    for (double v : spec.values) {
        double sum = 0.0;
        int count = 0;
        for (const auto& r : records) {
            if (r.scheme == scheme && r.axis_value == v) {
                sum += r.sinr_linear;
                ++count;
            }
        }
        out.push_back(count ? linear_to_db(sum / count) : std::nan(""));
    }
    return out;
}

namespace {

std::string summary_path_for(const std::string& csv) {
    std::filesystem::path p(csv);
    p.replace_extension();
    return p.string() + ".summary.json";
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + path + "'");
    return f;
}

}  // namespace

SweepOutput run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepOutput out;
    out.csv_path = spec.output_path;
    out.summary_path = summary_path_for(spec.output_path);
    // Fail on unwritable paths before spending any compute.
    { auto probe = open_for_write(out.csv_path); }
    { auto probe = open_for_write(out.summary_path); }

    const std::size_t points = spec.values.size();
    const std::size_t trials = static_cast<std::size_t>(spec.trials);
    const std::size_t tasks = points * trials;
    std::vector<std::vector<TrialRecord>> results(tasks);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks) return;
            const std::size_t p = t / trials;
            const std::size_t i = t % trials;
            try {
                const double v = spec.values[p];
                results[t] = run_trial_batch(spec.fixed.at(spec.axis, v), spec.axis, v, spec.schemes,
                                             mix_seed(spec.base_seed, i), spec.solver, spec.fpa_rotation,
                                             spec.record_wall_time);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(tasks);
                return;
            }
        }
    };
    const int nworkers = std::max(1, std::min<int>(spec.workers, static_cast<int>(tasks)));
    if (nworkers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t p = 0; p < points; ++p)
        for (std::size_t s = 0; s < spec.schemes.size(); ++s)
            for (std::size_t i = 0; i < trials; ++i) out.records.push_back(results[p * trials + i][s]);

    {
        auto f = open_for_write(out.csv_path);
        f << kCsvHeader << '\n';
        for (const auto& r : out.records) f << csv_row(r) << '\n';
        if (!f) throw IoError("write failed for '" + out.csv_path + "'");
    }

    nlohmann::json summary;
    summary["axis"] = axis_name(spec.axis);
    summary["values"] = spec.values;
    summary["trials"] = spec.trials;
    summary["base_seed"] = spec.base_seed;
    summary["averaging"] = "mean of linear SINR over trials, then converted to dB";
    summary["seed_rule"] = "trial i uses mix_seed(base_seed, i) at every point and for every scheme";
    summary["fpa_rotation"] = spec.fpa_rotation;
    summary["top_c_candidates"] = spec.solver.top_c_candidates;
    summary["config"] = to_json(spec);
    nlohmann::json per_scheme = nlohmann::json::object();
    for (const auto& s : spec.schemes) {
        nlohmann::json rows = nlohmann::json::array();
        const auto means = mean_sinr_db(out.records, spec, s);
        for (std::size_t p = 0; p < points; ++p) {
            double db_sum = 0.0;
            int count = 0;
            for (const auto& r : out.records)
                if (r.scheme == s && r.axis_value == spec.values[p]) {
                    db_sum += r.sinr_db;
                    ++count;
                }
            rows.push_back({{"axis_value", spec.values[p]},
                            {"mean_sinr_db", means[p]},
                            {"mean_of_db", count ? db_sum / count : 0.0},
                            {"count", count}});
        }
        per_scheme[scheme_label(s)] = rows;
    }
    summary["schemes"] = per_scheme;
    out.summary = summary;
    {
        auto f = open_for_write(out.summary_path);
        f << summary.dump(2) << '\n';
    }
    return out;
}

// ------------------------------------------------------------------ presets

SweepSpec preset(const std::string& name) {
    SweepSpec s;
    if (name == "fig2") {
        s.axis = SweepAxis::J;
        s.values = {2, 4, 6, 8, 10, 12};
        s.fixed.N = 4;
        s.fixed.region_2L_over_lambda = 4;
    } else if (name == "fig3") {
        s.axis = SweepAxis::Region;
        s.values = {1, 2, 3, 4, 5, 6};
        s.fixed.J = 10;
        s.fixed.N = 4;
    } else if (name == "fig4") {
        s.axis = SweepAxis::N;
        s.values = {2, 4, 6, 8};
        s.fixed.J = 10;
        s.fixed.region_2L_over_lambda = 4;
    } else {
        throw InvalidArgument("unknown preset '" + name + "' (expected fig2, fig3 or fig4)");
    }
    s.output_path = name + ".csv";
    return s;
}

// -------------------------------------------------------------------- JSON

nlohmann::json to_json(const SolverConfig& c) {
    nlohmann::json j;
    j["penalty_mu"] = c.penalty_mu ? nlohmann::json(*c.penalty_mu) : nlohmann::json(nullptr);
    j["penalty_growth"] = c.penalty_growth;
    j["penalty_cap_factor"] = c.penalty_cap_factor;
    j["fd_epsilon_pos"] = c.fd_epsilon_pos;
    j["fd_epsilon_rot"] = c.fd_epsilon_rot;
    j["armijo_c"] = c.armijo_c;
    j["backtrack_shrink"] = c.backtrack_shrink;
    j["initial_step_pos"] = c.initial_step_pos ? nlohmann::json(*c.initial_step_pos) : nlohmann::json(nullptr);
    j["initial_step_rot"] = c.initial_step_rot;
    j["tol_outer"] = c.tol_outer;
    j["tol_inner"] = c.tol_inner;
    j["max_outer"] = c.max_outer;
    j["max_pgd"] = c.max_pgd;
    j["max_rot"] = c.max_rot;
    j["max_aux"] = c.max_aux;
    j["max_backtrack"] = c.max_backtrack;
    j["spacing_tol"] = c.spacing_tol;
    j["top_c_candidates"] = c.top_c_candidates;
    j["position_restarts"] = c.position_restarts;
    j["position_samples"] = c.position_samples;
    j["restart_max_outer"] = c.restart_max_outer;
    j["restart_max_pgd"] = c.restart_max_pgd;
    return j;
}

void update_from_json(SolverConfig& c, const nlohmann::json& j) {
    auto opt = [&](const char* key, std::optional<double>& field) {
        if (!j.contains(key)) return;
        if (j[key].is_null()) field.reset();
        else field = j[key].get<double>();
    };
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::remove_reference_t<decltype(field)>>();
    };
    opt("penalty_mu", c.penalty_mu);
    get("penalty_growth", c.penalty_growth);
    get("penalty_cap_factor", c.penalty_cap_factor);
    get("fd_epsilon_pos", c.fd_epsilon_pos);
    get("fd_epsilon_rot", c.fd_epsilon_rot);
    get("armijo_c", c.armijo_c);
    get("backtrack_shrink", c.backtrack_shrink);
    opt("initial_step_pos", c.initial_step_pos);
    get("initial_step_rot", c.initial_step_rot);
    get("tol_outer", c.tol_outer);
    get("tol_inner", c.tol_inner);
    get("max_outer", c.max_outer);
    get("max_pgd", c.max_pgd);
    get("max_rot", c.max_rot);
    get("max_aux", c.max_aux);
    get("max_backtrack", c.max_backtrack);
    get("spacing_tol", c.spacing_tol);
    get("top_c_candidates", c.top_c_candidates);
    get("position_restarts", c.position_restarts);
    get("position_samples", c.position_samples);
    get("restart_max_outer", c.restart_max_outer);
    get("restart_max_pgd", c.restart_max_pgd);
}

nlohmann::json to_json(const ScenarioParams& p) {
    nlohmann::json j;
    j["wavelength"] = p.wavelength;
    j["min_spacing_over_lambda"] = p.min_spacing_over_lambda;
    j["tx_power_dbm"] = p.tx_power_dbm;
    j["noise_power_dbm"] = p.noise_power_dbm;
    j["uav_height"] = p.uav_height;
    j["bs_height"] = p.bs_height;
    j["cell_radius"] = p.cell_radius;
    j["e"] = p.e;
    j["q"] = p.q;
    j["J"] = p.J;
    j["N"] = p.N;
    j["region_2L_over_lambda"] = p.region_2L_over_lambda;
    j["fixed_uav"] = p.fixed_uav ? nlohmann::json(*p.fixed_uav) : nlohmann::json(nullptr);
    return j;
}

void update_from_json(ScenarioParams& p, const nlohmann::json& j) {
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::remove_reference_t<decltype(field)>>();
    };
    get("wavelength", p.wavelength);
    get("min_spacing_over_lambda", p.min_spacing_over_lambda);
    get("tx_power_dbm", p.tx_power_dbm);
    get("noise_power_dbm", p.noise_power_dbm);
    get("uav_height", p.uav_height);
    get("bs_height", p.bs_height);
    get("cell_radius", p.cell_radius);
    get("e", p.e);
    get("q", p.q);
    get("J", p.J);
    get("N", p.N);
    get("region_2L_over_lambda", p.region_2L_over_lambda);
    if (j.contains("fixed_uav")) {
        if (j["fixed_uav"].is_null()) p.fixed_uav.reset();
        else p.fixed_uav = j["fixed_uav"].get<Vec3>();
    }
}

nlohmann::json to_json(const SweepSpec& s) {
    nlohmann::json j;
    j["axis"] = axis_name(s.axis);
    j["values"] = s.values;
    j["trials"] = s.trials;
    j["base_seed"] = s.base_seed;
    j["workers"] = s.workers;
    j["output"] = s.output_path;
    j["fpa_rotation"] = s.fpa_rotation;
    j["record_wall_time"] = s.record_wall_time;
    nlohmann::json schemes = nlohmann::json::array();
    for (const auto& id : s.schemes) schemes.push_back(scheme_label(id));
    j["schemes"] = schemes;
    j["scenario"] = to_json(s.fixed);
    j["solver"] = to_json(s.solver);
    return j;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j, SweepSpec s) {
    if (j.contains("preset")) s = preset(j["preset"].get<std::string>());
    if (j.contains("axis")) s.axis = parse_axis(j["axis"].get<std::string>());
    if (j.contains("values")) s.values = j["values"].get<std::vector<double>>();
    if (j.contains("trials")) s.trials = j["trials"].get<int>();
    if (j.contains("base_seed")) s.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("workers")) s.workers = j["workers"].get<int>();
    if (j.contains("output")) s.output_path = j["output"].get<std::string>();
    if (j.contains("fpa_rotation")) s.fpa_rotation = j["fpa_rotation"].get<bool>();
    if (j.contains("record_wall_time")) s.record_wall_time = j["record_wall_time"].get<bool>();
    if (j.contains("schemes")) {
        s.schemes.clear();
        for (const auto& e : j["schemes"]) s.schemes.push_back(parse_scheme_label(e.get<std::string>()));
    }
    if (j.contains("scenario")) update_from_json(s.fixed, j["scenario"]);
    if (j.contains("solver")) update_from_json(s.solver, j["solver"]);
    return s;
}

nlohmann::json to_json(const SolveResult& r, const Scenario& sc) {
    nlohmann::json j;
    j["k_star"] = r.k_star;
    j["sinr_linear"] = r.sinr_linear;
    j["sinr_db"] = linear_to_db(r.sinr_linear);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : r.apv.points) pts.push_back({p.x, p.y});
    j["apv"] = pts;
    j["arv"] = {{"phi", r.arv.phi}, {"psi", r.arv.psi}, {"theta", r.arv.theta}};
    nlohmann::json w = nlohmann::json::array();
    for (const auto& c : r.w) w.push_back({c.real(), c.imag()});
    j["w"] = w;
    nlohmann::json cands = nlohmann::json::array();
    for (const auto& [k, g] : r.candidates) cands.push_back({{"k", k}, {"sinr_db", linear_to_db(g)}});
    j["candidates"] = cands;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : r.trace)
        trace.push_back({{"stage", t.stage},
                         {"iteration", t.iteration},
                         {"gamma", t.gamma},
                         {"gamma_iterate", t.gamma_iterate},
                         {"penalty", t.penalty},
                         {"violation", t.violation},
                         {"mu", t.mu}});
    j["trace"] = trace;
    j["scenario"] = {{"uav", sc.uav},
                     {"occupied", sc.draw.occupied},
                     {"available", sc.draw.available},
                     {"nearest", sc.draw.nearest}};
    return j;
}

}  // namespace sixdma
