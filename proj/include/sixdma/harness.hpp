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

// Monte Carlo harness: scenario draws, the comparison schemes, single trials
// and full parameter sweeps with CSV/JSON output.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sixdma/beamforming.hpp"
#include "sixdma/optimizer.hpp"

namespace sixdma {

enum class Scheme {
    Proposed,           // best BS, positions and rotation optimized
    S1NearestBs,        // nearest available BS, positions and rotation optimized
    S2FixedArv,         // best BS, panel held parallel to the ground
    S3NearestFixedArv,  // nearest available BS, panel held parallel to the ground
};

struct SchemeId {
    Scheme scheme = Scheme::Proposed;
    bool with_fpa = false;  // lambda/2 fixed array instead of movable antennas

    friend bool operator==(const SchemeId&, const SchemeId&) = default;
};

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);
/// "PROPOSED", "S2_FIXED_ARV+FPA", ...
std::string scheme_label(const SchemeId& id);
SchemeId parse_scheme_label(const std::string& label);
/// The four schemes, movable-antenna variants first, then their FPA counterparts.
std::vector<SchemeId> all_schemes();

enum class SweepAxis { J, Region, N };

std::string axis_name(SweepAxis a);
SweepAxis parse_axis(const std::string& name);

/// Physical and geometric parameters of one sweep point.
struct ScenarioParams {
    double wavelength = 0.03;               // m
    double min_spacing_over_lambda = 0.5;   // L0 / lambda
    double tx_power_dbm = 30.0;
    double noise_power_dbm = -109.0;
    double uav_height = 100.0;  // m
    double bs_height = 30.0;    // m
    double cell_radius = 100.0; // m
    int e = 1;
    int q = 4;
    int J = 10;
    int N = 4;
    double region_2L_over_lambda = 4.0;
    std::optional<Vec3> fixed_uav;  // overrides the random UAV draw

    PhysParams phys() const;
    /// Copy with the sweep axis set to `value`.
    ScenarioParams at(SweepAxis axis, double value) const;
};

struct TrialRecord {
    std::uint64_t seed = 0;
    SchemeId scheme;
    SweepAxis axis = SweepAxis::J;
    double axis_value = 0.0;
    int J = 0;
    int N = 0;
    double region_2L_over_lambda = 0.0;
    int k_star = -1;
    double sinr_linear = 0.0;
    double sinr_db = 0.0;
    double wall_time_ms = 0.0;
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::J;
    std::vector<double> values;
    int trials = 50;
    ScenarioParams fixed;
    std::vector<SchemeId> schemes = all_schemes();
    std::string output_path = "sweep.csv";
    std::uint64_t base_seed = 1;
    int workers = 1;
    SolverConfig solver;
    // The FPA counterpart of PROPOSED / S1 still optimizes rotation when set.
    bool fpa_rotation = true;
    // Measured times are written only on request; otherwise the column is 0
    // so that reruns produce byte-identical files.
    bool record_wall_time = false;

    void validate() const;
};

/// Mixes a base seed with a trial index (SplitMix64 finalizer over base ^ golden * (index + 1)).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Uniform horizontal position inside the central hexagonal cell at the given altitude.
Vec3 sample_uav_position(const CellLayout& layout, double uav_height, std::mt19937_64& rng);

/// True when the horizontal part of p lies in the central cell (circumradius R, pointy-top).
bool inside_central_cell(const Vec3& p, double cell_radius) noexcept;

/// Builds layout, UAV position and occupancy from a seed. If the occupancy draw
/// fails, the draw is repeated with sub-seeds mix_seed(seed, attempt).
Scenario make_scenario(const ScenarioParams& params, std::uint64_t seed);

/// Solver settings a scheme runs with.
SolverConfig scheme_solver_config(const SolverConfig& base, const SchemeId& id, bool fpa_rotation);

/// Runs one scheme on the scenario drawn from `seed`.
TrialRecord run_trial(const ScenarioParams& point, SweepAxis axis, double axis_value, const SchemeId& scheme,
                      std::uint64_t seed, const SolverConfig& solver, bool fpa_rotation = true,
                      bool record_wall_time = false);

/// Runs several schemes on the same draw. Movable and fixed arrays are each
/// solved once per candidate; every scheme is then read off those candidate
/// results, which gives the same numbers as separate run_trial calls.
std::vector<TrialRecord> run_trial_batch(const ScenarioParams& point, SweepAxis axis, double axis_value,
                                         std::span<const SchemeId> schemes, std::uint64_t seed,
                                         const SolverConfig& solver, bool fpa_rotation = true,
                                         bool record_wall_time = false);

inline constexpr const char* kCsvHeader =
    "seed,scheme,with_fpa,axis_name,axis_value,J,N,region_2L_over_lambda,k_star,sinr_db,wall_time_ms";

std::string csv_row(const TrialRecord& r);

struct SweepOutput {
    std::vector<TrialRecord> records;  // CSV order: point, scheme, trial
    nlohmann::json summary;
    std::string csv_path;
    std::string summary_path;
};

/// Runs the whole sweep and writes `<output>` (CSV) and `<output stem>.summary.json`.
/// The output location is checked for writability before any trial runs.
SweepOutput run_sweep(const SweepSpec& spec);

/// Per-point mean SINR in dB (mean of linear values, then converted) for one scheme.
std::vector<double> mean_sinr_db(const std::vector<TrialRecord>& records, const SweepSpec& spec,
                                 const SchemeId& scheme);

/// fig2 / fig3 / fig4 sweeps with the default physical parameters.
SweepSpec preset(const std::string& name);

SweepSpec sweep_spec_from_json(const nlohmann::json& j, SweepSpec base = {});
nlohmann::json to_json(const SweepSpec& spec);
nlohmann::json to_json(const SolverConfig& cfg);
void update_from_json(SolverConfig& cfg, const nlohmann::json& j);
void update_from_json(ScenarioParams& p, const nlohmann::json& j);
nlohmann::json to_json(const ScenarioParams& p);
nlohmann::json to_json(const SolveResult& r, const Scenario& scenario);

}  // namespace sixdma
