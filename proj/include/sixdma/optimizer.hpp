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

// Block coordinate descent over antenna positions, an auxiliary spacing-feasible
// copy of them, and panel rotation, run once per candidate BS. The spacing
// constraint on the positions is handled by a quadratic penalty that pulls them
// toward the auxiliary copy; the auxiliary copy is kept feasible at all times.
//
// Each candidate is solved in two stages. The first keeps the panel flat
// (rotation fixed at zero) and optimizes positions only; the second resumes
// from that result with all three blocks active. The first stage is exactly
// the fixed-rotation solve, so the full solve can never end below it.
//
// Every outer iteration offers a spacing-feasible design (the positions when
// they already satisfy the spacing, otherwise the auxiliary copy). It replaces
// the incumbent only if it raises the SINR, so the recorded SINR trace is
// non-decreasing and the returned design is always feasible.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sixdma/beamforming.hpp"
#include "sixdma/channel.hpp"

namespace sixdma {

enum class ArrayMode {
    Movable,  // positions optimized inside [-L, L]^2
    Fixed,    // lambda/2 UPA, positions never change
};

struct SolverConfig {
    // Initial penalty factor; unset means 10 * gamma_init / L0^2.
    std::optional<double> penalty_mu;
    double penalty_growth = 5.0;
    double penalty_cap_factor = 1e8;  // mu never exceeds cap_factor * mu0
    double fd_epsilon_pos = 1e-6;     // m
    double fd_epsilon_rot = 1e-6;     // rad
    double armijo_c = 1e-4;
    double backtrack_shrink = 0.5;
    // Largest coordinate move of the first trial step; unset means L / 4.
    std::optional<double> initial_step_pos;
    double initial_step_rot = 0.2;  // rad
    double tol_outer = 1e-3;        // relative SINR gain per outer iteration
    double tol_inner = 1e-6;        // relative objective decrease inside a block
    int max_outer = 30;
    int max_pgd = 200;
    int max_rot = 200;
    int max_aux = 50;
    int max_backtrack = 30;
    double spacing_tol = 1e-6;  // m
    int top_c_candidates = 0;   // 0 evaluates every available BS
    // Multi-start for the positions-only stage: position_samples random
    // spacing-feasible layouts are scored, the best position_restarts of them,
    // the UPA and (when it fits) the lambda/2 array each get a short run (restart_max_outer outer iterations of at
    // most restart_max_pgd steps), and the full stage continues from the best.
    // position_restarts = 0 starts from the UPA only.
    int position_restarts = 8;
    int position_samples = 2000;
    int restart_max_outer = 2;
    int restart_max_pgd = 50;

    ArrayMode array_mode = ArrayMode::Movable;
    bool optimize_rotation = true;

    void validate() const;
};

struct AuxiliaryVector {
    std::vector<Point2> points;

    std::size_t size() const noexcept { return points.size(); }
    Apv as_apv() const { return Apv{points}; }
};

struct TraceEntry {
    int stage = 1;        // 1: rotation held at zero, 2: all blocks
    int iteration = 0;    // 0 is the starting point of the stage
    double gamma = 0.0;   // SINR of the incumbent feasible design
    double gamma_iterate = 0.0;  // SINR at the current (possibly infeasible) positions
    double penalty = 0.0;
    double violation = 0.0;  // max(0, L0 - min pairwise distance) of the iterate
    double mu = 0.0;
};

struct Design {
    Apv apv;
    Rotation arv;
    double gamma = 0.0;
};

struct CandidateResult {
    int k = -1;
    Design final;       // full solve
    Design fixed_arv;   // stage-1 result, rotation held at zero
    ComplexVector w;    // MMSE weights of `final`
    std::vector<TraceEntry> trace;
    std::size_t evaluations = 0;
};

struct SolveResult {
    int k_star = -1;
    Apv apv;
    Rotation arv;
    ComplexVector w;
    double sinr_linear = 0.0;
    std::vector<TraceEntry> trace;  // of the selected candidate
    std::vector<std::pair<int, double>> candidates;  // (k, gamma_k) in evaluation order
};

/// mu * sum_n |x_n - r_n|^2.
double penalty(const Apv& apv, const AuxiliaryVector& aux, double mu);

/// -gamma_k(apv, a) + penalty(apv, aux, mu).
double penalized_objective(const Apv& apv, const AuxiliaryVector& aux, const Rotation& a, int k, double mu,
                           const Scenario& scenario);

/// Central differences [f(x + eps e_n) - f(x - eps e_n)] / (2 eps).
template <class F>
std::vector<double> numerical_gradient(F&& f, std::span<const double> x, double eps) {
    std::vector<double> g(x.size(), 0.0);
    std::vector<double> probe(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double hi = x[i] + eps;
        const double lo = x[i] - eps;
        probe[i] = hi;
        const double fp = f(std::span<const double>(probe));
        probe[i] = lo;
        const double fm = f(std::span<const double>(probe));
        probe[i] = x[i];
        g[i] = (fp - fm) / (hi - lo);
    }
    return g;
}

/// Clamps every coordinate into [-half_side, half_side].
void project_box_inplace(std::span<double> x, double half_side) noexcept;
std::vector<double> project_box(std::span<const double> x, double half_side);

struct StepResult {
    double alpha = 0.0;  // 0 signals a stall
    double value = 0.0;  // f at the accepted point (f(x) on stall)
};

/// Backtracking line search: tries alpha0 * beta^t for t = 0..max_backtrack and
/// accepts the first alpha with f(P(x + alpha d)) <= f(x) + c alpha grad^T d.
/// `project` is applied to each trial point in place; `trial` receives the
/// accepted point.
template <class F, class Project>
StepResult backtracking_step(F&& f, std::span<const double> x, double fx, std::span<const double> d,
                             std::span<const double> grad, double alpha0, const SolverConfig& cfg,
                             Project&& project, std::vector<double>& trial) {
    double slope = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) slope += grad[i] * d[i];
    if (!(slope < 0.0) || !(alpha0 > 0.0) || !std::isfinite(alpha0)) return {0.0, fx};

    trial.resize(x.size());
    double alpha = alpha0;
    for (int t = 0; t <= cfg.max_backtrack; ++t) {
        for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * d[i];
        project(std::span<double>(trial));
        const double ft = f(std::span<const double>(trial));
        if (ft <= fx + cfg.armijo_c * alpha * slope) return {alpha, ft};
        alpha *= cfg.backtrack_shrink;
    }
    trial.assign(x.begin(), x.end());
    return {0.0, fx};
}

/// Projected gradient descent on the penalized objective with aux and rotation fixed.
Apv pgd_apv(const Apv& start, const AuxiliaryVector& aux, const Rotation& a, double mu, double half_side,
            const SolverConfig& cfg, SinrEvaluator& objective);

/// Point closest to x among those at least min_spacing from every point of
/// `others` (and inside [-half_side, half_side]^2 when half_side is finite).
/// Candidates: x itself, the nearest point of each exclusion circle, pairwise
/// circle intersections and, for a finite box, edge projections, circle/edge
/// intersections and corners. Throws InfeasibleError when none is feasible.
Point2 solve_aux_point(const Point2& x, std::span<const Point2> others, double min_spacing,
                       double half_side = std::numeric_limits<double>::infinity());

/// Cyclic per-point minimization of sum |x_n - r_n|^2 under the spacing constraint.
AuxiliaryVector optimize_aux(const Apv& apv, const AuxiliaryVector& start, double min_spacing, double half_side,
                             const SolverConfig& cfg);

/// Gradient ascent on gamma_k over the three rotation angles (positions fixed).
Rotation gd_arv(const Rotation& start, const Apv& apv, const SolverConfig& cfg, SinrEvaluator& objective);

/// Full two-stage solve for one candidate BS.
CandidateResult bcd_solve(const Scenario& scenario, int k, const SolverConfig& cfg);

/// Candidate BSs in evaluation order: available BSs sorted by distance to the
/// UAV (ties by index), truncated to top_c_candidates when that is positive.
std::vector<int> candidate_pool(const Scenario& scenario, int top_c_candidates);

/// bcd_solve for every candidate.
std::vector<CandidateResult> solve_candidates(const Scenario& scenario, const SolverConfig& cfg);

/// Index of the largest gamma (ties: lower BS index). `gamma_of` maps a result to its score.
std::size_t argmax_candidate(const std::vector<CandidateResult>& results,
                             const std::function<double(const CandidateResult&)>& gamma_of);

/// Runs every candidate and returns the best association.
SolveResult select_bs(const Scenario& scenario, const SolverConfig& cfg);

SolveResult to_solve_result(const CandidateResult& best, const std::vector<CandidateResult>& all);

}  // namespace sixdma
