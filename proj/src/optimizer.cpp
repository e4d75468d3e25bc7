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

#include "sixdma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <random>

#include "sixdma/array_layouts.hpp"
#include "sixdma/errors.hpp"

namespace sixdma {

namespace {

constexpr double kTiny = 1e-300;

double inf_norm(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool converged(double previous, double current, double tol) noexcept {
    return (previous - current) < tol * std::max(std::abs(previous), kTiny);
}

}  // namespace

void SolverConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw InvalidArgument(std::string("SolverConfig: ") + what);
    };
    require(!penalty_mu || *penalty_mu > 0.0, "penalty_mu must be positive");
    require(penalty_growth >= 1.0, "penalty_growth must be >= 1");
    require(penalty_cap_factor >= 1.0, "penalty_cap_factor must be >= 1");
    require(fd_epsilon_pos > 0.0 && fd_epsilon_rot > 0.0, "finite-difference steps must be positive");
    require(armijo_c >= 0.0 && armijo_c <= 1.0, "armijo_c must lie in [0, 1]");
    require(backtrack_shrink > 0.0 && backtrack_shrink < 1.0, "backtrack_shrink must lie in (0, 1)");
    require(!initial_step_pos || *initial_step_pos > 0.0, "initial_step_pos must be positive");
    require(initial_step_rot > 0.0, "initial_step_rot must be positive");
    require(tol_outer >= 0.0 && tol_inner >= 0.0, "tolerances must be non-negative");
    require(max_outer >= 0 && max_pgd >= 0 && max_rot >= 0 && max_aux >= 0 && max_backtrack >= 0,
            "iteration caps must be non-negative");
    require(spacing_tol >= 0.0, "spacing_tol must be non-negative");
    require(top_c_candidates >= 0, "top_c_candidates must be non-negative");
    require(position_restarts >= 0 && position_samples >= 0 && restart_max_outer >= 0 &&
                restart_max_pgd >= 0,
            "multi-start settings must be non-negative");
}

double penalty(const Apv& apv, const AuxiliaryVector& aux, double mu) {
    if (apv.size() != aux.size())
        throw DimensionError("penalty: APV has " + std::to_string(apv.size()) + " points, auxiliary vector " +
                             std::to_string(aux.size()));
    double s = 0.0;
    for (std::size_t n = 0; n < apv.size(); ++n) s += squared_distance(apv.points[n], aux.points[n]);
    return mu * s;
}

double penalized_objective(const Apv& apv, const AuxiliaryVector& aux, const Rotation& a, int k, double mu,
                           const Scenario& scenario) {
    return -objective_sinr(apv, a, k, scenario) + penalty(apv, aux, mu);
}

void project_box_inplace(std::span<double> x, double half_side) noexcept {
    for (double& v : x) v = std::clamp(v, -half_side, half_side);
}

std::vector<double> project_box(std::span<const double> x, double half_side) {
    std::vector<double> out(x.begin(), x.end());
    project_box_inplace(out, half_side);
    return out;
}

Apv pgd_apv(const Apv& start, const AuxiliaryVector& aux, const Rotation& a, double mu, double half_side,
            const SolverConfig& cfg, SinrEvaluator& objective) {
    if (start.size() != aux.size()) throw DimensionError("pgd_apv: APV and auxiliary vector sizes differ");
    const std::vector<double> r = aux.as_apv().flatten();
    auto f = [&](std::span<const double> xy) {
        double pen = 0.0;
        for (std::size_t i = 0; i < xy.size(); ++i) pen += (xy[i] - r[i]) * (xy[i] - r[i]);
        return -objective(xy, a) + mu * pen;
    };
    auto project = [half_side](std::span<double> xy) { project_box_inplace(xy, half_side); };
    const double step = cfg.initial_step_pos.value_or(half_side / 4.0);

    std::vector<double> x = start.flatten();
    project_box_inplace(x, half_side);
    double fx = f(x);
    std::vector<double> d(x.size());
    std::vector<double> trial;
    for (int it = 0; it < cfg.max_pgd; ++it) {
        const std::vector<double> g = numerical_gradient(f, x, cfg.fd_epsilon_pos);
        for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
        const double dn = inf_norm(d);
        if (!(dn > 0.0)) break;
        const StepResult s = backtracking_step(f, x, fx, d, g, step / dn, cfg, project, trial);
        if (s.alpha == 0.0) break;
        const double previous = fx;
        x.swap(trial);
        fx = s.value;
        if (converged(previous, fx, cfg.tol_inner)) break;
    }
    return Apv::from_flat(x);
}

Point2 solve_aux_point(const Point2& x, std::span<const Point2> others, double min_spacing, double half_side) {
    if (!(min_spacing > 0.0)) throw InvalidArgument("solve_aux_point: min_spacing must be positive");
    const bool boxed = std::isfinite(half_side);
    const double tol = 1e-9 * min_spacing;
    const double l0sq = min_spacing * min_spacing;

    auto feasible = [&](const Point2& p) {
        if (boxed && (std::abs(p.x) > half_side || std::abs(p.y) > half_side)) return false;
        for (const auto& o : others)
            if (distance(p, o) < min_spacing - tol) return false;
        return true;
    };

    bool found = false;
    Point2 best{};
    double best_d = std::numeric_limits<double>::infinity();
    auto offer = [&](Point2 p) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) return;
        if (boxed) {
            // Absorb rounding overshoot at the box boundary.
            if (std::abs(p.x) > half_side + tol || std::abs(p.y) > half_side + tol) return;
            p.x = std::clamp(p.x, -half_side, half_side);
            p.y = std::clamp(p.y, -half_side, half_side);
        }
        if (!feasible(p)) return;
        const double d = squared_distance(x, p);
        if (d < best_d) {
            best_d = d;
            best = p;
            found = true;
        }
    };

    offer(x);
    if (found) return best;  // no conflicting neighbour: r_n = x_n

    for (const auto& o : others) {
        const double dx = x.x - o.x;
        const double dy = x.y - o.y;
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (dist > 0.0) {
            offer({o.x + min_spacing * dx / dist, o.y + min_spacing * dy / dist});
        } else {
            // Every point of the circle is equally close; offer the axis points.
            offer({o.x + min_spacing, o.y});
            offer({o.x - min_spacing, o.y});
            offer({o.x, o.y + min_spacing});
            offer({o.x, o.y - min_spacing});
        }
    }

    for (std::size_t i = 0; i < others.size(); ++i) {
        for (std::size_t j = i + 1; j < others.size(); ++j) {
            const Point2& a = others[i];
            const Point2& b = others[j];
            const double dsq = squared_distance(a, b);
            if (!(dsq > 0.0) || dsq >= 4.0 * l0sq) continue;
            const double d = std::sqrt(dsq);
            const double h = std::sqrt(std::max(0.0, l0sq - 0.25 * dsq));
            const Point2 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
            const double ux = (b.x - a.x) / d;
            const double uy = (b.y - a.y) / d;
            offer({mid.x - h * uy, mid.y + h * ux});
            offer({mid.x + h * uy, mid.y - h * ux});
        }
    }

    if (boxed) {
        const double s[2] = {-half_side, half_side};
        for (double c : s) {
            offer({c, std::clamp(x.y, -half_side, half_side)});
            offer({std::clamp(x.x, -half_side, half_side), c});
            for (double c2 : s) offer({c, c2});
            for (const auto& o : others) {
                const double ex = l0sq - (c - o.x) * (c - o.x);
                if (ex >= 0.0) {
                    const double r = std::sqrt(ex);
                    offer({c, o.y + r});
                    offer({c, o.y - r});
                }
                const double ey = l0sq - (c - o.y) * (c - o.y);
                if (ey >= 0.0) {
                    const double r = std::sqrt(ey);
                    offer({o.x + r, c});
                    offer({o.x - r, c});
                }
            }
        }
    }

    if (!found)
        throw InfeasibleError("solve_aux_point: no position keeps " + std::to_string(min_spacing) +
                              " m from all " + std::to_string(others.size()) + " other antennas");
    return best;
}

AuxiliaryVector optimize_aux(const Apv& apv, const AuxiliaryVector& start, double min_spacing, double half_side,
                             const SolverConfig& cfg) {
    if (apv.size() != start.size()) throw DimensionError("optimize_aux: APV and auxiliary vector sizes differ");
    AuxiliaryVector r = start;
    const std::size_t n = r.size();
    auto objective = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += squared_distance(apv.points[i], r.points[i]);
        return s;
    };

    double obj = objective();
    std::vector<Point2> others;
    others.reserve(n);
    for (int sweep = 0; sweep < cfg.max_aux; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            others.clear();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) others.push_back(r.points[j]);
            const Point2 cand = solve_aux_point(apv.points[i], others, min_spacing, half_side);
            // An infeasible start point is always replaced, even by a farther one.
            bool ok = std::abs(r.points[i].x) <= half_side && std::abs(r.points[i].y) <= half_side;
            for (const auto& o : others) ok = ok && distance(r.points[i], o) >= min_spacing - cfg.spacing_tol;
            if (!ok || squared_distance(apv.points[i], cand) < squared_distance(apv.points[i], r.points[i]))
                r.points[i] = cand;
        }
        const double next = objective();
        // A sweep that had to repair an infeasible start can raise the objective;
        // keep going in that case.
        const bool done = next <= obj && converged(obj, next, cfg.tol_inner);
        obj = next;
        if (done) break;
    }
    return r;
}

Rotation gd_arv(const Rotation& start, const Apv& apv, const SolverConfig& cfg, SinrEvaluator& objective) {
    const std::vector<double> xy = apv.flatten();
    auto f = [&](std::span<const double> ang) { return -objective(xy, Rotation{ang[0], ang[1], ang[2]}); };
    auto no_projection = [](std::span<double>) {};

    std::vector<double> a{start.phi, start.psi, start.theta};
    double fa = f(a);
    std::vector<double> d(3);
    std::vector<double> trial;
    for (int it = 0; it < cfg.max_rot; ++it) {
        const std::vector<double> g = numerical_gradient(f, a, cfg.fd_epsilon_rot);
        for (std::size_t i = 0; i < 3; ++i) d[i] = -g[i];
        const double dn = inf_norm(d);
        if (!(dn > 0.0)) break;
        const StepResult s = backtracking_step(f, a, fa, d, g, cfg.initial_step_rot / dn, cfg, no_projection, trial);
        if (s.alpha == 0.0) break;
        const double previous = fa;
        a = {wrap_angle(trial[0]), wrap_angle(trial[1]), wrap_angle(trial[2])};
        fa = s.value;
        if (converged(previous, fa, cfg.tol_inner)) break;
    }
    return Rotation{a[0], a[1], a[2]}.wrapped();
}

namespace {

// One BCD stage from `start`. Appends to `trace`; returns the incumbent.
Design run_stage(SinrEvaluator& eval, const Design& start, bool move_positions, bool rotate, int stage,
                 const SolverConfig& cfg, std::vector<TraceEntry>& trace) {
    const PhysParams& phys = eval.link().phys;
    const double half_side = phys.panel_half_side;
    const double l0 = phys.min_spacing;

    Apv x = start.apv;
    AuxiliaryVector r{x.points};
    Rotation a = start.arv;

    Design best{x, a, eval(x, a)};
    double mu = cfg.penalty_mu.value_or(10.0 * std::abs(best.gamma) / (l0 * l0));
    const double mu_cap = mu * cfg.penalty_cap_factor;
    trace.push_back({stage, 0, best.gamma, best.gamma, 0.0, x.spacing_violation(l0), mu});
    if (!move_positions && !rotate) return best;

    for (int it = 1; it <= cfg.max_outer; ++it) {
        if (move_positions) {
            x = pgd_apv(x, r, a, mu, half_side, cfg, eval);
            r = optimize_aux(x, r, l0, half_side, cfg);
        }
        if (rotate) a = gd_arv(a, x, cfg, eval);

        const double previous = best.gamma;
        const double gamma_x = eval(x, a);
        const double violation = x.spacing_violation(l0);
        if (violation <= cfg.spacing_tol && gamma_x > best.gamma) best = {x, a, gamma_x};
        if (move_positions) {
            Apv snapped = r.as_apv();
            const double gamma_r = eval(snapped, a);
            if (gamma_r > best.gamma) best = {std::move(snapped), a, gamma_r};
        }
        trace.push_back({stage, it, best.gamma, gamma_x, penalty(x, r, mu), violation, mu});

        const double gain = (best.gamma - previous) / std::max(std::abs(previous), kTiny);
        if (gain < cfg.tol_outer && violation <= cfg.spacing_tol) break;
        mu = std::min(mu * cfg.penalty_growth, mu_cap);
    }
    return best;
}

std::uint64_t mix_seed_local(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Sequential uniform placement with rejection; empty when it gets stuck.
std::optional<Apv> random_feasible_apv(const PhysParams& phys, std::mt19937_64& rng) {
    const double L = phys.panel_half_side;
    Apv apv;
    for (int tries = 0; tries < 200 * phys.antenna_count; ++tries) {
        const Point2 p{(2.0 * uniform01(rng) - 1.0) * L, (2.0 * uniform01(rng) - 1.0) * L};
        bool ok = true;
        for (const auto& q : apv.points) ok = ok && distance(p, q) >= phys.min_spacing;
        if (!ok) continue;
        apv.points.push_back(p);
        if (static_cast<int>(apv.size()) == phys.antenna_count) return apv;
    }
    return std::nullopt;
}

}  // namespace

CandidateResult bcd_solve(const Scenario& scenario, int k, const SolverConfig& cfg) {
    cfg.validate();
    scenario.phys.validate();
    SinrEvaluator eval(link_geometry(scenario, k));
    const PhysParams& phys = scenario.phys;

    const bool movable = cfg.array_mode == ArrayMode::Movable;
    Design init;
    init.apv = movable ? upa_init_positions(phys.antenna_count, phys.panel_half_side)
                       : fpa_positions(phys.antenna_count, phys.wavelength);
    if (movable && init.apv.spacing_violation(phys.min_spacing) > cfg.spacing_tol)
        throw InfeasibleError("bcd_solve: initial UPA pitch is below the minimum antenna spacing");

    CandidateResult out;
    out.k = k;
    Design start = init;
    if (movable && cfg.position_restarts > 0) {
        // Short positions-only runs from the UPA, the lambda/2 fixed-array
        // layout and the best-scoring random layouts; the full first stage
        // resumes from the winner.
        std::vector<Apv> starts{init.apv};
        Apv compact = fpa_positions(phys.antenna_count, phys.wavelength);
        if (compact.inside_box(phys.panel_half_side) && compact.spacing_violation(phys.min_spacing) <= cfg.spacing_tol)
            starts.push_back(std::move(compact));
        std::mt19937_64 rng(mix_seed_local(static_cast<std::uint64_t>(k)));
        std::vector<std::pair<double, Apv>> pool;
        const int samples = std::max(cfg.position_samples, cfg.position_restarts);
        for (int s = 0; s < samples; ++s) {
            std::optional<Apv> apv = random_feasible_apv(phys, rng);
            if (!apv) continue;
            const double g = eval(*apv, Rotation{});
            pool.emplace_back(g, std::move(*apv));
        }
        const auto keep = static_cast<std::ptrdiff_t>(
            std::min(pool.size(), static_cast<std::size_t>(cfg.position_restarts)));
        std::partial_sort(pool.begin(), pool.begin() + keep, pool.end(),
                          [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::ptrdiff_t s = 0; s < keep; ++s) starts.push_back(std::move(pool[static_cast<std::size_t>(s)].second));

        SolverConfig brief = cfg;
        brief.max_outer = cfg.restart_max_outer;
        brief.max_pgd = cfg.restart_max_pgd;
        bool first = true;
        for (const Apv& apv : starts) {
            std::vector<TraceEntry> scratch;
            Design d = run_stage(eval, Design{apv, Rotation{}, 0.0}, true, false, 1, brief, scratch);
            if (first || d.gamma > start.gamma) start = std::move(d);
            first = false;
        }
    }
    out.fixed_arv = run_stage(eval, start, movable, false, 1, cfg, out.trace);
    out.final = cfg.optimize_rotation ? run_stage(eval, out.fixed_arv, movable, true, 2, cfg, out.trace)
                                      : out.fixed_arv;
    out.w = eval.weights(out.final.apv, out.final.arv).w;
    out.evaluations = eval.evaluations();
    return out;
}

std::vector<int> candidate_pool(const Scenario& scenario, int top_c_candidates) {
    std::vector<int> pool = scenario.draw.available;
    if (pool.empty()) throw ScenarioError("no available BS to associate with");
    auto dist = [&](int m) { return distance(scenario.uav, scenario.layout.bs_positions.at(static_cast<std::size_t>(m))); };
    std::stable_sort(pool.begin(), pool.end(), [&](int a, int b) {
        const double da = dist(a), db = dist(b);
        return da < db || (da == db && a < b);
    });
    if (top_c_candidates > 0 && static_cast<std::size_t>(top_c_candidates) < pool.size())
        pool.resize(static_cast<std::size_t>(top_c_candidates));
    return pool;
}

std::vector<CandidateResult> solve_candidates(const Scenario& scenario, const SolverConfig& cfg) {
    std::vector<CandidateResult> out;
    for (int k : candidate_pool(scenario, cfg.top_c_candidates)) out.push_back(bcd_solve(scenario, k, cfg));
    return out;
}

std::size_t argmax_candidate(const std::vector<CandidateResult>& results,
                             const std::function<double(const CandidateResult&)>& gamma_of) {
    if (results.empty()) throw ScenarioError("argmax_candidate: no candidates");
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const double gi = gamma_of(results[i]);
        const double gb = gamma_of(results[best]);
        if (gi > gb || (gi == gb && results[i].k < results[best].k)) best = i;
    }
    return best;
}

SolveResult to_solve_result(const CandidateResult& best, const std::vector<CandidateResult>& all) {
    SolveResult out;
    out.k_star = best.k;
    out.apv = best.final.apv;
    out.arv = best.final.arv;
    out.w = best.w;
    out.sinr_linear = best.final.gamma;
    out.trace = best.trace;
    for (const auto& c : all) out.candidates.emplace_back(c.k, c.final.gamma);
    return out;
}

SolveResult select_bs(const Scenario& scenario, const SolverConfig& cfg) {
    const std::vector<CandidateResult> all = solve_candidates(scenario, cfg);
    const std::size_t best = argmax_candidate(all, [](const CandidateResult& c) { return c.final.gamma; });
    return to_solve_result(all[best], all);
}

}  // namespace sixdma
