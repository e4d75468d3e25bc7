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

#include <doctest.h>

#include <cmath>
#include <random>

#include "../common/oracles.hpp"
#include "sixdma/array_layouts.hpp"
#include "sixdma/errors.hpp"
#include "sixdma/harness.hpp"
#include "sixdma/optimizer.hpp"

using namespace sixdma;

namespace {

Scenario scenario_with(int J, std::uint64_t seed, int N = 4) {
    ScenarioParams p;
    p.J = J;
    p.N = N;
    return make_scenario(p, seed);
}

Apv random_apv(std::mt19937_64& rng, int n, double L) {
    std::uniform_real_distribution<double> u(-L, L);
    Apv apv;
    for (int i = 0; i < n; ++i) apv.points.push_back({u(rng), u(rng)});
    return apv;
}

// Pairwise-feasible random points by rejection.
std::vector<Point2> spread_points(std::mt19937_64& rng, int n, double l0, double L) {
    std::uniform_real_distribution<double> u(-L, L);
    std::vector<Point2> pts;
    while (static_cast<int>(pts.size()) < n) {
        const Point2 p{u(rng), u(rng)};
        bool ok = true;
        for (const auto& q : pts) ok = ok && distance(p, q) >= l0;
        if (ok) pts.push_back(p);
    }
    return pts;
}

double sq(double x) { return x * x; }

SolverConfig quick_config() {
    SolverConfig c;
    c.position_restarts = 2;
    c.position_samples = 50;
    return c;
}

}  // namespace

TEST_CASE("penalty") {
    const Apv apv{{{0.01, 0.0}}};
    const AuxiliaryVector aux{{{0.0, 0.0}}};
    CHECK(penalty(apv, aux, 100.0) == doctest::Approx(0.01));
    CHECK(penalty(apv, aux, 200.0) == doctest::Approx(0.02));
    CHECK(penalty(apv, AuxiliaryVector{apv.points}, 1e9) == 0.0);
    CHECK_THROWS_AS(penalty(apv, AuxiliaryVector{}, 1.0), DimensionError);
}

TEST_CASE("penalized objective composes SINR and penalty") {
    const Scenario sc = scenario_with(10, 3);
    const int k = sc.draw.available.front();
    const Apv apv{{{0.01, 0.02}, {-0.03, 0.0}, {0.05, -0.05}, {0.0, 0.06}}};
    AuxiliaryVector aux{apv.points};
    const Rotation a{0.1, 0.2, 0.3};
    const double g = objective_sinr(apv, a, k, sc);
    CHECK(penalized_objective(apv, aux, a, k, 1e6, sc) == doctest::Approx(-g));
    aux.points[1].x += 0.004;
    const double f1 = penalized_objective(apv, aux, a, k, 1e6, sc);
    CHECK(f1 == doctest::Approx(-g + penalty(apv, aux, 1e6)).epsilon(1e-14));
    CHECK(penalized_objective(apv, aux, a, k, 2e6, sc) > f1);
}

TEST_CASE("numerical gradient") {
    auto bowl = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
    const std::vector<double> x{1.0, 2.0};
    const auto g = numerical_gradient(bowl, x, 1e-6);
    CHECK(std::abs(g[0] - 2.0) < 1e-6);
    CHECK(std::abs(g[1] - 4.0) < 1e-6);

    auto flat = [](std::span<const double>) { return 3.0; };
    for (double gi : numerical_gradient(flat, x, 1e-6)) CHECK(gi == 0.0);
}

TEST_CASE("numerical gradient of the penalized objective is step-size consistent") {
    const Scenario sc = scenario_with(10, 4);
    const int k = sc.draw.available.front();
    SinrEvaluator eval(link_geometry(sc, k));
    std::mt19937_64 rng(51);
    const Apv aux = random_apv(rng, 4, 0.06);
    const std::vector<double> r = aux.flatten();
    auto f = [&](std::span<const double> xy) {
        double pen = 0.0;
        for (std::size_t i = 0; i < xy.size(); ++i) pen += sq(xy[i] - r[i]);
        return -eval(xy, Rotation{0.2, -0.1, 0.4}) + 1e5 * pen;
    };
    for (int t = 0; t < 10; ++t) {
        const std::vector<double> x = random_apv(rng, 4, 0.06).flatten();
        const auto g1 = numerical_gradient(f, x, 1e-6);
        const auto g2 = numerical_gradient(f, x, 5e-7);
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            scale = std::max(scale, std::abs(g1[i]));
            diff = std::max(diff, std::abs(g1[i] - g2[i]));
        }
        CHECK(diff <= 1e-5 * scale);
    }
}

TEST_CASE("box projection") {
    const std::vector<double> inside{0.01, -0.02, 0.0};
    CHECK(project_box(inside, 0.06) == inside);
    const auto out = project_box(std::vector<double>{0.09, -0.12, 0.06}, 0.06);
    CHECK(out == std::vector<double>{0.06, -0.06, 0.06});
}

TEST_CASE("backtracking line search") {
    SolverConfig cfg;
    auto f = [](std::span<const double> x) { return x[0] * x[0]; };
    auto none = [](std::span<double>) {};
    std::vector<double> trial;

    const std::vector<double> x{1.0}, g{2.0}, d{-2.0};
    const StepResult s = backtracking_step(f, x, 1.0, d, g, 10.0, cfg, none, trial);
    // 10, 5, 2.5 and 1.25 all overshoot; 0.625 lands at x = -0.25.
    CHECK(s.alpha == 0.625);
    CHECK(trial[0] == -0.25);
    CHECK(s.value == 0.0625);
    CHECK(s.value <= 1.0 + cfg.armijo_c * s.alpha * (-4.0));

    const std::vector<double> zero{0.0}, g0{0.0}, d0{-0.0};
    const StepResult stall = backtracking_step(f, zero, 0.0, d0, g0, 1.0, cfg, none, trial);
    CHECK(stall.alpha == 0.0);
    CHECK(stall.value == 0.0);
}

TEST_CASE("aux point: unconstrained and single-circle cases") {
    const double l0 = 0.015;
    const std::vector<Point2> far{{0.05, 0.05}};
    const Point2 x{0.0, 0.0};
    CHECK(solve_aux_point(x, far, l0) == x);

    const std::vector<Point2> one{{0.0, 0.0}};
    const Point2 near{0.006, 0.0045};  // 0.0075 = L0 / 2 from the other point
    const Point2 r = solve_aux_point(near, one, l0, 0.06);
    CHECK(distance(r, one[0]) == doctest::Approx(l0).epsilon(1e-12));
    CHECK(r.x / r.y == doctest::Approx(near.x / near.y).epsilon(1e-12));
}

TEST_CASE("aux point: boxed and unboxed answers versus a grid search") {
    std::mt19937_64 rng(52);
    const double l0 = 0.015, L = 0.03;
    const int half = 200;
    const double step = L / half;
    for (int t = 0; t < 30; ++t) {
        const int n_others = 1 + static_cast<int>(uniform_index(rng, 4));
        const auto others = spread_points(rng, n_others, l0, L);
        std::uniform_real_distribution<double> u(-L, L);
        const Point2 x{u(rng), u(rng)};
        std::vector<std::pair<double, double>> o;
        for (const auto& p : others) o.emplace_back(p.x, p.y);
        const double grid = oracle::grid_aux_objective(x.x, x.y, o, l0, L, half);
        const Point2 r = solve_aux_point(x, others, l0, L);
        CHECK(std::abs(r.x) <= L);
        CHECK(std::abs(r.y) <= L);
        for (const auto& p : others) CHECK(distance(r, p) >= l0 * (1.0 - 1e-9));
        CHECK(squared_distance(r, x) <= grid + 2.0 * step * step);
    }
}

TEST_CASE("aux point: no feasible position") {
    const std::vector<Point2> others{{-0.01, -0.01}, {0.01, -0.01}, {-0.01, 0.01}, {0.01, 0.01}};
    CHECK_THROWS_AS(solve_aux_point({0.0, 0.0}, others, 0.015, 0.01), InfeasibleError);
    CHECK_THROWS_AS(solve_aux_point({0.0, 0.0}, others, 0.0, 0.01), InvalidArgument);
}

TEST_CASE("auxiliary vector update") {
    SolverConfig cfg;
    const double l0 = 0.015, L = 0.06;

    const Apv spread{{{-0.05, -0.05}, {0.05, 0.05}, {0.0, 0.0}}};
    const AuxiliaryVector fixed = optimize_aux(spread, AuxiliaryVector{spread.points}, l0, L, cfg);
    CHECK(fixed.points == spread.points);

    const Apv stacked{{{0.01, 0.02}, {0.01, 0.02}}};
    const AuxiliaryVector split = optimize_aux(stacked, AuxiliaryVector{stacked.points}, l0, L, cfg);
    CHECK(distance(split.points[0], split.points[1]) >= l0 * (1.0 - 1e-12));
    const Point2 mid{0.5 * (split.points[0].x + split.points[1].x), 0.5 * (split.points[0].y + split.points[1].y)};
    CHECK(distance(mid, stacked.points[0]) <= 0.5 * l0 * (1.0 + 1e-12));

    std::mt19937_64 rng(53);
    for (int t = 0; t < 100; ++t) {
        const Apv x = random_apv(rng, 5, L);
        const AuxiliaryVector start{spread_points(rng, 5, l0, L)};
        const AuxiliaryVector r = optimize_aux(x, start, l0, L, cfg);
        CHECK(r.as_apv().spacing_violation(l0) <= 1e-12);
        CHECK(r.as_apv().inside_box(L));
        CHECK(penalty(x, r, 1.0) <= penalty(x, start, 1.0));
    }
}

TEST_CASE("PGD never increases the penalized objective and stays in the box") {
    SolverConfig cfg;
    for (std::uint64_t s = 0; s < 100; ++s) {
        std::mt19937_64 rng(s);
        const Scenario sc = scenario_with(10, 500 + s);
        const int k = sc.draw.available[uniform_index(rng, sc.draw.available.size())];
        SinrEvaluator eval(link_geometry(sc, k));
        const double L = sc.phys.panel_half_side;
        const Apv start = random_apv(rng, 4, L);
        const AuxiliaryVector aux{spread_points(rng, 4, sc.phys.min_spacing, L)};
        const double mu = 10.0 * eval(start, {}) / sq(sc.phys.min_spacing);
        const Rotation a{0.1, 0.0, -0.2};
        auto f = [&](const Apv& x) { return -eval(x, a) + penalty(x, aux, mu); };
        const Apv out = pgd_apv(start, aux, a, mu, L, cfg, eval);
        CHECK(out.inside_box(L));
        CHECK(f(out) <= f(start));
    }
}

TEST_CASE("PGD with a single antenna and no interference stays put in value") {
    ScenarioParams p;
    p.J = 0;
    p.N = 1;
    const Scenario sc = make_scenario(p, 9);
    SinrEvaluator eval(link_geometry(sc, 0));
    const Apv start{{{0.01, -0.02}}};
    const double g0 = eval(start, {});
    const Apv out = pgd_apv(start, AuxiliaryVector{start.points}, {}, 1.0, sc.phys.panel_half_side, SolverConfig{}, eval);
    CHECK(out.inside_box(sc.phys.panel_half_side));
    CHECK(eval(out, {}) == doctest::Approx(g0).epsilon(1e-12));
}

TEST_CASE("rotation search never loses SINR") {
    SolverConfig cfg;
    for (std::uint64_t s = 0; s < 100; ++s) {
        std::mt19937_64 rng(1000 + s);
        const Scenario sc = scenario_with(10, 700 + s);
        const int k = sc.draw.available[uniform_index(rng, sc.draw.available.size())];
        SinrEvaluator eval(link_geometry(sc, k));
        const Apv apv{spread_points(rng, 4, sc.phys.min_spacing, sc.phys.panel_half_side)};
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        const Rotation a0{ang(rng), ang(rng), ang(rng)};
        const double g0 = eval(apv, a0);
        const Rotation a = gd_arv(a0, apv, cfg, eval);
        CHECK(eval(apv, a) >= g0 * (1.0 - 1e-12));
        for (double v : {a.phi, a.psi, a.theta}) {
            CHECK(v > -kPi);
            CHECK(v <= kPi);
        }
    }

    ScenarioParams p;
    p.J = 0;
    const Scenario sc = make_scenario(p, 3);
    SinrEvaluator eval(link_geometry(sc, 0));
    const Apv colocated{{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}};
    const double g0 = eval(colocated, {});
    CHECK(eval(colocated, gd_arv({}, colocated, cfg, eval)) == doctest::Approx(g0).epsilon(1e-12));
}

TEST_CASE("full solve without interference reaches the closed form") {
    const Scenario sc = scenario_with(0, 12);
    const SolverConfig cfg = quick_config();
    for (int k : {0, 5, 30}) {
        const CandidateResult r = bcd_solve(sc, k, cfg);
        const double d = distance(sc.uav, sc.layout.bs_positions[static_cast<std::size_t>(k)]);
        const double amp = sc.phys.wavelength / (4.0 * kPi * d);
        const double expect = sc.phys.tx_power * sc.phys.antenna_count * amp * amp / sc.phys.noise_power;
        CHECK(std::abs(r.final.gamma - expect) <= 0.01 * expect);
    }
}

TEST_CASE("full solve: monotone trace, feasible result, stage ordering") {
    const SolverConfig cfg = quick_config();
    for (std::uint64_t s = 0; s < 8; ++s) {
        const Scenario sc = scenario_with(10, 900 + s);
        const int k = sc.draw.available[s % sc.draw.available.size()];
        const CandidateResult r = bcd_solve(sc, k, cfg);
        REQUIRE(!r.trace.empty());
        for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].gamma >= r.trace[i - 1].gamma);
        CHECK(r.trace.back().gamma == r.final.gamma);
        CHECK(r.final.gamma >= r.fixed_arv.gamma);
        CHECK(r.fixed_arv.arv == Rotation{});
        for (const Design* d : {&r.final, &r.fixed_arv}) {
            CHECK(d->apv.size() == 4u);
            CHECK(d->apv.inside_box(sc.phys.panel_half_side));
            CHECK(d->apv.min_pairwise_distance() >= sc.phys.min_spacing - 1e-6);
            CHECK(objective_sinr(d->apv, d->arv, k, sc) == doctest::Approx(d->gamma).epsilon(1e-9));
        }
        CHECK(r.w.size() == 4u);
    }
}

TEST_CASE("fixed array keeps its positions") {
    SolverConfig cfg = quick_config();
    cfg.array_mode = ArrayMode::Fixed;
    const Scenario sc = scenario_with(10, 77);
    const CandidateResult r = bcd_solve(sc, sc.draw.available.front(), cfg);
    const Apv fpa = fpa_positions(4, sc.phys.wavelength);
    CHECK(r.final.apv == fpa);
    CHECK(r.fixed_arv.apv == fpa);

    cfg.optimize_rotation = false;
    const CandidateResult flat = bcd_solve(sc, sc.draw.available.front(), cfg);
    CHECK(flat.final.arv == Rotation{});
    CHECK(flat.trace.size() == 1u);
}

TEST_CASE("solves are deterministic") {
    const SolverConfig cfg = quick_config();
    const Scenario sc = scenario_with(10, 31);
    const int k = sc.draw.available.back();
    const CandidateResult a = bcd_solve(sc, k, cfg);
    const CandidateResult b = bcd_solve(sc, k, cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].gamma == b.trace[i].gamma);
        CHECK(a.trace[i].penalty == b.trace[i].penalty);
    }
    CHECK(a.final.apv == b.final.apv);
}

TEST_CASE("BS selection") {
    SolverConfig cfg = quick_config();
    cfg.position_restarts = 0;
    const Scenario sc = scenario_with(0, 44);
    const SolveResult r = select_bs(sc, cfg);
    CHECK(r.k_star == sc.draw.nearest);
    for (const auto& [k, g] : r.candidates) CHECK(r.sinr_linear >= g);
    CHECK(r.candidates.size() == sc.draw.available.size());

    const Scenario busy = scenario_with(10, 45);
    const std::vector<int> pool = candidate_pool(busy, 3);
    CHECK(pool.size() == 3u);
    for (std::size_t i = 1; i < pool.size(); ++i)
        CHECK(distance(busy.uav, busy.layout.bs_positions[static_cast<std::size_t>(pool[i - 1])]) <=
              distance(busy.uav, busy.layout.bs_positions[static_cast<std::size_t>(pool[i])]));
    cfg.top_c_candidates = 3;
    const SolveResult top = select_bs(busy, cfg);
    CHECK(top.candidates.size() == 3u);
    for (const auto& [k, g] : top.candidates) CHECK(top.sinr_linear >= g);
}

TEST_CASE("solver configuration validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.armijo_c = 1.5;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = SolverConfig{};
    c.backtrack_shrink = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = SolverConfig{};
    c.position_samples = -1;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}
