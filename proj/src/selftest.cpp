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

#include "sixdma/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "sixdma/beamforming.hpp"
#include "sixdma/channel.hpp"
#include "sixdma/harness.hpp"
#include "sixdma/optimizer.hpp"

namespace sixdma {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

Rotation random_rotation(std::mt19937_64& rng) {
    return {uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi)};
}

Vec3 random_bs(std::mt19937_64& rng) { return {uniform(rng, -800, 800), uniform(rng, -800, 800), 30.0}; }

Apv random_apv(std::mt19937_64& rng, int n, double half_side) {
    Apv apv;
    for (int i = 0; i < n; ++i) apv.points.push_back({uniform(rng, -half_side, half_side), uniform(rng, -half_side, half_side)});
    return apv;
}

CheckResult rotation_check(std::mt19937_64& rng) {
    double worst_orth = 0.0, worst_det = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const Mat3 u = rotation_matrix(random_rotation(rng));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int r = 0; r < 3; ++r) s += u[r][i] * u[r][j];
                worst_orth = std::max(worst_orth, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        const double det = u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1]) -
                           u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0]) +
                           u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]);
        worst_det = std::max(worst_det, std::abs(det - 1.0));
    }
    return {"rotation orthogonality and determinant", worst_orth <= 1e-12 && worst_det <= 1e-12,
            fmt("max |U^T U - I| = %.3g", worst_orth) + fmt(", max |det U - 1| = %.3g", worst_det)};
}

CheckResult wave_vector_check(std::mt19937_64& rng) {
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const WaveVector v = wave_vector(random_rotation(rng), random_bs(rng), {uniform(rng, -80, 80), uniform(rng, -80, 80), 100.0});
        worst = std::max(worst, std::abs(std::sqrt(v.alpha * v.alpha + v.beta * v.beta + v.delta * v.delta) - 1.0));
    }
    return {"wave vector normalization", worst <= 1e-12, fmt("max |norm - 1| = %.3g", worst)};
}

CheckResult steering_check(std::mt19937_64& rng) {
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const WaveVector v = wave_vector(random_rotation(rng), random_bs(rng), {0.0, 0.0, 100.0});
        for (const cplx& a : steering_vector(random_apv(rng, 8, 0.09), v, 0.03))
            worst = std::max(worst, std::abs(std::abs(a) - 1.0));
    }
    return {"steering vector unit modulus", worst <= 1e-12, fmt("max ||a_n| - 1| = %.3g", worst)};
}

ComplexVector random_cvec(std::mt19937_64& rng, int n) {
    ComplexVector v(static_cast<std::size_t>(n));
    for (auto& x : v) x = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
    return v;
}

CheckResult scaling_check(std::mt19937_64& rng) {
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(uniform_index(rng, 8));
        const ComplexVector hk = random_cvec(rng, n);
        std::vector<ComplexVector> hi;
        for (std::size_t j = uniform_index(rng, 6); j > 0; --j) hi.push_back(random_cvec(rng, n));
        const ComplexVector w = random_cvec(rng, n);
        const cplx c = std::polar(std::exp(uniform(rng, -5, 5)), uniform(rng, -kPi, kPi));
        ComplexVector cw = w;
        for (auto& x : cw) x *= c;
        const double s0 = sinr(w, hk, hi, 1.0, 0.1);
        const double s1 = sinr(cw, hk, hi, 1.0, 0.1);
        worst = std::max(worst, std::abs(s1 - s0) / std::max(std::abs(s0), 1e-300));
    }
    return {"SINR invariance to scaling of w", worst <= 1e-12, fmt("max relative change = %.3g", worst)};
}

Scenario random_scenario(std::uint64_t seed) {
    ScenarioParams p;
    p.J = 10;
    return make_scenario(p, seed);
}

CheckResult common_phase_check(std::mt19937_64& rng, std::uint64_t seed) {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Scenario sc = random_scenario(mix_seed(seed, 1000 + static_cast<std::uint64_t>(t)));
        const int k = sc.draw.available[uniform_index(rng, sc.draw.available.size())];
        const LinkGeometry link = link_geometry(sc, k);
        const Apv apv = random_apv(rng, sc.phys.antenna_count, sc.phys.panel_half_side);
        const Rotation a = random_rotation(rng);
        Apv shifted = apv;
        const Point2 off{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)};
        for (auto& p : shifted.points) {
            p.x += off.x;
            p.y += off.y;
        }
        const double g0 = objective_sinr(apv, a, link);
        const double g1 = objective_sinr(shifted, a, link);
        worst = std::max(worst, std::abs(g1 - g0) / std::max(g0, 1e-300));
    }
    return {"common-phase invariance of gamma_k", worst <= 1e-10, fmt("max relative change = %.3g", worst)};
}

CheckResult pgd_box_check(std::mt19937_64& rng, std::uint64_t seed) {
    SolverConfig cfg;
    bool ok = true;
    double worst = 0.0;
    for (int t = 0; t < 30; ++t) {
        const Scenario sc = random_scenario(mix_seed(seed, 2000 + static_cast<std::uint64_t>(t)));
        const int k = sc.draw.available[uniform_index(rng, sc.draw.available.size())];
        SinrEvaluator eval(link_geometry(sc, k));
        const double L = sc.phys.panel_half_side;
        const Apv start = random_apv(rng, sc.phys.antenna_count, L);
        AuxiliaryVector aux{random_apv(rng, sc.phys.antenna_count, L).points};
        const double mu = std::exp(uniform(rng, std::log(1e3), std::log(1e9)));
        const Apv x = pgd_apv(start, aux, random_rotation(rng), mu, L, cfg, eval);
        ok = ok && x.inside_box(L) && x.size() == start.size();
        for (const auto& p : x.points) worst = std::max({worst, std::abs(p.x) - L, std::abs(p.y) - L});
    }
    return {"PGD iterates stay inside the panel", ok, fmt("max excess over L = %.3g m", std::max(worst, 0.0))};
}

CheckResult dominance_check(std::uint64_t seed, int trials) {
    ScenarioParams p;
    p.J = 10;
    const std::vector<SchemeId> schemes{{Scheme::Proposed, false}, {Scheme::S1NearestBs, false},
                                        {Scheme::S2FixedArv, false}, {Scheme::S3NearestFixedArv, false}};
    const SolverConfig cfg;
    bool ok = true;
    double worst = 0.0;  // largest baseline excess over PROPOSED, linear
    for (int t = 0; t < trials; ++t) {
        const auto recs = run_trial_batch(p, SweepAxis::J, p.J, schemes, mix_seed(seed, 3000 + static_cast<std::uint64_t>(t)), cfg);
        for (std::size_t i = 1; i < recs.size(); ++i) {
            const double excess = recs[i].sinr_linear - recs[0].sinr_linear;
            worst = std::max(worst, excess);
            ok = ok && excess <= 1e-6;
        }
    }
    return {"PROPOSED dominates S1/S2/S3 per seed", ok,
            std::to_string(trials) + " trials, max baseline excess = " + fmt("%.3g", worst)};
}

}  // namespace

bool SelftestReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

SelftestReport run_selftest(std::uint64_t seed, int dominance_trials) {
    const auto t_all = Clock::now();
    std::mt19937_64 rng(seed);
    SelftestReport report;
    const std::vector<std::pair<const char*, std::function<CheckResult()>>> checks{
        {"rotation", [&] { return rotation_check(rng); }},
        {"wave vector", [&] { return wave_vector_check(rng); }},
        {"steering vector", [&] { return steering_check(rng); }},
        {"SINR scaling", [&] { return scaling_check(rng); }},
        {"common phase", [&] { return common_phase_check(rng, seed); }},
        {"PGD box", [&] { return pgd_box_check(rng, seed); }},
        {"scheme dominance", [&] { return dominance_check(seed, dominance_trials); }},
    };
    for (const auto& [name, run] : checks) {
        const auto t0 = Clock::now();
        CheckResult r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r = {name, false, std::string("exception: ") + e.what(), 0.0};
        }
        r.seconds = seconds_since(t0);
        report.checks.push_back(std::move(r));
    }
    report.seconds = seconds_since(t_all);
    const bool fast = report.seconds < 60.0;
    report.checks.push_back({"total runtime under 60 s", fast, fmt("%.2f s", report.seconds), 0.0});
    return report;
}

}  // namespace sixdma
