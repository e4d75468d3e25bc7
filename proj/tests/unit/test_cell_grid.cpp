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

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "sixdma/cell_grid.hpp"
#include "sixdma/errors.hpp"

using namespace sixdma;

namespace {

// Tier sets by breadth-first search over BSs whose horizontal distance is one
// inter-site spacing, independent of the axial-coordinate metric.
BsSet bfs_tier(const CellLayout& l, int a, int b) {
    const double isd = std::sqrt(3.0) * l.cell_radius;
    std::vector<int> depth(static_cast<std::size_t>(l.size()), -1);
    std::queue<int> todo;
    depth[static_cast<std::size_t>(a)] = 0;
    todo.push(a);
    while (!todo.empty()) {
        const int u = todo.front();
        todo.pop();
        for (int v = 0; v < l.size(); ++v) {
            const auto& pu = l.bs_positions[static_cast<std::size_t>(u)];
            const auto& pv = l.bs_positions[static_cast<std::size_t>(v)];
            const double d = std::hypot(pu[0] - pv[0], pu[1] - pv[1]);
            if (depth[static_cast<std::size_t>(v)] < 0 && std::abs(d - isd) < 1e-6 * isd) {
                depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
                todo.push(v);
            }
        }
    }
    BsSet out;
    for (int m = 0; m < l.size(); ++m)
        if (depth[static_cast<std::size_t>(m)] >= 0 && depth[static_cast<std::size_t>(m)] <= b) out.push_back(m);
    return out;
}

int index_of(const CellLayout& l, HexCoord h) {
    const auto it = std::find(l.hex_coords.begin(), l.hex_coords.end(), h);
    REQUIRE(it != l.hex_coords.end());
    return static_cast<int>(it - l.hex_coords.begin());
}

}  // namespace

TEST_CASE("layout sizes follow 1 + 3q(q+1)") {
    for (int q = 0; q <= 6; ++q) CHECK(build_hex_layout(q, 100.0, 30.0).size() == 1 + 3 * q * (q + 1));
    CHECK(build_hex_layout(4, 100.0, 30.0).size() == 61);

    const CellLayout one = build_hex_layout(0, 100.0, 30.0);
    CHECK(one.bs_positions[0] == Vec3{0.0, 0.0, 30.0});
}

TEST_CASE("first ring sits one inter-site distance from the center") {
    const CellLayout l = build_hex_layout(1, 100.0, 30.0);
    REQUIRE(l.size() == 7);
    for (int m = 1; m < 7; ++m) {
        const auto& p = l.bs_positions[static_cast<std::size_t>(m)];
        CHECK(std::hypot(p[0], p[1]) == doctest::Approx(173.2050807568877).epsilon(1e-12));
        CHECK(p[2] == 30.0);
    }
}

TEST_CASE("layout sites are distinct and hex distance is a metric on them") {
    const CellLayout l = build_hex_layout(4, 100.0, 30.0);
    std::set<std::pair<int, int>> seen;
    for (const auto& h : l.hex_coords) seen.insert({h.aq, h.ar});
    CHECK(seen.size() == 61u);
    for (const auto& u : l.hex_coords) {
        CHECK(hex_distance(u, u) == 0);
        CHECK(hex_distance(u, HexCoord{}) <= 4);
        for (const auto& v : l.hex_coords) {
            CHECK(hex_distance(u, v) == hex_distance(v, u));
            for (int w = 0; w < 61; w += 7) CHECK(hex_distance(u, v) <= hex_distance(u, l.hex_coords[w]) + hex_distance(l.hex_coords[w], v));
        }
    }
}

TEST_CASE("tier sets agree with breadth-first expansion") {
    const CellLayout l = build_hex_layout(4, 100.0, 30.0);
    for (int a = 0; a < l.size(); ++a)
        for (int b = 0; b <= 4; ++b) CHECK(tier_set(l, a, b) == bfs_tier(l, a, b));

    CHECK(tier_set(l, 17, 0) == BsSet{17});
    CHECK(tier_set(l, 0, 1).size() == 7u);
    const int corner = index_of(l, {4, -4});
    CHECK(tier_set(l, corner, 1).size() == 4u);
    CHECK_THROWS_AS(tier_set(l, 61, 1), IndexError);
}

TEST_CASE("nearest BS and its tie-break") {
    const CellLayout l = build_hex_layout(4, 100.0, 30.0);
    CHECK(nearest_bs(l, {0.0, 0.0, 100.0}) == 0);
    const int ring2 = index_of(l, {2, -1});
    const auto& p = l.bs_positions[static_cast<std::size_t>(ring2)];
    CHECK(nearest_bs(l, {p[0], p[1], 100.0}) == ring2);

    const int east = index_of(l, {1, 0});
    const auto& pe = l.bs_positions[static_cast<std::size_t>(east)];
    REQUIRE(pe[1] == 0.0);
    // Halving is exact, so both distances are computed from identical operands.
    CHECK(nearest_bs(l, {0.5 * pe[0], 0.0, 100.0}) == std::min(0, east));
    const int other = index_of(l, {2, 0});
    const auto& po = l.bs_positions[static_cast<std::size_t>(other)];
    // The midpoint of two sites is only a tie if rounding leaves both distances equal.
    const Vec3 mid{0.5 * (pe[0] + po[0]), 0.0, 100.0};
    const double de = distance(mid, Vec3{pe[0], pe[1], 30.0});
    const double dot = distance(mid, Vec3{po[0], po[1], 30.0});
    CHECK(nearest_bs(l, mid) == (de == dot ? std::min(east, other) : (de < dot ? east : other)));
}

TEST_CASE("available set examples") {
    const CellLayout l = build_hex_layout(4, 100.0, 30.0);
    CHECK(available_bs(l, {}, 0, 4, 1).size() == 61u);
    CHECK(available_bs(l, {0}, 0, 4, 1).size() == 54u);
}

TEST_CASE("available set equals a brute-force filter") {
    const CellLayout l = build_hex_layout(4, 100.0, 30.0);
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        BsSet occ;
        for (int m = 0; m < 61; ++m)
            if (uniform01(rng) < 0.2) occ.push_back(m);
        const int c = static_cast<int>(uniform_index(rng, 61));
        const int q = static_cast<int>(uniform_index(rng, 5));
        const int e = static_cast<int>(uniform_index(rng, 3));
        BsSet expect;
        const BsSet zone = bfs_tier(l, c, q);
        for (int m : zone) {
            bool blocked = false;
            for (int i : occ) {
                const BsSet ti = bfs_tier(l, i, e);
                blocked = blocked || std::find(ti.begin(), ti.end(), m) != ti.end();
            }
            if (!blocked) expect.push_back(m);
        }
        const BsSet got = available_bs(l, occ, c, q, e);
        CHECK(got == expect);
        for (int i : occ) CHECK(std::find(got.begin(), got.end(), i) == got.end());
    }
}

TEST_CASE("occupancy draws") {
    const CellLayout l = build_hex_layout(4, 100.0, 30.0);
    const Vec3 uav{10.0, -20.0, 100.0};

    SUBCASE("J = 0 leaves the whole zone available") {
        std::mt19937_64 rng(1);
        const OccupancyDraw d = sample_occupancy(l, 0, 1, uav, rng);
        CHECK(d.occupied.empty());
        CHECK(d.available == tier_set(l, 0, 4));
        CHECK(d.nearest == 0);
    }
    SUBCASE("J = 1 removes the one-tier neighborhood") {
        std::mt19937_64 rng(2);
        const OccupancyDraw d = sample_occupancy(l, 1, 1, uav, rng);
        REQUIRE(d.occupied.size() == 1u);
        CHECK(d.available == available_bs(l, d.occupied, 0, 4, 1));
        for (int m : tier_set(l, d.occupied[0], 1))
            CHECK(std::find(d.available.begin(), d.available.end(), m) == d.available.end());
    }
    SUBCASE("J = 10 is feasible and ICIC-consistent across 200 seeds") {
        for (std::uint64_t s = 0; s < 200; ++s) {
            std::mt19937_64 rng(s);
            const OccupancyDraw d = sample_occupancy(l, 10, 1, uav, rng);
            CHECK(d.occupied.size() == 10u);
            CHECK(std::is_sorted(d.occupied.begin(), d.occupied.end()));
            CHECK(!d.available.empty());
            for (std::size_t i = 0; i < d.occupied.size(); ++i)
                for (std::size_t j = i + 1; j < d.occupied.size(); ++j)
                    CHECK(hex_distance(l.hex_coords[static_cast<std::size_t>(d.occupied[i])],
                                       l.hex_coords[static_cast<std::size_t>(d.occupied[j])]) > 1);
        }
    }
    SUBCASE("same seed, same draw") {
        std::mt19937_64 a(99), b(99);
        const OccupancyDraw da = sample_occupancy(l, 8, 1, uav, a);
        const OccupancyDraw db = sample_occupancy(l, 8, 1, uav, b);
        CHECK(da.occupied == db.occupied);
        CHECK(da.available == db.available);
    }
    SUBCASE("impossible J fails with a sampling error") {
        std::mt19937_64 rng(3);
        CHECK_THROWS_AS(sample_occupancy(l, 40, 1, uav, rng), SamplingError);
        CHECK_THROWS_AS(sample_occupancy(l, 62, 0, uav, rng), SamplingError);
    }
}

TEST_CASE("layout JSON export") {
    const auto j = nlohmann::json::parse(layout_to_json(build_hex_layout(1, 100.0, 30.0)));
    REQUIRE(j.size() == 7u);
    CHECK(j[0]["index"] == 0);
    CHECK(j[3]["z"] == 30.0);
    CHECK(j[3].contains("aq"));
}
