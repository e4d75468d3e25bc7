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

#include "sixdma/cell_grid.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "sixdma/errors.hpp"

namespace sixdma {

namespace {

constexpr std::array<HexCoord, 6> kHexDirections{
    HexCoord{1, 0}, HexCoord{1, -1}, HexCoord{0, -1}, HexCoord{-1, 0}, HexCoord{-1, 1}, HexCoord{0, 1}};

void check_index(const CellLayout& layout, int a, const char* what) {
    if (a < 0 || a >= layout.size())
        throw IndexError(std::string(what) + ": BS index " + std::to_string(a) + " outside layout of " +
                         std::to_string(layout.size()) + " BSs");
}

}  // namespace

int hex_distance(const HexCoord& u, const HexCoord& v) noexcept {
    const int dq = u.aq - v.aq;
    const int dr = u.ar - v.ar;
    return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

CellLayout build_hex_layout(int q, double cell_radius, double bs_height) {
    if (q < 0) throw InvalidArgument("build_hex_layout: q must be non-negative");
    if (!(cell_radius > 0.0)) throw InvalidArgument("build_hex_layout: cell_radius must be positive");

    CellLayout layout;
    layout.cell_radius = cell_radius;
    layout.bs_height = bs_height;
    layout.q = q;

    std::vector<HexCoord>& hex = layout.hex_coords;
    hex.reserve(static_cast<std::size_t>(1 + 3 * q * (q + 1)));
    hex.push_back({0, 0});
    for (int ring = 1; ring <= q; ++ring) {
        HexCoord h{kHexDirections[4].aq * ring, kHexDirections[4].ar * ring};
        for (const HexCoord& dir : kHexDirections) {
            for (int step = 0; step < ring; ++step) {
                hex.push_back(h);
                h.aq += dir.aq;
                h.ar += dir.ar;
            }
        }
    }

    // Pointy-top lattice: hex-adjacent sites are sqrt(3) * R apart.
    const double s3 = std::sqrt(3.0);
    layout.bs_positions.reserve(hex.size());
    for (const HexCoord& h : hex) {
        layout.bs_positions.push_back(
            {cell_radius * s3 * (h.aq + 0.5 * h.ar), cell_radius * 1.5 * h.ar, bs_height});
    }
    return layout;
}

BsSet tier_set(const CellLayout& layout, int a, int b) {
    check_index(layout, a, "tier_set");
    if (b < 0) throw InvalidArgument("tier_set: tier count must be non-negative");
    BsSet out;
    const HexCoord& center = layout.hex_coords[static_cast<std::size_t>(a)];
    for (int m = 0; m < layout.size(); ++m) {
        if (hex_distance(center, layout.hex_coords[static_cast<std::size_t>(m)]) <= b) out.push_back(m);
    }
    return out;
}

int nearest_bs(const CellLayout& layout, const Vec3& uav_pos) {
    if (layout.size() == 0) throw InvalidArgument("nearest_bs: empty layout");
    int best = 0;
    double best_d = distance(uav_pos, layout.bs_positions[0]);
    for (int m = 1; m < layout.size(); ++m) {
        const double d = distance(uav_pos, layout.bs_positions[static_cast<std::size_t>(m)]);
        if (d < best_d) {
            best_d = d;
            best = m;
        }
    }
    return best;
}

BsSet available_bs(const CellLayout& layout, const BsSet& occupied, int c, int q, int e) {
    check_index(layout, c, "available_bs");
    for (int i : occupied) check_index(layout, i, "available_bs");
    if (e < 0) throw InvalidArgument("available_bs: ICIC tier e must be non-negative");

    BsSet out;
    const HexCoord& hc = layout.hex_coords[static_cast<std::size_t>(c)];
    for (int m = 0; m < layout.size(); ++m) {
        const HexCoord& hm = layout.hex_coords[static_cast<std::size_t>(m)];
        if (hex_distance(hc, hm) > q) continue;
        const bool blocked = std::any_of(occupied.begin(), occupied.end(), [&](int i) {
            return hex_distance(layout.hex_coords[static_cast<std::size_t>(i)], hm) <= e;
        });
        if (!blocked) out.push_back(m);
    }
    return out;
}

double uniform01(std::mt19937_64& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) noexcept {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<u128>(rng()) * n) >> 64);
}

OccupancyDraw sample_occupancy(const CellLayout& layout, int J, int e, const Vec3& uav_pos,
                               std::mt19937_64& rng) {
    if (J < 0) throw InvalidArgument("sample_occupancy: J must be non-negative");
    if (J > layout.size())
        throw SamplingError("sample_occupancy: J = " + std::to_string(J) + " exceeds the " +
                            std::to_string(layout.size()) + " BSs of the layout");

    OccupancyDraw draw;
    draw.nearest = nearest_bs(layout, uav_pos);

    std::vector<int> eligible;
    for (int attempt = 0; attempt < kOccupancyRetryBudget; ++attempt) {
        eligible.resize(static_cast<std::size_t>(layout.size()));
        for (int m = 0; m < layout.size(); ++m) eligible[static_cast<std::size_t>(m)] = m;

        BsSet chosen;
        while (static_cast<int>(chosen.size()) < J && !eligible.empty()) {
            const int pick = eligible[uniform_index(rng, eligible.size())];
            chosen.push_back(pick);
            const HexCoord& hp = layout.hex_coords[static_cast<std::size_t>(pick)];
            std::erase_if(eligible, [&](int m) {
                return hex_distance(hp, layout.hex_coords[static_cast<std::size_t>(m)]) <= e;
            });
        }
        if (static_cast<int>(chosen.size()) < J) continue;

        std::sort(chosen.begin(), chosen.end());
        BsSet avail = available_bs(layout, chosen, draw.nearest, layout.q, e);
        if (avail.empty()) continue;

        draw.occupied = std::move(chosen);
        draw.available = std::move(avail);
        return draw;
    }
    throw SamplingError("sample_occupancy: no ICIC-consistent draw with non-empty available set after " +
                        std::to_string(kOccupancyRetryBudget) + " attempts (J = " + std::to_string(J) +
                        ", e = " + std::to_string(e) + ", q = " + std::to_string(layout.q) + ")");
}

std::string layout_to_json(const CellLayout& layout, int indent) {
    nlohmann::json arr = nlohmann::json::array();
    for (int m = 0; m < layout.size(); ++m) {
        const auto& p = layout.bs_positions[static_cast<std::size_t>(m)];
        const auto& h = layout.hex_coords[static_cast<std::size_t>(m)];
        arr.push_back({{"index", m}, {"x", p[0]}, {"y", p[1]}, {"z", p[2]}, {"aq", h.aq}, {"ar", h.ar}});
    }
    return arr.dump(indent);
}

}  // namespace sixdma
