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

// Hexagonal base-station layout, tier neighborhoods and ICIC occupancy.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sixdma/geometry.hpp"

namespace sixdma {

/// Axial coordinates on the hexagonal lattice.
struct HexCoord {
    int aq = 0;
    int ar = 0;

    friend bool operator==(const HexCoord&, const HexCoord&) = default;
};

/// Lattice distance (|dq| + |dr| + |dq + dr|) / 2; the ring index between two cells.
int hex_distance(const HexCoord& u, const HexCoord& v) noexcept;

/// BS index set of a q-tier interfering zone. Index 0 is the central BS at the
/// horizontal origin; rings follow in increasing order.
struct CellLayout {
    std::vector<Vec3> bs_positions;
    std::vector<HexCoord> hex_coords;
    double cell_radius = 0.0;  // hexagon circumradius, m
    double bs_height = 0.0;    // m
    int q = 0;

    int size() const noexcept { return static_cast<int>(bs_positions.size()); }
};

/// Sorted BS indices.
using BsSet = std::vector<int>;

struct OccupancyDraw {
    BsSet occupied;   // BSs serving a co-channel terrestrial user
    BsSet available;  // candidates for UAV association
    int nearest = 0;  // BS nearest to the UAV
};

/// Lays out 1 + 3q(q+1) BSs on concentric hex rings with inter-site distance sqrt(3) * cell_radius.
CellLayout build_hex_layout(int q, double cell_radius, double bs_height);

/// All BSs within hex distance b of BS a, including a itself.
BsSet tier_set(const CellLayout& layout, int a, int b);

/// Index of the BS nearest (Euclidean) to the UAV; ties go to the lowest index.
int nearest_bs(const CellLayout& layout, const Vec3& uav_pos);

/// T_c(q) minus the e-tier neighborhoods of every occupied BS.
BsSet available_bs(const CellLayout& layout, const BsSet& occupied, int c, int q, int e);

inline constexpr int kOccupancyRetryBudget = 1000;

/// Draws J occupied BSs with pairwise hex distance > e and a non-empty
/// available set. Each attempt picks BSs one at a time, uniformly among those
/// still compatible with the ones already chosen; an attempt that gets stuck
/// or leaves no available BS is discarded. Throws SamplingError after
/// kOccupancyRetryBudget failed attempts.
OccupancyDraw sample_occupancy(const CellLayout& layout, int J, int e, const Vec3& uav_pos,
                               std::mt19937_64& rng);

/// Layout as a JSON array of {index, x, y, z, aq, ar}.
std::string layout_to_json(const CellLayout& layout, int indent = 2);

// Deterministic helpers over a 64-bit engine, independent of the standard
// library's distribution implementations.
double uniform01(std::mt19937_64& rng) noexcept;
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) noexcept;

}  // namespace sixdma
