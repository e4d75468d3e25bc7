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

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sixdma/cell_grid.hpp"
#include "sixdma/channel.hpp"
#include "sixdma/linalg.hpp"

namespace sixdma {

struct BeamformerResult {
    ComplexVector w;
    double sinr_linear = 0.0;
    // (I + P/sigma^2 sum h h^H)^{-1}; filled only on request.
    std::optional<ComplexMatrix> B;
};

/// MMSE receive weights w = (I_N + P/sigma^2 sum_{i in J u {k}} h_i h_i^H)^{-1} h_k
/// and the SINR they achieve. The inverse is never formed unless
/// `materialize_inverse` is set.
BeamformerResult mmse_weights(std::span<const cplx> h_k, std::span<const ComplexVector> interferers,
                              double tx_power, double noise_power, bool materialize_inverse = false);

/// One random draw: UAV position, BS layout, occupancy and the physical parameters.
struct Scenario {
    CellLayout layout;
    Vec3 uav{0.0, 0.0, 100.0};
    OccupancyDraw draw;
    PhysParams phys;
};

/// Positions relevant to one association choice k.
struct LinkGeometry {
    Vec3 uav{};
    Vec3 serving{};
    std::vector<Vec3> interferers;
    PhysParams phys;
};

/// Throws ScenarioError if k is not in the scenario's available set.
LinkGeometry link_geometry(const Scenario& scenario, int k);

/// gamma_k for the given array state: rebuilds every channel and runs mmse_weights.
double objective_sinr(const Apv& apv, const Rotation& a, const LinkGeometry& link);
double objective_sinr(const Apv& apv, const Rotation& a, int k, const Scenario& scenario);

/// Same value as objective_sinr, evaluated with reusable buffers and cached
/// wave vectors. Noise-normalized channels sqrt(P/sigma^2) h are used
/// internally, which leaves the ratio unchanged. Not thread-safe; each solver
/// owns its own instance.
class SinrEvaluator {
public:
    explicit SinrEvaluator(LinkGeometry link);

    double operator()(const Apv& apv, const Rotation& a);
    /// Flattened-coordinate overload used by the gradient code.
    double operator()(std::span<const double> xy, const Rotation& a);

    /// MMSE weights for the given state in physical (unnormalized) units.
    BeamformerResult weights(const Apv& apv, const Rotation& a) const;

    const LinkGeometry& link() const noexcept { return link_; }
    std::size_t evaluations() const noexcept { return evaluations_; }

private:
    void update_rotation(const Rotation& a);
    double evaluate(std::span<const double> xy);

    struct Source {
        Vec3 offset;        // p_u - p_m
        double amplitude;   // sqrt(P/sigma^2) * lambda / (4 pi d)
        double phase;       // -2 pi d / lambda
        double alpha = 0.0;
        double beta = 0.0;
    };

    LinkGeometry link_;
    std::vector<Source> sources_;  // serving BS first
    std::optional<Rotation> cached_rotation_;
    double wavenumber_;
    std::size_t evaluations_ = 0;

    std::vector<cplx> h_;  // sources x N
    ComplexMatrix a_;
    std::vector<cplx> w_;
};

}  // namespace sixdma
