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

// Line-of-sight ground-to-air channel of a rotatable planar array whose
// elements can be repositioned inside a square panel.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "sixdma/geometry.hpp"
#include "sixdma/linalg.hpp"

namespace sixdma {

/// Wraps an angle into (-pi, pi].
double wrap_angle(double rad) noexcept;

/// Panel rotation about the local X', Y' and Z' axes, radians.
struct Rotation {
    double phi = 0.0;
    double psi = 0.0;
    double theta = 0.0;

    Rotation wrapped() const noexcept { return {wrap_angle(phi), wrap_angle(psi), wrap_angle(theta)}; }

    friend bool operator==(const Rotation&, const Rotation&) = default;
};

/// Antenna positions in panel coordinates, one point per element.
struct Apv {
    std::vector<Point2> points;

    std::size_t size() const noexcept { return points.size(); }

    /// Flattened [x1, y1, x2, y2, ...].
    std::vector<double> flatten() const;
    static Apv from_flat(std::span<const double> xy);

    /// True when every coordinate lies in [-half_side, half_side].
    bool inside_box(double half_side) const noexcept;
    double min_pairwise_distance() const noexcept;
    /// max(0, min_spacing - smallest pairwise distance).
    double spacing_violation(double min_spacing) const noexcept;

    friend bool operator==(const Apv&, const Apv&) = default;
};

/// Unit direction of arrival in panel coordinates.
struct WaveVector {
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;
};

using Mat3 = std::array<std::array<double, 3>, 3>;

struct PhysParams {
    double wavelength = 0.03;       // m
    double tx_power = 1.0;          // W
    double noise_power = 1.2589254117941714e-14;  // W (-109 dBm)
    double panel_half_side = 0.06;  // L, m
    double min_spacing = 0.015;     // L0, m
    int antenna_count = 4;          // N

    /// Throws InvalidArgument if a field is non-positive or N >= 2 cannot fit in the panel.
    void validate() const;
};

double dbm_to_watts(double dbm) noexcept;
double linear_to_db(double x) noexcept;

/// U(a) = R_x(phi) R_y(psi) R_z(theta).
Mat3 rotation_matrix(const Rotation& a) noexcept;

/// U(a)^T (p_u - p_m) / |p_u - p_m|. Throws DegenerateGeometryError when the points coincide.
WaveVector wave_vector(const Rotation& a, const Vec3& bs_pos, const Vec3& uav_pos);

/// exp(j 2 pi / lambda * (x_n alpha + y_n beta)) per element.
ComplexVector steering_vector(const Apv& apv, const WaveVector& v, double wavelength);

/// lambda / (4 pi d) * exp(-j 2 pi d / lambda) * g, with d = |p_u - p_m|.
ComplexVector channel_vector(const Vec3& bs_pos, const Vec3& uav_pos, std::span<const cplx> g,
                             double wavelength);

/// |w^H h_k|^2 P / (sum_i |w^H h_i|^2 P + |w|^2 sigma^2), linear.
double sinr(std::span<const cplx> w, std::span<const cplx> h_k, std::span<const ComplexVector> interferers,
            double tx_power, double noise_power);

}  // namespace sixdma
