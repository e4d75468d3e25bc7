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

#include "sixdma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sixdma/errors.hpp"

namespace sixdma {

double wrap_angle(double rad) noexcept {
    if (rad > -kPi && rad <= kPi) return rad;
    double w = std::remainder(rad, 2.0 * kPi);  // [-pi, pi]
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

std::vector<double> Apv::flatten() const {
    std::vector<double> xy;
    xy.reserve(2 * points.size());
    for (const auto& p : points) {
        xy.push_back(p.x);
        xy.push_back(p.y);
    }
    return xy;
}

Apv Apv::from_flat(std::span<const double> xy) {
    if (xy.size() % 2 != 0) throw DimensionError("Apv::from_flat: odd coordinate count");
    Apv apv;
    apv.points.reserve(xy.size() / 2);
    for (std::size_t i = 0; i < xy.size(); i += 2) apv.points.push_back({xy[i], xy[i + 1]});
    return apv;
}

bool Apv::inside_box(double half_side) const noexcept {
    return std::all_of(points.begin(), points.end(), [&](const Point2& p) {
        return p.x >= -half_side && p.x <= half_side && p.y >= -half_side && p.y <= half_side;
    });
}

double Apv::min_pairwise_distance() const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) best = std::min(best, distance(points[i], points[j]));
    return best;
}

double Apv::spacing_violation(double min_spacing) const noexcept {
    if (points.size() < 2) return 0.0;
    return std::max(0.0, min_spacing - min_pairwise_distance());
}

void PhysParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string("PhysParams: ") + name + " must be positive");
    };
    positive(wavelength, "wavelength");
    positive(tx_power, "tx_power");
    positive(noise_power, "noise_power");
    positive(panel_half_side, "panel_half_side");
    positive(min_spacing, "min_spacing");
    if (antenna_count < 1) throw InvalidArgument("PhysParams: antenna_count must be at least 1");
    if (antenna_count >= 2 && !(min_spacing < 2.0 * std::sqrt(2.0) * panel_half_side))
        throw InvalidArgument("PhysParams: min_spacing does not fit two antennas in the panel");
}

double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double linear_to_db(double x) noexcept { return 10.0 * std::log10(x); }

Mat3 rotation_matrix(const Rotation& a) noexcept {
    const double cf = std::cos(a.phi), sf = std::sin(a.phi);
    const double cp = std::cos(a.psi), sp = std::sin(a.psi);
    const double ct = std::cos(a.theta), st = std::sin(a.theta);
    const Mat3 rx{{{1, 0, 0}, {0, cf, -sf}, {0, sf, cf}}};
    const Mat3 ry{{{cp, 0, sp}, {0, 1, 0}, {-sp, 0, cp}}};
    const Mat3 rz{{{ct, -st, 0}, {st, ct, 0}, {0, 0, 1}}};
    auto mul = [](const Mat3& l, const Mat3& r) {
        Mat3 o{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) o[i][j] = l[i][0] * r[0][j] + l[i][1] * r[1][j] + l[i][2] * r[2][j];
        return o;
    };
    return mul(mul(rx, ry), rz);
}

WaveVector wave_vector(const Rotation& a, const Vec3& bs_pos, const Vec3& uav_pos) {
    const Vec3 v = uav_pos - bs_pos;
    const Mat3 u = rotation_matrix(a);
    // Local-frame vector U^T v.
    Vec3 local{};
    for (int i = 0; i < 3; ++i) local[i] = u[0][i] * v[0] + u[1][i] * v[1] + u[2][i] * v[2];
    const double n = norm(local);
    if (!(n > 0.0)) throw DegenerateGeometryError("wave_vector: UAV and BS positions coincide");
    return {local[0] / n, local[1] / n, local[2] / n};
}

ComplexVector steering_vector(const Apv& apv, const WaveVector& v, double wavelength) {
    if (!(wavelength > 0.0)) throw InvalidArgument("steering_vector: wavelength must be positive");
    const double k = 2.0 * kPi / wavelength;
    ComplexVector g;
    g.reserve(apv.size());
    for (const auto& p : apv.points) g.push_back(std::polar(1.0, k * (p.x * v.alpha + p.y * v.beta)));
    return g;
}

ComplexVector channel_vector(const Vec3& bs_pos, const Vec3& uav_pos, std::span<const cplx> g,
                             double wavelength) {
    const double d = distance(uav_pos, bs_pos);
    if (!(d > 0.0)) throw DegenerateGeometryError("channel_vector: UAV and BS positions coincide");
    const cplx factor = std::polar(wavelength / (4.0 * kPi * d), -2.0 * kPi * d / wavelength);
    ComplexVector h;
    h.reserve(g.size());
    for (const auto& gn : g) h.push_back(factor * gn);
    return h;
}

double sinr(std::span<const cplx> w, std::span<const cplx> h_k, std::span<const ComplexVector> interferers,
            double tx_power, double noise_power) {
    const double wn = squared_norm(w);
    if (!(wn > 0.0)) throw InvalidArgument("sinr: beamformer must be non-zero");
    const double signal = std::norm(inner(w, h_k)) * tx_power;
    double interference = 0.0;
    for (const auto& h : interferers) interference += std::norm(inner(w, h)) * tx_power;
    return signal / (interference + wn * noise_power);
}

}  // namespace sixdma
