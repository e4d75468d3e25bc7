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

#include "sixdma/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sixdma/errors.hpp"

namespace sixdma {

BeamformerResult mmse_weights(std::span<const cplx> h_k, std::span<const ComplexVector> interferers,
                              double tx_power, double noise_power, bool materialize_inverse) {
    if (!(noise_power > 0.0)) throw InvalidArgument("mmse_weights: noise power must be positive");
    if (!(tx_power > 0.0)) throw InvalidArgument("mmse_weights: transmit power must be positive");
    const std::size_t n = h_k.size();
    const double rho = tx_power / noise_power;

    ComplexMatrix a = ComplexMatrix::identity(n);
    for (const auto& h : interferers) add_hermitian_rank1(a, h, rho);
    add_hermitian_rank1(a, h_k, rho);

    BeamformerResult out;
    out.w = solve_hpd(a, h_k);
    out.sinr_linear = sinr(out.w, h_k, interferers, tx_power, noise_power);
    if (materialize_inverse) out.B = inverse_hpd(a);
    return out;
}

LinkGeometry link_geometry(const Scenario& scenario, int k) {
    const auto& avail = scenario.draw.available;
    if (!std::binary_search(avail.begin(), avail.end(), k))
        throw ScenarioError("BS " + std::to_string(k) + " is not in the available set");
    LinkGeometry link;
    link.uav = scenario.uav;
    link.serving = scenario.layout.bs_positions.at(static_cast<std::size_t>(k));
    for (int i : scenario.draw.occupied) link.interferers.push_back(scenario.layout.bs_positions.at(static_cast<std::size_t>(i)));
    link.phys = scenario.phys;
    return link;
}

double objective_sinr(const Apv& apv, const Rotation& a, const LinkGeometry& link) {
    const double lambda = link.phys.wavelength;
    auto channel = [&](const Vec3& bs) {
        return channel_vector(bs, link.uav, steering_vector(apv, wave_vector(a, bs, link.uav), lambda), lambda);
    };
    const ComplexVector h_k = channel(link.serving);
    std::vector<ComplexVector> interferers;
    interferers.reserve(link.interferers.size());
    for (const auto& p : link.interferers) interferers.push_back(channel(p));
    return mmse_weights(h_k, interferers, link.phys.tx_power, link.phys.noise_power).sinr_linear;
}

double objective_sinr(const Apv& apv, const Rotation& a, int k, const Scenario& scenario) {
    return objective_sinr(apv, a, link_geometry(scenario, k));
}

SinrEvaluator::SinrEvaluator(LinkGeometry link)
    : link_(std::move(link)), wavenumber_(2.0 * kPi / link_.phys.wavelength) {
    link_.phys.validate();
    const double lambda = link_.phys.wavelength;
    const double scale = std::sqrt(link_.phys.tx_power / link_.phys.noise_power);
    auto add = [&](const Vec3& bs) {
        const Vec3 off = link_.uav - bs;
        const double d = norm(off);
        if (!(d > 0.0)) throw DegenerateGeometryError("SinrEvaluator: UAV and BS positions coincide");
        sources_.push_back({off, scale * lambda / (4.0 * kPi * d), -2.0 * kPi * d / lambda});
    };
    add(link_.serving);
    for (const auto& p : link_.interferers) add(p);
}

void SinrEvaluator::update_rotation(const Rotation& a) {
    if (cached_rotation_ && *cached_rotation_ == a) return;
    const Mat3 u = rotation_matrix(a);
    for (auto& s : sources_) {
        const Vec3& v = s.offset;
        double local[3];
        for (int i = 0; i < 3; ++i) local[i] = u[0][i] * v[0] + u[1][i] * v[1] + u[2][i] * v[2];
        const double n = std::sqrt(local[0] * local[0] + local[1] * local[1] + local[2] * local[2]);
        s.alpha = local[0] / n;
        s.beta = local[1] / n;
    }
    cached_rotation_ = a;
}

double SinrEvaluator::operator()(const Apv& apv, const Rotation& a) {
    update_rotation(a);
    const auto xy = apv.flatten();
    return evaluate(xy);
}

double SinrEvaluator::operator()(std::span<const double> xy, const Rotation& a) {
    update_rotation(a);
    return evaluate(xy);
}

double SinrEvaluator::evaluate(std::span<const double> xy) {
    ++evaluations_;
    const std::size_t n = xy.size() / 2;
    const std::size_t m = sources_.size();
    h_.resize(m * n);
    for (std::size_t s = 0; s < m; ++s) {
        const Source& src = sources_[s];
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = wavenumber_ * (xy[2 * i] * src.alpha + xy[2 * i + 1] * src.beta) + src.phase;
            h_[s * n + i] = cplx{src.amplitude * std::cos(ph), src.amplitude * std::sin(ph)};
        }
    }

    a_.set_identity(n);
    for (std::size_t s = 0; s < m; ++s) add_hermitian_rank1(a_, std::span<const cplx>(h_.data() + s * n, n), 1.0);

    const std::span<const cplx> hk(h_.data(), n);
    w_.assign(hk.begin(), hk.end());
    solve_hpd_inplace(a_, w_);

    const double signal = std::norm(inner(w_, hk));
    double denom = squared_norm(w_);
    for (std::size_t s = 1; s < m; ++s) denom += std::norm(inner(w_, std::span<const cplx>(h_.data() + s * n, n)));
    return signal / denom;
}

BeamformerResult SinrEvaluator::weights(const Apv& apv, const Rotation& a) const {
    const double lambda = link_.phys.wavelength;
    auto channel = [&](const Vec3& bs) {
        return channel_vector(bs, link_.uav, steering_vector(apv, wave_vector(a, bs, link_.uav), lambda), lambda);
    };
    const ComplexVector h_k = channel(link_.serving);
    std::vector<ComplexVector> interferers;
    for (const auto& p : link_.interferers) interferers.push_back(channel(p));
    return mmse_weights(h_k, interferers, link_.phys.tx_power, link_.phys.noise_power);
}

}  // namespace sixdma
