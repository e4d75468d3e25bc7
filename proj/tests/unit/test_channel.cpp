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

#include "sixdma/channel.hpp"
#include "sixdma/errors.hpp"

using namespace sixdma;

namespace {

Vec3 apply(const Mat3& u, const Vec3& v) {
    Vec3 o{};
    for (int i = 0; i < 3; ++i) o[i] = u[i][0] * v[0] + u[i][1] * v[1] + u[i][2] * v[2];
    return o;
}

}  // namespace

TEST_CASE("angle wrapping into (-pi, pi]") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
    CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + 2.0 * kPi));
}

TEST_CASE("rotation matrix examples") {
    const Mat3 id = rotation_matrix({});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id[i][j] == (i == j ? 1.0 : 0.0));

    const Vec3 img = apply(rotation_matrix({kPi / 2.0, 0.0, 0.0}), {0.0, 1.0, 0.0});
    CHECK(img[0] == doctest::Approx(0.0));
    CHECK(std::abs(img[1]) < 1e-15);
    CHECK(img[2] == doctest::Approx(1.0));
}

TEST_CASE("rotation matrices are proper rotations") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int t = 0; t < 1000; ++t) {
        const Mat3 u = rotation_matrix({ang(rng), ang(rng), ang(rng)});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int r = 0; r < 3; ++r) s += u[r][i] * u[r][j];
                CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-12);
            }
        const double det = u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1]) -
                           u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0]) +
                           u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]);
        CHECK(std::abs(det - 1.0) <= 1e-12);
    }
}

TEST_CASE("wave vectors") {
    const WaveVector up = wave_vector({}, {5.0, -3.0, 30.0}, {5.0, -3.0, 100.0});
    CHECK(up.alpha == 0.0);
    CHECK(up.beta == 0.0);
    CHECK(up.delta == 1.0);

    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> ang(-kPi, kPi), pos(-500.0, 500.0);
    for (int t = 0; t < 500; ++t) {
        const Vec3 bs{pos(rng), pos(rng), 30.0};
        const Vec3 uav{pos(rng), pos(rng), 100.0};
        const WaveVector flat = wave_vector({}, bs, uav);
        const double th = ang(rng);
        // A pure yaw leaves the normal component alone.
        CHECK(wave_vector({0.0, 0.0, th}, bs, uav).delta == doctest::Approx(flat.delta).epsilon(1e-12));
        const WaveVector v = wave_vector({ang(rng), ang(rng), ang(rng)}, bs, uav);
        CHECK(std::abs(std::sqrt(v.alpha * v.alpha + v.beta * v.beta + v.delta * v.delta) - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(wave_vector({}, {1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}), DegenerateGeometryError);
}

TEST_CASE("steering vectors") {
    const ComplexVector ones = steering_vector(Apv{{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}}, {0.3, -0.4, 0.866}, 0.03);
    for (const cplx& a : ones) CHECK(a == cplx(1.0, 0.0));

    const ComplexVector q = steering_vector(Apv{{{0.0, 0.0}, {0.0075, 0.0}}}, {1.0, 0.0, 0.0}, 0.03);
    CHECK(std::abs(q[0] - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(q[1] - cplx(0.0, 1.0)) < 1e-15);

    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> x(-0.2, 0.2), c(-1.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        Apv apv;
        for (int n = 0; n < 8; ++n) apv.points.push_back({x(rng), x(rng)});
        for (const cplx& a : steering_vector(apv, {c(rng), c(rng), 0.1}, 0.03)) CHECK(std::abs(std::abs(a) - 1.0) <= 1e-12);
    }
}

TEST_CASE("channel vectors follow the free-space law") {
    const ComplexVector g(3, cplx(1.0, 0.0));
    const ComplexVector h = channel_vector({0.0, 0.0, 0.0}, {0.0, 0.0, 100.0}, g, 0.03);
    for (const cplx& e : h) {
        CHECK(std::abs(e) == doctest::Approx(2.3873241463784303e-05).epsilon(1e-12));
        CHECK(e == h[0]);
    }
    const ComplexVector far = channel_vector({0.0, 0.0, 0.0}, {0.0, 0.0, 200.0}, g, 0.03);
    CHECK(std::abs(far[0]) / std::abs(h[0]) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("SINR examples") {
    const ComplexVector hk{{1.0, 2.0}, {-0.5, 0.3}};
    const double energy = std::norm(hk[0]) + std::norm(hk[1]);
    CHECK(sinr(hk, hk, {}, 2.0, 0.5) == doctest::Approx(2.0 * energy / 0.5).epsilon(1e-14));

    const ComplexVector perp{std::conj(hk[1]) * -1.0, std::conj(hk[0])};
    CHECK(std::abs(sinr(perp, hk, {}, 1.0, 1.0)) < 1e-30);

    const std::vector<ComplexVector> intf{{{0.2, 0.1}, {1.0, -1.0}}};
    const ComplexVector w{{0.3, -0.7}, {1.1, 0.4}};
    const double s = sinr(w, hk, intf, 1.0, 0.1);
    for (const cplx c : {cplx(2.0, 0.0), cplx(0.0, -3.0), cplx(1e-6, 1e-6), cplx(-4e5, 2e5)}) {
        ComplexVector cw = w;
        for (auto& e : cw) e *= c;
        CHECK(std::abs(sinr(cw, hk, intf, 1.0, 0.1) - s) <= 1e-12 * s);
    }
    CHECK_THROWS(sinr(ComplexVector(2), hk, intf, 1.0, 0.1));
}

TEST_CASE("unit conversions") {
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
    CHECK(dbm_to_watts(-109.0) == doctest::Approx(1.2589254117941714e-14));
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}

TEST_CASE("physical parameter validation") {
    PhysParams p;
    CHECK_NOTHROW(p.validate());
    p.min_spacing = 3.0 * p.panel_half_side;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = PhysParams{};
    p.noise_power = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("APV helpers") {
    const Apv apv{{{0.0, 0.0}, {0.01, 0.0}, {0.0, 0.03}}};
    CHECK(apv.min_pairwise_distance() == doctest::Approx(0.01));
    CHECK(apv.spacing_violation(0.015) == doctest::Approx(0.005));
    CHECK(apv.spacing_violation(0.005) == 0.0);
    CHECK(apv.inside_box(0.03));
    CHECK_FALSE(apv.inside_box(0.02));
    CHECK(Apv::from_flat(apv.flatten()) == apv);
}
