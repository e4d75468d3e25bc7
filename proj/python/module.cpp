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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "sixdma/beamforming.hpp"
#include "sixdma/cell_grid.hpp"
#include "sixdma/channel.hpp"
#include "sixdma/errors.hpp"
#include "sixdma/harness.hpp"
#include "sixdma/optimizer.hpp"
#include "sixdma/selftest.hpp"

namespace py = pybind11;
using namespace sixdma;

namespace {

using PointList = std::vector<std::pair<double, double>>;

Apv to_apv(const PointList& pts) {
    Apv apv;
    for (const auto& [x, y] : pts) apv.points.push_back({x, y});
    return apv;
}

Vec3 to_vec3(const std::array<double, 3>& v) { return v; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core: channel model, MMSE beamforming, the BCD solver and the sweep harness";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    m.def("dbm_to_watts", &dbm_to_watts);
    m.def("linear_to_db", &linear_to_db);

    m.def(
        "rotation_matrix",
        [](double phi, double psi, double theta) { return rotation_matrix(Rotation{phi, psi, theta}); },
        py::arg("phi"), py::arg("psi"), py::arg("theta"));

    m.def(
        "wave_vector",
        [](const std::array<double, 3>& angles, const std::array<double, 3>& bs, const std::array<double, 3>& uav) {
            const WaveVector v = wave_vector(Rotation{angles[0], angles[1], angles[2]}, to_vec3(bs), to_vec3(uav));
            return std::array<double, 3>{v.alpha, v.beta, v.delta};
        },
        py::arg("angles"), py::arg("bs"), py::arg("uav"));

    m.def(
        "steering_vector",
        [](const PointList& points, const std::array<double, 3>& v, double wavelength) {
            return steering_vector(to_apv(points), WaveVector{v[0], v[1], v[2]}, wavelength);
        },
        py::arg("points"), py::arg("wave"), py::arg("wavelength"));

    m.def(
        "sinr",
        [](const ComplexVector& w, const ComplexVector& h_k, const std::vector<ComplexVector>& interferers, double p,
           double noise) { return sinr(w, h_k, interferers, p, noise); },
        py::arg("w"), py::arg("h_k"), py::arg("interferers"), py::arg("tx_power"), py::arg("noise_power"));

    m.def(
        "mmse_weights",
        [](const ComplexVector& h_k, const std::vector<ComplexVector>& interferers, double p, double noise) {
            BeamformerResult r = mmse_weights(h_k, interferers, p, noise);
            return py::make_tuple(r.w, r.sinr_linear);
        },
        py::arg("h_k"), py::arg("interferers"), py::arg("tx_power"), py::arg("noise_power"),
        "Returns (w, sinr_linear).");

    m.def(
        "layout_json",
        [](int q, double radius, double bs_height) { return layout_to_json(build_hex_layout(q, radius, bs_height)); },
        py::arg("q") = 4, py::arg("cell_radius") = 100.0, py::arg("bs_height") = 30.0);

    m.def(
        "solve_json",
        [](const std::string& scenario, const std::string& solver, std::uint64_t seed) {
            ScenarioParams params;
            SolverConfig cfg;
            update_from_json(params, nlohmann::json::parse(scenario));
            update_from_json(cfg, nlohmann::json::parse(solver));
            py::gil_scoped_release release;
            const Scenario sc = make_scenario(params, seed);
            return to_json(select_bs(sc, cfg), sc).dump();
        },
        py::arg("scenario") = "{}", py::arg("solver") = "{}", py::arg("seed") = 1);

    m.def(
        "sweep_json",
        [](const std::string& spec) {
            const SweepSpec s = sweep_spec_from_json(nlohmann::json::parse(spec));
            py::gil_scoped_release release;
            return run_sweep(s).summary.dump();
        },
        py::arg("spec"), "Runs a sweep from a JSON spec and returns the summary JSON.");

    m.def(
        "selftest",
        [](std::uint64_t seed, int trials) {
            SelftestReport rep;
            {
                py::gil_scoped_release release;
                rep = run_selftest(seed, trials);
            }
            py::list out;
            for (const auto& c : rep.checks) out.append(py::make_tuple(c.name, c.passed, c.detail));
            return out;
        },
        py::arg("seed") = 7, py::arg("trials") = 6);
}
