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

#include "sixdma/array_layouts.hpp"

#include <cmath>

#include "sixdma/errors.hpp"

namespace sixdma {

namespace {

int grid_columns(int n) {
    int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    // Guard against sqrt rounding on perfect squares.
    while (cols * cols < n) ++cols;
    while (cols > 1 && (cols - 1) * (cols - 1) >= n) --cols;
    return cols;
}

}  // namespace

Apv fpa_positions(int n, double wavelength) {
    if (n < 1) throw InvalidArgument("fpa_positions: N must be at least 1");
    if (!(wavelength > 0.0)) throw InvalidArgument("fpa_positions: wavelength must be positive");
    const int cols = grid_columns(n);
    const int rows = (n + cols - 1) / cols;
    const double pitch = 0.5 * wavelength;
    Apv apv;
    for (int i = 0; i < n; ++i) {
        const int r = i / cols;
        const int c = i % cols;
        apv.points.push_back({(c - 0.5 * (cols - 1)) * pitch, (r - 0.5 * (rows - 1)) * pitch});
    }
    return apv;
}

Apv upa_init_positions(int n, double half_side) {
    if (n < 1) throw InvalidArgument("upa_init_positions: N must be at least 1");
    if (!(half_side > 0.0)) throw InvalidArgument("upa_init_positions: panel half side must be positive");
    Apv apv;
    if (n == 1) {
        apv.points.push_back({0.0, 0.0});
        return apv;
    }
    const int cols = grid_columns(n);
    const double pitch = 2.0 * half_side / (cols - 1);
    for (int i = 0; i < n; ++i) {
        const int r = i / cols;
        const int c = i % cols;
        // Last column/row pinned to +L exactly so the grid never leaves the box.
        const double x = (c == cols - 1) ? half_side : -half_side + c * pitch;
        const double y = (r == cols - 1) ? half_side : -half_side + r * pitch;
        apv.points.push_back({x, y});
    }
    return apv;
}

}  // namespace sixdma
