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

#include "sixdma/channel.hpp"

namespace sixdma {

/// Fixed-position reference array: ceil(sqrt(N)) columns at lambda/2 pitch,
/// centered on the panel origin, filled row-major with the first N grid points.
Apv fpa_positions(int n, double wavelength);

/// Solver starting point: a ceil(sqrt(N)) x ceil(sqrt(N)) grid spanning
/// [-L, L]^2 (pitch 2L / (ceil(sqrt(N)) - 1)), first N points row-major.
/// N = 1 gives the origin.
Apv upa_init_positions(int n, double half_side);

}  // namespace sixdma
