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

#include <stdexcept>
#include <string>

namespace sixdma {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Vector/matrix sizes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Factorization broke down (matrix not Hermitian positive definite, non-finite input).
class NumericalError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

// UAV and BS positions coincide, so no direction or distance is defined.
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

// Occupancy draw could not satisfy the ICIC separation within the retry budget.
class SamplingError : public Error {
public:
    using Error::Error;
};

// No point satisfies the minimum-spacing constraint.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Scenario cannot be solved as stated (e.g. no available BS).
class ScenarioError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace sixdma
