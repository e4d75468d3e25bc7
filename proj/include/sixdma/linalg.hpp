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

// Small dense complex linear algebra. Array sizes in this project never exceed
// a few dozen, so everything is dense, row-major and allocation-light.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sixdma {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    // Resets to the n x n identity without reallocating when the size is unchanged.
    void set_identity(std::size_t n);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Returns I_n + scale * sum_i v_i v_i^H. Each v_i must have length n.
ComplexMatrix hermitian_rank1_sum(std::size_t n, std::span<const ComplexVector> vectors, double scale);

/// In-place rank-one update A += scale * v v^H.
void add_hermitian_rank1(ComplexMatrix& a, std::span<const cplx> v, double scale);

/// Solves A x = b for Hermitian positive definite A via Cholesky (A = L L^H).
/// Throws NumericalError when a non-positive pivot appears.
ComplexVector solve_hpd(const ComplexMatrix& a, std::span<const cplx> b);

/// Allocation-free variant: factorizes `a` in place (its lower triangle is
/// overwritten by L) and overwrites `b` with the solution.
void solve_hpd_inplace(ComplexMatrix& a, std::span<cplx> b);

/// Conjugate-linear in the first argument: sum conj(a_n) b_n.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);

double squared_norm(std::span<const cplx> a) noexcept;

ComplexVector multiply(const ComplexMatrix& a, std::span<const cplx> x);

/// Explicit inverse of an HPD matrix, used only for diagnostics.
ComplexMatrix inverse_hpd(const ComplexMatrix& a);

}  // namespace sixdma
