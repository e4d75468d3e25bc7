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

#include "sixdma/linalg.hpp"

#include <cmath>
#include <string>

#include "sixdma/errors.hpp"

namespace sixdma {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m;
    m.set_identity(n);
    return m;
}

void ComplexMatrix::set_identity(std::size_t n) {
    rows_ = n;
    cols_ = n;
    data_.assign(n * n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) data_[i * n + i] = 1.0;
}

void add_hermitian_rank1(ComplexMatrix& a, std::span<const cplx> v, double scale) {
    const std::size_t n = a.rows();
    if (a.cols() != n || v.size() != n)
        throw DimensionError("add_hermitian_rank1: vector length " + std::to_string(v.size()) +
                             " does not match " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " matrix");
    // Fill the lower triangle and mirror it, so the result is Hermitian bit for bit.
    for (std::size_t r = 0; r < n; ++r) {
        const cplx vr = scale * v[r];
        for (std::size_t c = 0; c < r; ++c) {
            const cplx val = a(r, c) + vr * std::conj(v[c]);
            a(r, c) = val;
            a(c, r) = std::conj(val);
        }
        a(r, r) = cplx{a(r, r).real() + scale * std::norm(v[r]), 0.0};
    }
}

ComplexMatrix hermitian_rank1_sum(std::size_t n, std::span<const ComplexVector> vectors, double scale) {
    if (!std::isfinite(scale)) throw InvalidArgument("hermitian_rank1_sum: scale must be finite");
    ComplexMatrix m = ComplexMatrix::identity(n);
    for (const auto& v : vectors) add_hermitian_rank1(m, v, scale);
    return m;
}

void solve_hpd_inplace(ComplexMatrix& a, std::span<cplx> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw DimensionError("solve_hpd: system is " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " but right-hand side has length " +
                             std::to_string(b.size()));

    // Cholesky A = L L^H, L stored in the lower triangle.
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(a(j, k));
        if (!(d > 0.0) || !std::isfinite(d))
            throw NumericalError("solve_hpd: matrix is not Hermitian positive definite (pivot " +
                                 std::to_string(j) + " = " + std::to_string(d) + ")");
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * std::conj(a(j, k));
            a(i, j) = s / ljj;
        }
    }
    // Forward: L y = b.
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * b[k];
        b[i] = s / a(i, i).real();
    }
    // Backward: L^H x = y.
    for (std::size_t ii = n; ii-- > 0;) {
        cplx s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(a(k, ii)) * b[k];
        b[ii] = s / a(ii, ii).real();
    }
}

ComplexVector solve_hpd(const ComplexMatrix& a, std::span<const cplx> b) {
    ComplexMatrix work = a;
    ComplexVector x(b.begin(), b.end());
    solve_hpd_inplace(work, x);
    return x;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size())
        throw DimensionError("inner: lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " differ");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double squared_norm(std::span<const cplx> a) noexcept {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return s;
}

ComplexVector multiply(const ComplexMatrix& a, std::span<const cplx> x) {
    if (a.cols() != x.size())
        throw DimensionError("multiply: matrix has " + std::to_string(a.cols()) +
                             " columns but vector has length " + std::to_string(x.size()));
    ComplexVector y(a.rows(), cplx{0.0, 0.0});
    for (std::size_t r = 0; r < a.rows(); ++r) {
        cplx s{0.0, 0.0};
        for (std::size_t c = 0; c < a.cols(); ++c) s += a(r, c) * x[c];
        y[r] = s;
    }
    return y;
}

ComplexMatrix inverse_hpd(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    ComplexMatrix inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        ComplexVector e(n, cplx{0.0, 0.0});
        e[c] = 1.0;
        const ComplexVector col = solve_hpd(a, e);
        for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
    }
    return inv;
}

}  // namespace sixdma
