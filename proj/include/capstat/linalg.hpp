// SPDX-License-Identifier: Apache-2.0
//
// capstat - higher-order capacity statistics for MRC diversity receivers
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
// ------------------------------------------------------------------------

#pragma once

// Small dense complex linear algebra for covariance matrices of a handful of
// diversity branches. Everything is O(L^3) with L <= ~16.

#include "capstat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

namespace capstat {

using complex = std::complex<double>;

class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t dim) : data_(dim) {}
    ComplexVector(std::initializer_list<complex> values) : data_(values) {}
    explicit ComplexVector(std::vector<complex> values) : data_(std::move(values)) {}

    std::size_t dim() const noexcept { return data_.size(); }
    complex &operator[](std::size_t i) { return data_[i]; }
    const complex &operator[](std::size_t i) const { return data_[i]; }

    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    /// v^H v
    double squared_norm() const noexcept {
        double acc = 0.0;
        for (const auto &x : data_)
            acc += std::norm(x);
        return acc;
    }

    bool operator==(const ComplexVector &) const = default;

private:
    std::vector<complex> data_;
};

/// Square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    /// Row-major nested initializer; rows must all have length equal to the row count.
    ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows) : ComplexMatrix(rows.size()) {
        std::size_t i = 0;
        for (const auto &row : rows) {
            if (row.size() != dim_)
                throw domain_error("ComplexMatrix: ragged initializer");
            std::size_t j = 0;
            for (const auto &x : row)
                (*this)(i, j++) = x;
            ++i;
        }
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
            m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<double> &d) {
        ComplexMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }
    complex &operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const complex &operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    /// max |a_ij|
    double max_abs() const noexcept {
        double acc = 0.0;
        for (const auto &x : data_)
            acc = std::max(acc, std::abs(x));
        return acc;
    }

    double frobenius_norm() const noexcept {
        double acc = 0.0;
        for (const auto &x : data_)
            acc += std::norm(x);
        return std::sqrt(acc);
    }

    bool is_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(),
                           [](const complex &x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
    }

    ComplexMatrix &operator*=(double k) {
        for (auto &x : data_)
            x *= k;
        return *this;
    }

    friend ComplexMatrix operator*(ComplexMatrix a, double k) { return a *= k; }
    friend ComplexMatrix operator*(double k, ComplexMatrix a) { return a *= k; }

    friend ComplexMatrix operator+(const ComplexMatrix &a, const ComplexMatrix &b) {
        check_same(a, b);
        ComplexMatrix out(a.dim_);
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            out.data_[i] = a.data_[i] + b.data_[i];
        return out;
    }

    friend ComplexMatrix operator-(const ComplexMatrix &a, const ComplexMatrix &b) {
        check_same(a, b);
        ComplexMatrix out(a.dim_);
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            out.data_[i] = a.data_[i] - b.data_[i];
        return out;
    }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        check_same(a, b);
        const std::size_t n = a.dim_;
        ComplexMatrix out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const complex aik = a(i, k);
                if (aik == complex{})
                    continue;
                for (std::size_t j = 0; j < n; ++j)
                    out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend ComplexVector operator*(const ComplexMatrix &a, const ComplexVector &v) {
        if (a.dim_ != v.dim())
            throw domain_error("matrix-vector dimension mismatch");
        ComplexVector out(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i) {
            complex acc{};
            for (std::size_t j = 0; j < a.dim_; ++j)
                acc += a(i, j) * v[j];
            out[i] = acc;
        }
        return out;
    }

    bool operator==(const ComplexMatrix &) const = default;

private:
    static void check_same(const ComplexMatrix &a, const ComplexMatrix &b) {
        if (a.dim_ != b.dim_)
            throw domain_error("matrix dimension mismatch: " + std::to_string(a.dim_) + " vs " +
                               std::to_string(b.dim_));
    }

    std::size_t dim_ = 0;
    std::vector<complex> data_;
};

inline complex trace(const ComplexMatrix &a) {
    complex acc{};
    for (std::size_t i = 0; i < a.dim(); ++i)
        acc += a(i, i);
    return acc;
}

/// Eigenvalues descending; column j of `vectors` belongs to values[j].
struct Eigensystem {
    std::vector<double> values;
    ComplexMatrix vectors;
};

namespace detail {

inline double hermitian_defect(const ComplexMatrix &a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i; j < a.dim(); ++j)
            acc = std::max(acc, std::abs(a(i, j) - std::conj(a(j, i))));
    return acc;
}

inline double off_diagonal_norm(const ComplexMatrix &a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j)
                acc += std::norm(a(i, j));
    return std::sqrt(acc);
}

// LU with partial pivoting in place; returns the permutation sign, or 0 if singular.
inline int lu_decompose(ComplexMatrix &a, std::vector<std::size_t> &perm) {
    const std::size_t n = a.dim();
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    int sign = 1;
    const double scale = std::max(a.max_abs(), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k)))
                piv = i;
        if (std::abs(a(piv, k)) <= 1e-14 * scale)
            return 0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(k, j), a(piv, j));
            std::swap(perm[k], perm[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) -= a(i, k) * a(k, j);
        }
    }
    return sign;
}

} // namespace detail

/// Determinant via LU; exactly zero for numerically singular input.
inline complex det(const ComplexMatrix &a) {
    ComplexMatrix lu = a;
    std::vector<std::size_t> perm;
    const int sign = detail::lu_decompose(lu, perm);
    if (sign == 0)
        return complex{};
    complex acc = static_cast<double>(sign);
    for (std::size_t i = 0; i < a.dim(); ++i)
        acc *= lu(i, i);
    return acc;
}

inline ComplexMatrix inverse(const ComplexMatrix &a) {
    const std::size_t n = a.dim();
    ComplexMatrix lu = a;
    std::vector<std::size_t> perm;
    if (detail::lu_decompose(lu, perm) == 0)
        throw factorization_error("inverse: matrix is singular", 0);

    ComplexMatrix out(n);
    std::vector<complex> col(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i)
            col[i] = (perm[i] == c) ? 1.0 : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k)
                col[i] -= lu(i, k) * col[k];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t k = i + 1; k < n; ++k)
                col[i] -= lu(i, k) * col[k];
            col[i] /= lu(i, i);
        }
        for (std::size_t i = 0; i < n; ++i)
            out(i, c) = col[i];
    }
    return out;
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq, then
/// applies the real symmetric Jacobi rotation to the (p, q) plane.
inline Eigensystem eigen_hermitian(const ComplexMatrix &input) {
    const std::size_t n = input.dim();
    if (n == 0)
        throw domain_error("eigen_hermitian: empty matrix");
    if (!input.is_finite())
        throw domain_error("eigen_hermitian: non-finite entries");
    const double scale = input.max_abs();
    if (detail::hermitian_defect(input) > 1e-12 * std::max(scale, 1.0))
        throw domain_error("eigen_hermitian: matrix is not Hermitian");

    ComplexMatrix a = input;
    ComplexMatrix u = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        a(i, i) = a(i, i).real();

    const double stop = 1e-14 * std::max(input.frobenius_norm(), 1e-300);
    constexpr int max_sweeps = 50;
    for (int sweep = 0; sweep < max_sweeps && detail::off_diagonal_norm(a) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0)
                    continue;
                const complex phase = a(p, q) / mag; // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // W = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on columns (p, q).
                const complex wqp = -s * std::conj(phase);
                const complex wqq = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * c + akq * wqp;
                    a(k, q) = akp * s + akq * wqq;
                    const complex ukp = u(k, p), ukq = u(k, q);
                    u(k, p) = ukp * c + ukq * wqp;
                    u(k, q) = ukp * s + ukq * wqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(wqp) * aqk;
                    a(q, k) = s * apk + std::conj(wqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    Eigensystem out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i)
            out.vectors(i, j) = u(i, order[j]);
    }
    return out;
}

/// Hermitian within tol * max|a_ij| and smallest eigenvalue >= -tol * trace(A).
inline bool is_hermitian_psd(const ComplexMatrix &a, double tol) {
    if (a.dim() == 0 || !a.is_finite())
        return false;
    const double scale = a.max_abs();
    if (detail::hermitian_defect(a) > tol * scale)
        return false;
    if (scale == 0.0)
        return true;
    // Symmetrize so eigen_hermitian's own (tighter) check cannot reject what passed here.
    const ComplexMatrix sym = 0.5 * (a + a.adjoint());
    const auto eig = eigen_hermitian(sym);
    return eig.values.back() >= -tol * std::abs(trace(sym).real());
}

/// Lower-triangular G with G G^H = A for Hermitian PSD A. Pivots below the
/// tolerance are treated as zero (rank-deficient input); a clearly negative
/// pivot raises factorization_error.
inline ComplexMatrix cholesky(const ComplexMatrix &a) {
    const std::size_t n = a.dim();
    if (detail::hermitian_defect(a) > 1e-12 * std::max(a.max_abs(), 1.0))
        throw domain_error("cholesky: matrix is not Hermitian");
    double diag_max = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        diag_max = std::max(diag_max, a(i, i).real());
    const double pivot_tol = 1e-12 * std::max(diag_max, 1e-300);

    ComplexMatrix g(n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k)
            d -= std::norm(g(j, k));
        if (d < -pivot_tol)
            throw factorization_error("cholesky: matrix is indefinite at pivot " + std::to_string(j) +
                                          " (residual " + std::to_string(d) + ")",
                                      j);
        if (d <= pivot_tol) {
            // Column is (numerically) dependent on the previous ones; its
            // remaining entries must vanish for a PSD input.
            for (std::size_t i = j + 1; i < n; ++i) {
                complex r = a(i, j);
                for (std::size_t k = 0; k < j; ++k)
                    r -= g(i, k) * std::conj(g(j, k));
                if (std::abs(r) > std::sqrt(pivot_tol) * std::sqrt(std::max(diag_max, 1e-300)))
                    throw factorization_error("cholesky: matrix is indefinite at pivot " + std::to_string(j), j);
            }
            continue;
        }
        const double root = std::sqrt(d);
        g(j, j) = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            complex r = a(i, j);
            for (std::size_t k = 0; k < j; ++k)
                r -= g(i, k) * std::conj(g(j, k));
            g(i, j) = r / root;
        }
    }
    return g;
}

/// A^{-1} = U diag(1/d) U^H from a Hermitian eigensystem.
inline ComplexMatrix inverse(const Eigensystem &eig) {
    const std::size_t n = eig.values.size();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (eig.values[k] == 0.0)
            throw factorization_error("inverse: zero eigenvalue", k);
        const double inv = 1.0 / eig.values[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += eig.vectors(i, k) * inv * std::conj(eig.vectors(j, k));
    }
    return out;
}

} // namespace capstat
