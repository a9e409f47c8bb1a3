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

#include "capstat/linalg.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace capstat;
using testing_support::random_covariance;

namespace {

double max_diff(const ComplexMatrix &a, const ComplexMatrix &b) { return (a - b).max_abs(); }

} // namespace

TEST(Linalg, DeterminantAndInverseOfSmallMatrix) {
    const ComplexMatrix a{{{2, 0}, {1, 1}}, {{1, -1}, {3, 0}}};
    EXPECT_NEAR(std::abs(det(a) - complex(4.0, 0.0)), 0.0, 1e-14);
    EXPECT_LE(max_diff(a * inverse(a), ComplexMatrix::identity(2)), 1e-14);
}

TEST(Linalg, SingularMatrixHasZeroDeterminantAndNoInverse) {
    const ComplexMatrix a{{1, 2}, {2, 4}};
    EXPECT_EQ(det(a), complex(0.0));
    EXPECT_THROW(inverse(a), factorization_error);
}

TEST(Linalg, EigenDecompositionReconstructs) {
    std::mt19937_64 rng(11);
    for (std::size_t n = 1; n <= 8; ++n) {
        const ComplexMatrix c = random_covariance(n, rng);
        const Eigensystem e = eigen_hermitian(c);
        ASSERT_EQ(e.values.size(), n);
        for (std::size_t i = 1; i < n; ++i)
            EXPECT_GE(e.values[i - 1], e.values[i]);
        std::vector<double> d(e.values);
        const ComplexMatrix back = e.vectors * ComplexMatrix::diagonal(d) * e.vectors.adjoint();
        EXPECT_LE(max_diff(back, c), 1e-13 * c.max_abs()) << "n=" << n;
        EXPECT_LE(max_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(n)), 1e-13);
        EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), trace(c).real(), 1e-13);
    }
}

TEST(Linalg, EigenvaluesOfKnownMatrix) {
    // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
    const ComplexMatrix a{{{2, 0}, {0, 1}}, {{0, -1}, {2, 0}}};
    const Eigensystem e = eigen_hermitian(a);
    EXPECT_NEAR(e.values[0], 3.0, 1e-14);
    EXPECT_NEAR(e.values[1], 1.0, 1e-14);
}

TEST(Linalg, EigenRejectsNonHermitian) {
    const ComplexMatrix a{{1, 2}, {0, 1}};
    EXPECT_THROW(eigen_hermitian(a), domain_error);
}

TEST(Linalg, CholeskyReconstructsAndIsLowerTriangular) {
    std::mt19937_64 rng(5);
    for (std::size_t n = 1; n <= 6; ++n) {
        const ComplexMatrix c = random_covariance(n, rng);
        const ComplexMatrix l = cholesky(c);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = i + 1; k < n; ++k)
                EXPECT_EQ(l(i, k), complex(0.0));
        EXPECT_LE(max_diff(l * l.adjoint(), c), 1e-14 * c.max_abs());
    }
}

TEST(Linalg, CholeskyAcceptsRankDeficientPsd) {
    // v v^H with v = (1, i, 2): rank one.
    const ComplexVector v{{1, 0}, {0, 1}, {2, 0}};
    ComplexMatrix c(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k)
            c(i, k) = v[i] * std::conj(v[k]);
    const ComplexMatrix l = cholesky(c);
    EXPECT_LE(max_diff(l * l.adjoint(), c), 1e-14);
}

TEST(Linalg, CholeskyRejectsIndefinite) {
    const ComplexMatrix a{{1, 2}, {2, 1}};
    EXPECT_THROW(cholesky(a), factorization_error);
}

TEST(Linalg, PsdCheck) {
    EXPECT_TRUE(is_hermitian_psd(ComplexMatrix::identity(3), 1e-12));
    EXPECT_TRUE(is_hermitian_psd(ComplexMatrix{{1, 1}, {1, 1}}, 1e-12));
    EXPECT_FALSE(is_hermitian_psd(ComplexMatrix{{1, 2}, {2, 1}}, 1e-12));
    EXPECT_FALSE(is_hermitian_psd(ComplexMatrix{{1, 0.5}, {0.25, 1}}, 1e-12));
}

TEST(Linalg, SpectralInverseMatchesLu) {
    std::mt19937_64 rng(3);
    const ComplexMatrix c = random_covariance(4, rng);
    EXPECT_LE(max_diff(inverse(eigen_hermitian(c)), inverse(c)), 1e-10 * inverse(c).max_abs());
}
