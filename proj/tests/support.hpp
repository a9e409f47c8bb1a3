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

#include "capstat/fading.hpp"
#include "capstat/linalg.hpp"

#include <cmath>
#include <random>

namespace testing_support {

using capstat::complex;
using capstat::ComplexMatrix;
using capstat::ComplexVector;

// Random Hermitian PSD covariance A A^H / L plus a small ridge.
inline ComplexMatrix random_covariance(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            a(i, k) = complex(g(rng), g(rng));
    ComplexMatrix c = a * a.adjoint();
    for (std::size_t i = 0; i < n; ++i)
        c(i, i) += 0.05;
    return c * (1.0 / static_cast<double>(n));
}

inline ComplexVector random_mean(std::size_t n, std::mt19937_64 &rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = complex(g(rng), g(rng));
    return v;
}

inline capstat::FadingModel random_model(std::mt19937_64 &rng, std::size_t max_branches = 6) {
    static constexpr double ms[] = {0.7, 1.0, 2.0, 3.5};
    std::uniform_int_distribution<std::size_t> dim(1, max_branches);
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_real_distribution<double> db(-10.0, 30.0);
    std::bernoulli_distribution los(0.5);
    const std::size_t n = dim(rng);
    const ComplexMatrix c = random_covariance(n, rng);
    const ComplexVector eta = los(rng) ? random_mean(n, rng) : ComplexVector(n);
    return capstat::FadingModel::build(ms[pick(rng)], std::pow(10.0, db(rng) / 10.0), eta, c);
}

} // namespace testing_support
