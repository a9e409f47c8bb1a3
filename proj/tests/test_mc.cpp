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

#include "capstat/hos.hpp"
#include "capstat/mc.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace capstat;

namespace {

FadingModel demo(double m, bool los) {
    const ComplexMatrix c{{1, 0.5, 0.25}, {0.5, 1, 0.5}, {0.25, 0.5, 1}};
    const ComplexVector eta = los ? ComplexVector{0.7, 0.7, 0.7} : ComplexVector(3);
    return FadingModel::build(m, 10.0, eta, c);
}

} // namespace

TEST(MonteCarlo, FixedSeedIsReproducibleAcrossThreadCounts) {
    const auto model = demo(2.0, true);
    const auto a = estimate_moments(model, 3, 20000, RngSeed{42}, 1);
    const auto b = estimate_moments(model, 3, 20000, RngSeed{42}, 5);
    const auto c = estimate_moments(model, 3, 20000, RngSeed{43}, 1);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(a[i].mean, b[i].mean);
        EXPECT_EQ(a[i].std_error, b[i].std_error);
        EXPECT_NE(a[i].mean, c[i].mean);
        EXPECT_EQ(a[i].n, i + 1);
    }
}

TEST(MonteCarlo, SampleMgfMatchesAnalytic) {
    for (double m : {1.0, 3.0}) {
        const auto model = demo(m, true);
        const std::vector<double> s{0.01, 0.1, 0.5};
        auto stat = [&s](double g, std::span<double> out) {
            for (std::size_t i = 0; i < s.size(); ++i)
                out[i] = std::exp(-s[i] * g);
        };
        const auto est = estimate_statistics(model, s.size(), 200000, RngSeed{7}, stat);
        for (std::size_t i = 0; i < s.size(); ++i)
            EXPECT_LE(std::abs(est[i].mean - model.mgf(s[i])), 4.0 * est[i].std_error) << "m=" << m << " s=" << s[i];
    }
}

TEST(MonteCarlo, MeanSnrIsOmega) {
    const auto model = demo(2.0, false);
    auto stat = [](double g, std::span<double> out) { out[0] = g; };
    const auto est = estimate_statistics(model, 1, 200000, RngSeed{3}, stat);
    EXPECT_LE(std::abs(est[0].mean - model.omega()), 4.0 * est[0].std_error);
}

TEST(MonteCarlo, CapacityMomentsAgreeWithIntegral) {
    const auto model = demo(1.0, true);
    const auto mu = hos_moments(model, 4);
    const auto est = estimate_moments(model, 4, 200000, RngSeed{11});
    for (int n = 1; n <= 4; ++n)
        EXPECT_LE(std::abs(mu[n] - est[n - 1].mean), 4.0 * est[n - 1].std_error) << "n=" << n;
}

TEST(MonteCarlo, StandardErrorScalesAsInverseRoot) {
    const auto model = demo(1.0, false);
    const auto small = estimate_moments(model, 1, 10000, RngSeed{1});
    const auto large = estimate_moments(model, 1, 160000, RngSeed{1});
    EXPECT_NEAR(small[0].std_error / large[0].std_error, 4.0, 0.4);
}

TEST(MonteCarlo, RequiresIntegerM) {
    EXPECT_THROW(GammaEndSampler(demo(2.5, false)), capability_error);
    EXPECT_THROW(estimate_moments(demo(0.7, true), 2, 10000, RngSeed{1}), capability_error);
    EXPECT_THROW(estimate_moments(demo(1.0, true), 2, 999, RngSeed{1}), domain_error);
}

TEST(MonteCarlo, RankDeficientCovarianceStillSamples) {
    // Fully correlated branches: gamma_end = Omega |h|^2 for a single shared gain.
    const ComplexMatrix c{{1, 1}, {1, 1}};
    const auto model = FadingModel::build(1.0, 2.0, ComplexVector(2), c);
    auto stat = [](double g, std::span<double> out) { out[0] = g; };
    const auto est = estimate_statistics(model, 1, 100000, RngSeed{9}, stat);
    EXPECT_LE(std::abs(est[0].mean - 2.0), 4.0 * est[0].std_error);
}
