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

#include "capstat/fading.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace capstat;
using testing_support::random_covariance;
using testing_support::random_mean;
using testing_support::random_model;

namespace {

// det(I + a R)^{-m} exp(-a lambda^H (I + a R)^{-1} lambda), a = s Omega / m, by LU.
double mgf_by_determinant(const FadingModel &model, double s) {
    const double a = s * model.omega() / model.m();
    const std::size_t n = model.branches();
    const ComplexMatrix q = ComplexMatrix::identity(n) + model.R() * a;
    const ComplexVector w = inverse(q) * model.lambda();
    complex quad = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        quad += std::conj(model.lambda()[i]) * w[i];
    return std::pow(det(q).real(), -model.m()) * std::exp(-s * model.omega() * quad.real());
}

double five_point_derivative(const FadingModel &model, double s) {
    const double h = 1e-3 * s;
    return (-model.mgf(s + 2 * h) + 8 * model.mgf(s + h) - 8 * model.mgf(s - h) + model.mgf(s - 2 * h)) / (12 * h);
}

} // namespace

TEST(Normalization, TraceAndBranchSnrInvariants) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> om(0.1, 1000.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const auto c = random_covariance(n, rng);
        const auto eta = random_mean(n, rng, 0.1 + trial % 3);
        const double omega = om(rng);
        const auto model = FadingModel::build(1.5, omega, eta, c);
        EXPECT_NEAR(trace(model.R()).real() + model.lambda().squared_norm(), 1.0, 1e-10);
        const auto g = model.branch_snr();
        EXPECT_NEAR(std::accumulate(g.begin(), g.end(), 0.0), omega, 1e-10 * omega);
    }
}

TEST(Normalization, RejectsBadInput) {
    const ComplexMatrix indefinite{{1, 2}, {2, 1}};
    EXPECT_THROW(normalize(ComplexVector(2), indefinite), domain_error);
    EXPECT_THROW(normalize(ComplexVector(3), ComplexMatrix::identity(2)), domain_error);
    EXPECT_THROW(normalize(ComplexVector(2), ComplexMatrix(2)), domain_error);
    EXPECT_THROW(FadingModel::build(0.0, 1.0, ComplexVector(1), ComplexMatrix::identity(1)), domain_error);
    EXPECT_THROW(FadingModel::build(1.0, -1.0, ComplexVector(1), ComplexMatrix::identity(1)), domain_error);
}

TEST(Normalization, DirectPairMustSumToOne) {
    const ComplexMatrix r = ComplexMatrix::identity(2) * 0.4;
    EXPECT_THROW(FadingModel::from_normalized(1.0, 1.0, r, ComplexVector(2)), domain_error);
    const ComplexVector lam{{0.3, 0.0}, {0.0, std::sqrt(0.11)}};
    EXPECT_NO_THROW(FadingModel::from_normalized(1.0, 1.0, r, lam));
}

TEST(Mgf, MatchesDeterminantForm) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const auto model = random_model(rng);
        for (double s : {1e-3, 0.05, 0.7, 4.0, 30.0}) {
            const double ref = mgf_by_determinant(model, s);
            EXPECT_NEAR(model.mgf(s), ref, 1e-11 * ref) << "trial " << trial << " s=" << s;
        }
    }
}

TEST(Mgf, SingleBranchRicianMatchesClosedForm) {
    const double k = 3.0, sigma2 = 0.5, omega = 4.0;
    const ComplexVector eta{complex(std::sqrt(k * sigma2), 0.0)};
    const auto model = FadingModel::build(1.0, omega, eta, ComplexMatrix{{sigma2}});
    const auto ric = BranchMgf::rician(k, omega);
    for (double s : {0.0, 0.01, 0.3, 2.0, 50.0}) {
        const auto p = branch_mgf(ric, s);
        EXPECT_NEAR(model.mgf(s), p.value, 1e-14);
        EXPECT_NEAR(model.mgf_derivative(s), p.derivative, 1e-13 * std::max(1.0, std::abs(p.derivative)));
    }
}

TEST(Mgf, DiagonalModelIsProductOfNakagamiBranches) {
    const std::vector<double> share{0.5, 0.3, 0.2};
    const double m = 2.5, omega = 10.0;
    const auto model = FadingModel::build(m, omega, ComplexVector(3), ComplexMatrix::diagonal(share));
    std::vector<BranchMgf> br;
    for (double w : share)
        br.push_back(BranchMgf::nakagami(m, w * omega));
    for (double s : {0.001, 0.1, 1.0, 9.0}) {
        const auto p = independent_mgf(br, s);
        EXPECT_NEAR(model.mgf(s), p.value, 1e-14 * p.value + 1e-300);
        EXPECT_NEAR(model.mgf_derivative(s), p.derivative, 1e-12 * std::abs(p.derivative));
    }
}

TEST(Mgf, DerivativeMatchesFiniteDifferences) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto model = random_model(rng);
        for (double s : {0.02, 0.3, 2.0, 12.0}) {
            const double fd = five_point_derivative(model, s);
            const double an = model.mgf_derivative(s);
            EXPECT_LE(std::abs(an - fd), 1e-6 * std::abs(an)) << "trial " << trial << " s=" << s;
        }
    }
}

TEST(Mgf, ValueAtZeroAndSlope) {
    std::mt19937_64 rng(1);
    const auto model = random_model(rng);
    const auto p = model.at(0.0);
    EXPECT_DOUBLE_EQ(p.value, 1.0);
    // M'(0) = -E[gamma_end] = -Omega
    EXPECT_NEAR(p.derivative, -model.omega(), 1e-12 * model.omega());
}

TEST(Mgf, ApproachesAwgnLimitForLargeM) {
    const auto base = FadingModel::build(1e7, 2.0, ComplexVector{{0.3, 0.1}, {0.2, 0.0}},
                                         ComplexMatrix{{1.0, 0.4}, {0.4, 1.0}});
    for (double s : {0.1, 1.0, 5.0})
        EXPECT_NEAR(base.mgf(s), awgn_limit_mgf(base, s), 1e-5 * awgn_limit_mgf(base, s));
    const AwgnChannel ch{2.0};
    EXPECT_DOUBLE_EQ(ch.at(1.5).value, std::exp(-3.0));
    EXPECT_DOUBLE_EQ(ch.at(1.5).derivative, -2.0 * std::exp(-3.0));
}

TEST(Mgf, NegativeAbscissaRejected) {
    std::mt19937_64 rng(1);
    const auto model = random_model(rng);
    EXPECT_THROW(model.mgf(-0.1), domain_error);
    EXPECT_THROW(branch_mgf(BranchMgf::rayleigh(1.0), -1.0), domain_error);
}

TEST(Mgf, WithOmegaOnlyRescales) {
    std::mt19937_64 rng(4);
    const auto model = random_model(rng);
    const auto scaled = model.with_omega(3.0 * model.omega());
    EXPECT_EQ(scaled.R(), model.R());
    EXPECT_EQ(scaled.lambda(), model.lambda());
    EXPECT_NEAR(scaled.mgf(1.0), model.mgf(3.0), 1e-14);
}

TEST(Branches, IndependentProductAndRescale) {
    const IndependentBranches br({BranchMgf::rayleigh(1.0), BranchMgf::rician(2.0, 3.0)});
    EXPECT_DOUBLE_EQ(br.omega(), 4.0);
    const auto p = br.at(0.7);
    const auto a = branch_mgf(BranchMgf::rayleigh(1.0), 0.7), b = branch_mgf(BranchMgf::rician(2.0, 3.0), 0.7);
    EXPECT_DOUBLE_EQ(p.value, a.value * b.value);
    EXPECT_NEAR(p.derivative, a.derivative * b.value + a.value * b.derivative, 1e-15);
    EXPECT_DOUBLE_EQ(br.with_omega(8.0).omega(), 8.0);
    EXPECT_THROW(IndependentBranches({BranchMgf::nakagami(0.3, 1.0)}), domain_error);
}
