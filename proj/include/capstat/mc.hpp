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

// Monte Carlo oracle for the correlated generalized-Rician model.
//
// For integer m the combiner output is a sum of m independent quadratic forms
//   gamma_end = sum_{j=1..m} g_j^H g_j,
//   g_j ~ CN( sqrt(Omega/m) lambda, (Omega/m) R ),
// which is exactly the model whose MGF the analytic path integrates. The
// sampler never looks at the MGF, so agreement between the two is a genuine
// cross-check.
//
// Work is cut into a fixed number of shards, each with its own generator
// seeded from (seed, shard). Results are merged in shard order, so they are
// bit-identical for a given seed regardless of the number of threads.

#include "capstat/errors.hpp"
#include "capstat/fading.hpp"
#include "capstat/linalg.hpp"
#include "capstat/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace capstat {

struct RngSeed {
    std::uint64_t seed = 0;
};

struct McEstimate {
    int n = 0;
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

using Rng = std::mt19937_64;

/// Derives an independent generator for one shard (SplitMix64 finalizer on seed and index).
inline Rng make_substream(RngSeed seed, std::uint64_t shard) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    const std::uint64_t a = mix(seed.seed);
    const std::uint64_t b = mix(a ^ mix(shard + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

/// Draws gamma_end for a model with integer m.
class GammaEndSampler {
public:
    explicit GammaEndSampler(const FadingModel &model) : copies_(integer_m(model.m())) {
        const double scale = model.omega() / model.m();
        factor_ = cholesky(model.R() * scale);
        const double root = std::sqrt(scale);
        mean_ = ComplexVector(model.branches());
        for (std::size_t i = 0; i < model.branches(); ++i)
            mean_[i] = root * model.lambda()[i];
        z_.resize(model.branches());
    }

    double operator()(Rng &rng) {
        std::normal_distribution<double> half(0.0, std::sqrt(0.5));
        const std::size_t n = mean_.dim();
        double acc = 0.0;
        for (int j = 0; j < copies_; ++j) {
            for (auto &z : z_) {
                const double re = half(rng);
                const double im = half(rng);
                z = complex(re, im);
            }
            for (std::size_t i = 0; i < n; ++i) {
                complex g = mean_[i];
                for (std::size_t k = 0; k <= i; ++k)
                    g += factor_(i, k) * z_[k];
                acc += std::norm(g);
            }
        }
        return acc;
    }

    static int integer_m(double m) {
        const double r = std::round(m);
        if (r < 1.0 || std::abs(m - r) > 1e-12)
            throw capability_error("Monte Carlo sampling needs an integer fading figure m >= 1 (got " +
                                   std::to_string(m) + "); use the analytic path for non-integer m");
        return static_cast<int>(r);
    }

private:
    int copies_;
    ComplexMatrix factor_;
    ComplexVector mean_;
    std::vector<complex> z_;
};

inline double sample_gamma_end(const FadingModel &model, Rng &rng) { return GammaEndSampler(model)(rng); }

namespace detail {

// Welford accumulator; merge() is Chan's pairwise update.
struct RunningMoments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const RunningMoments &o) {
        if (o.count == 0)
            return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n = static_cast<double>(count + o.count);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.count) / n;
        m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / n;
        count += o.count;
    }
};

inline constexpr std::uint64_t shard_count = 64;

} // namespace detail

/// Sample means (with standard errors) of k statistics of gamma_end.
/// `stat(gamma, out)` fills out[0..k-1] for one draw.
inline std::vector<McEstimate> estimate_statistics(
    const FadingModel &model, std::size_t k, std::uint64_t samples, RngSeed seed,
    const std::function<void(double, std::span<double>)> &stat, int threads = 0) {
    if (samples < 2)
        throw domain_error("estimate_statistics: need at least 2 samples");
    const GammaEndSampler prototype(model);

    std::vector<std::vector<detail::RunningMoments>> shards(detail::shard_count,
                                                            std::vector<detail::RunningMoments>(k));
    parallel_for(detail::shard_count, threads, [&](std::size_t sh) {
        GammaEndSampler sampler = prototype;
        std::vector<double> buf(k);
        Rng rng = make_substream(seed, sh);
        const std::uint64_t begin = samples * sh / detail::shard_count;
        const std::uint64_t end = samples * (sh + 1) / detail::shard_count;
        auto &acc = shards[sh];
        for (std::uint64_t i = begin; i < end; ++i) {
            stat(sampler(rng), buf);
            for (std::size_t c = 0; c < k; ++c)
                acc[c].push(buf[c]);
        }
    });

    std::vector<McEstimate> out(k);
    for (std::size_t c = 0; c < k; ++c) {
        detail::RunningMoments total;
        for (const auto &sh : shards)
            total.merge(sh[c]);
        const double var = total.m2 / static_cast<double>(total.count - 1);
        out[c] = {static_cast<int>(c), total.mean, std::sqrt(var / static_cast<double>(total.count)),
                  total.count};
    }
    return out;
}

/// mu_n estimates for n = 1..orders.
inline std::vector<McEstimate> estimate_moments(const FadingModel &model, int orders, std::uint64_t samples,
                                                RngSeed seed, int threads = 0) {
    if (orders < 1)
        throw domain_error("estimate_moments: orders must be >= 1");
    if (samples < 1000)
        throw domain_error("estimate_moments: need at least 1000 samples, got " + std::to_string(samples));
    auto stat = [](double gamma, std::span<double> out) {
        const double c = std::log1p(gamma);
        double p = 1.0;
        for (double &v : out) {
            p *= c;
            v = p;
        }
    };
    auto est = estimate_statistics(model, static_cast<std::size_t>(orders), samples, seed, stat, threads);
    for (auto &e : est)
        e.n += 1;
    return est;
}

} // namespace capstat
