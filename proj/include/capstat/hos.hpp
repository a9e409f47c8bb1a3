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

// Capacity moments mu_n = E[log^n(1 + gamma_end)] (natural log) from the MGF:
//
//   mu_n = int_0^inf Z_n(s) { M(s) - M'(s) } ds.
//
// All requested orders are integrated in one pass over shared abscissae, so
// M and M' are evaluated once per node.

#include "capstat/errors.hpp"
#include "capstat/fading.hpp"
#include "capstat/parallel.hpp"
#include "capstat/quad.hpp"
#include "capstat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace capstat {

/// Capacity moments and the metrics derived from them.
struct CapacityStats {
    int orders = 0;
    std::vector<double> mu; // mu[0] is mu_1
    double variance = 0.0;
    double aod = 0.0;             // amount of dispersion, mu_2/mu_1 - mu_1
    double reliability_pct = 0.0; // 100 (1 - aod)
    std::optional<double> skewness;
    std::optional<double> kurtosis;

    double mu_n(int n) const { return n == 0 ? 1.0 : mu.at(static_cast<std::size_t>(n - 1)); }
};

inline double reliability_pct_from_aod(double aod) noexcept { return 100.0 * (1.0 - aod); }

/// Derives CapacityStats from raw moments mu_1..mu_N (N >= 2).
///
/// Skewness and kurtosis are the standardized third and fourth central
/// moments of log(1 + gamma_end), written in raw moments. They are left
/// empty when N is too small or the variance is at or below 1e-12 mu_1^2.
inline CapacityStats stats_from_moments(std::span<const double> mu) {
    if (mu.size() < 2)
        throw domain_error("stats_from_moments: need at least mu_1 and mu_2");
    CapacityStats out;
    out.orders = static_cast<int>(mu.size());
    out.mu.assign(mu.begin(), mu.end());

    const double m1 = mu[0], m2 = mu[1];
    double var = m2 - m1 * m1;
    if (var < 0.0 && var >= -1e-9 * std::max(std::abs(m2), 1e-300))
        var = 0.0;
    out.variance = var;
    out.aod = var / m1;
    out.reliability_pct = reliability_pct_from_aod(out.aod);

    const bool degenerate = !(var > 1e-12 * m1 * m1);
    if (!degenerate && mu.size() >= 3) {
        const double m3 = mu[2];
        const double central3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
        out.skewness = central3 / std::pow(var, 1.5);
    }
    if (!degenerate && mu.size() >= 4) {
        const double m3 = mu[2], m4 = mu[3];
        const double m1sq = m1 * m1;
        const double central4 = m4 - 4.0 * m1 * m3 + 6.0 * m1sq * m2 - 3.0 * m1sq * m1sq;
        out.kurtosis = central4 / (var * var);
    }
    return out;
}

/// mu_0 .. mu_max for any MGF source; throws quadrature_error if the
/// integral does not converge within budget.
template <MgfSource Source>
std::vector<double> hos_moments(const Source &source, int max_n, const QuadOptions &opt = {}) {
    detail::check_order(max_n, "hos_moments");
    const auto k = static_cast<std::size_t>(max_n) + 1;
    auto integrand = [&source](double s, std::span<double> out) {
        const MgfPoint p = source.at(s);
        const double weight = p.value - p.derivative;
        z_aux_all(s, out);
        for (double &v : out)
            v *= weight;
    };
    const MultiQuadResult r = integrate_hos_multi(integrand, k, opt);
    if (!r.converged) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < k; ++i)
            if (r.error_estimate[i] > r.error_estimate[worst])
                worst = i;
        throw quadrature_error("capacity moment integral did not converge (order " + std::to_string(worst) +
                                   ", error estimate " + std::to_string(r.error_estimate[worst]) + ")",
                               r.component(worst));
    }
    return r.value;
}

template <MgfSource Source>
double mu_n(const Source &source, int n, const QuadOptions &opt = {}) {
    return hos_moments(source, n, opt).back();
}

inline double mu_n_correlated(const FadingModel &model, int n, const QuadOptions &opt = {}) {
    return mu_n(model, n, opt);
}

inline double mu_n_independent(std::span<const BranchMgf> branches, int n, const QuadOptions &opt = {}) {
    return mu_n(IndependentBranches({branches.begin(), branches.end()}), n, opt);
}

/// mu_1 through the first-order kernel -e^{-s}(log s + gamma_E) directly.
template <MgfSource Source>
double ergodic_capacity(const Source &source, const QuadOptions &opt = {}) {
    auto integrand = [&source](double s) {
        const MgfPoint p = source.at(s);
        return -std::exp(-s) * (std::log(s) + euler_gamma()) * (p.value - p.derivative);
    };
    const QuadResult r = integrate_hos(integrand, opt);
    if (!r.converged)
        throw quadrature_error("ergodic capacity integral did not converge", r);
    return r.value;
}

template <MgfSource Source>
CapacityStats capacity_stats(const Source &source, int orders, const QuadOptions &opt = {}) {
    if (orders < 2)
        throw domain_error("capacity_stats: need at least 2 orders, got " + std::to_string(orders));
    const auto mu = hos_moments(source, orders, opt);
    return stats_from_moments(std::span<const double>(mu).subspan(1));
}

// ---------------------------------------------------------------------------
// SNR sweeps

template <typename T>
concept RescalableSource = MgfSource<T> && requires(const T &src, double omega) {
    { src.with_omega(omega) } -> std::convertible_to<T>;
};

struct SweepRow {
    double snr_db = 0.0;
    std::optional<CapacityStats> stats;
    std::string error; // non-empty iff stats is empty
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// One row per grid point with Omega = 10^(dB/10); only Omega changes between
/// rows. Row failures are recorded and the sweep continues. Rows come back in
/// grid order whatever the thread count.
template <RescalableSource Source>
std::vector<SweepRow> sweep(const Source &base, std::span<const double> snr_grid_db, int orders,
                            const QuadOptions &opt = {}, int threads = 0) {
    if (snr_grid_db.empty())
        throw domain_error("sweep: empty SNR grid");
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
        if (!(snr_grid_db[i] > snr_grid_db[i - 1]))
            throw domain_error("sweep: SNR grid must be strictly increasing");
    detail::check_order(orders, "sweep");

    std::vector<SweepRow> rows(snr_grid_db.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        rows[i].snr_db = snr_grid_db[i];
        try {
            const Source src = base.with_omega(db_to_linear(snr_grid_db[i]));
            rows[i].stats = capacity_stats(src, orders, opt);
        } catch (const std::exception &e) {
            rows[i].error = e.what();
        }
    });
    return rows;
}

} // namespace capstat
