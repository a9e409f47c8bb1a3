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

// Constants and the auxiliary kernels Z_n(s) that weight the MGF in the
// capacity-moment integral.
//
// Z_n(s) = (-1)^n e^{-s} d^n/da^n [ s^a / Gamma(1+a) ] at a = 0.
//
// Writing s^a / Gamma(1+a) = exp(g(a)) with
//   g(a) = a (log s + gamma_E) - sum_{k>=2} (-1)^k zeta(k) a^k / k,
// the n-th derivative at zero is the complete Bell polynomial
// B_n(g'(0), ..., g^(n)(0)), where g'(0) = log s + gamma_E and
// g^(k)(0) = (-1)^{k+1} (k-1)! zeta(k).  Expanding B_n in powers of log s
// gives a fixed coefficient table per order, so evaluating Z_n needs no
// differentiation and no Meijer-G machinery.

#include "capstat/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace capstat {

/// Highest order with validated coefficient accuracy in double precision.
inline constexpr int max_order = 16;

inline constexpr double euler_gamma() noexcept { return std::numbers::egamma_v<double>; }

namespace detail {

inline constexpr long double euler_gamma_ld = 0.577215664901532860606512090082402431L;

// zeta(k) for integer k >= 2: a short direct sum plus the Euler-Maclaurin tail
// sum_{n>=N} n^{-k} = N^{1-k}/(k-1) + N^{-k}/2 + sum_j B_2j/(2j)! k^(2j-1 rising) N^{-k-2j+1}.
inline long double zeta_series(int k) {
    constexpr int head = 40;
    constexpr std::array<long double, 6> bernoulli = {
        1.0L / 6.0L, -1.0L / 30.0L, 1.0L / 42.0L, -1.0L / 30.0L, 5.0L / 66.0L, -691.0L / 2730.0L};

    const long double big_n = head;
    const long double kk = k;
    long double tail = std::pow(big_n, 1.0L - kk) / (kk - 1.0L) + std::pow(big_n, -kk) / 2.0L;
    long double rising = kk;   // k (k+1) ... (k+2j-2)
    long double factorial = 2; // (2j)!
    for (std::size_t j = 1; j <= bernoulli.size(); ++j) {
        tail += bernoulli[j - 1] / factorial * rising * std::pow(big_n, -kk - 2.0L * j + 1.0L);
        rising *= (kk + 2.0L * j - 1.0L) * (kk + 2.0L * j);
        factorial *= (2.0L * j + 1.0L) * (2.0L * j + 2.0L);
    }

    long double sum = tail;
    for (int n = head - 1; n >= 1; --n)
        sum += std::pow(static_cast<long double>(n), -kk);
    return sum;
}

struct ZetaTable {
    std::array<long double, max_order + 1> values{};

    ZetaTable() {
        for (int k = 2; k <= max_order; ++k)
            values[k] = zeta_series(k);
    }
};

inline const ZetaTable &zeta_table() {
    static const ZetaTable table;
    return table;
}

} // namespace detail

/// Riemann zeta at integer argument 2 <= k <= max_order.
inline double zeta(int k) {
    if (k < 2 || k > max_order)
        throw domain_error("zeta: k=" + std::to_string(k) + " outside [2, " +
                           std::to_string(max_order) + "]");
    return static_cast<double>(detail::zeta_table().values[k]);
}

/// Polynomial in x = log(s): P(x) = sum_j coeffs[j] x^j.
struct LogPolynomial {
    std::vector<double> coeffs;

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }

    double operator()(double x) const noexcept {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }
};

namespace detail {

struct BellTable {
    std::array<LogPolynomial, max_order + 1> polys;

    BellTable() {
        using poly = std::vector<long double>;
        const auto &z = zeta_table().values;

        // Derivatives of g at zero: x1 is linear in log s, the rest are constants.
        std::array<long double, max_order + 1> x_const{};
        long double fact = 1; // (k-1)!
        for (int k = 2; k <= max_order; ++k) {
            fact *= (k - 1);
            x_const[k] = ((k % 2 == 0) ? -1.0L : 1.0L) * fact * z[k];
        }

        std::array<poly, max_order + 1> bell;
        bell[0] = {1.0L};
        for (int n = 0; n < max_order; ++n) {
            poly next(n + 2, 0.0L);
            long double binom = 1; // C(n, j)
            for (int j = 0; j <= n; ++j) {
                const poly &b = bell[n - j];
                if (j == 0) {
                    // multiply by (gamma_E + log s)
                    for (std::size_t i = 0; i < b.size(); ++i) {
                        next[i] += binom * b[i] * euler_gamma_ld;
                        next[i + 1] += binom * b[i];
                    }
                } else {
                    for (std::size_t i = 0; i < b.size(); ++i)
                        next[i] += binom * b[i] * x_const[j + 1];
                }
                binom = binom * (n - j) / (j + 1);
            }
            bell[n + 1] = std::move(next);
        }

        for (int n = 0; n <= max_order; ++n)
            polys[n].coeffs.assign(bell[n].begin(), bell[n].end());
    }
};

inline const BellTable &bell_table() {
    static const BellTable table;
    return table;
}

inline void check_order(int n, const char *who) {
    if (n < 0)
        throw domain_error(std::string(who) + ": negative order " + std::to_string(n));
    if (n > max_order)
        throw capability_error(std::string(who) + ": order " + std::to_string(n) +
                               " exceeds validated maximum " + std::to_string(max_order));
}

} // namespace detail

/// P_n with Z_n(s) = (-1)^n e^{-s} P_n(log s).
inline const LogPolynomial &bell_coefficients(int n) {
    detail::check_order(n, "bell_coefficients");
    return detail::bell_table().polys[n];
}

inline double z_aux(int n, double s) {
    detail::check_order(n, "z_aux");
    if (!(s > 0.0))
        throw domain_error("z_aux: s must be positive, got " + std::to_string(s));
    const double p = detail::bell_table().polys[n](std::log(s));
    return ((n % 2 == 0) ? 1.0 : -1.0) * std::exp(-s) * p;
}

/// Fills out[n] = Z_n(s) for n = 0 .. out.size()-1, sharing log(s) and e^{-s}.
inline void z_aux_all(double s, std::span<double> out) {
    if (out.empty())
        return;
    detail::check_order(static_cast<int>(out.size()) - 1, "z_aux_all");
    if (!(s > 0.0))
        throw domain_error("z_aux_all: s must be positive, got " + std::to_string(s));
    const double x = std::log(s);
    const double decay = std::exp(-s);
    const auto &table = detail::bell_table().polys;
    for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = ((n % 2 == 0) ? decay : -decay) * table[n](x);
}

} // namespace capstat
