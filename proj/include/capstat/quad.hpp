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

// Semi-infinite quadrature for integrands shaped like
//   e^{-s} * (polynomial in log s) * (smooth bounded factor),   s in (0, inf).
//
// The half-line is split at `split` (default 1):
//   (0, split]   tanh-sinh: s = split / (1 + exp(-pi sinh t)); the log^k(s)
//                endpoint singularity becomes a double-exponentially decaying
//                integrand in t, and the trapezoid rule in t converges fast.
//                Levels halve the step and reuse all previous nodes.
//   [split, inf) Gauss-Laguerre in t = s - split with the e^{-t} weight folded
//                back into the nodes, at n = 8, 16, ..., 512.
// Each piece is refined until two successive inter-level differences are
// within half the requested tolerance.

#include "capstat/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace capstat {

struct QuadOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double split = 1.0;
    std::size_t max_evaluations = 200'000;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Vector-valued result; all components share the abscissae.
struct MultiQuadResult {
    std::vector<double> value;
    std::vector<double> error_estimate;
    std::size_t evaluations = 0;
    bool converged = false;

    QuadResult component(std::size_t i) const { return {value[i], error_estimate[i], evaluations, converged}; }
};

/// Raised when a caller requires convergence and the quadrature did not reach it.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string &what, QuadResult partial)
        : std::runtime_error(what), partial_(partial) {}

    const QuadResult &partial() const noexcept { return partial_; }

private:
    QuadResult partial_;
};

namespace detail {

// ---------------------------------------------------------------------------
// Gauss-Laguerre rules. Nodes from Sturm-sequence bisection on the Jacobi
// matrix (diag 2i+1, off-diagonal i), then polished by Newton in extended
// precision; weights are stored pre-multiplied by e^{x}.

struct LaguerreRule {
    std::vector<double> nodes;
    std::vector<double> scaled_weights; // w_i * exp(x_i)
};

inline long double laguerre_pair(int n, long double x, long double &prev) {
    long double p0 = 1.0L, p1 = 1.0L - x;
    if (n == 0) {
        prev = 0.0L;
        return p0;
    }
    for (int j = 1; j < n; ++j) {
        const long double p2 = ((2.0L * j + 1.0L - x) * p1 - j * p0) / (j + 1.0L);
        p0 = p1;
        p1 = p2;
    }
    prev = p0;
    return p1;
}

inline LaguerreRule make_laguerre_rule(int n) {
    auto count_below = [n](double x) {
        int count = 0;
        double q = 1.0 - x; // d_0 - x
        if (q < 0)
            ++count;
        for (int i = 1; i < n; ++i) {
            const double off = i;
            if (q == 0.0)
                q = 1e-300;
            q = (2.0 * i + 1.0 - x) - off * off / q;
            if (q < 0)
                ++count;
        }
        return count;
    };

    const double upper = 4.0 * n + 2.0;
    LaguerreRule rule;
    rule.nodes.resize(n);
    rule.scaled_weights.resize(n);
    for (int k = 0; k < n; ++k) {
        double lo = 0.0, hi = upper;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(hi, 1e-3); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (count_below(mid) > k)
                hi = mid;
            else
                lo = mid;
        }
        long double x = 0.5L * (lo + hi);
        for (int it = 0; it < 3; ++it) {
            long double prev;
            const long double p = laguerre_pair(n, x, prev);
            const long double dp = n * (p - prev) / x;
            if (dp == 0.0L)
                break;
            x -= p / dp;
        }
        long double dummy;
        const long double next = laguerre_pair(n + 1, x, dummy);
        const long double w = x / ((n + 1.0L) * (n + 1.0L) * next * next);
        rule.nodes[k] = static_cast<double>(x);
        rule.scaled_weights[k] = static_cast<double>(w * std::exp(x));
    }
    return rule;
}

inline constexpr int laguerre_levels = 7; // n = 8 .. 512

inline const LaguerreRule &laguerre_rule(int level) {
    static std::array<LaguerreRule, laguerre_levels> rules;
    static std::array<std::once_flag, laguerre_levels> flags;
    std::call_once(flags[level], [level] { rules[level] = make_laguerre_rule(8 << level); });
    return rules[level];
}

// ---------------------------------------------------------------------------

inline constexpr double ts_step0 = 0.5;
inline constexpr double ts_t_min = -6.0;
inline constexpr double ts_t_max = 4.0;
inline constexpr int ts_levels = 13;

template <typename F>
void evaluate_checked(F &f, double s, std::span<double> out) {
    f(s, out);
    for (double v : out)
        if (!std::isfinite(v))
            throw evaluation_error("integrand is not finite at s=" + std::to_string(s), s);
}

// Running state of one piece: one vector estimate per completed level.
struct PieceState {
    std::vector<std::vector<double>> estimates;
    int next_level = 0;
    bool exhausted = false;

    bool converged(std::span<const double> tol) const {
        if (estimates.size() < 3)
            return false;
        const auto &a = estimates[estimates.size() - 3];
        const auto &b = estimates[estimates.size() - 2];
        const auto &c = estimates.back();
        for (std::size_t i = 0; i < c.size(); ++i)
            if (std::abs(c[i] - b[i]) > 0.5 * tol[i] || std::abs(b[i] - a[i]) > 0.5 * tol[i])
                return false;
        return true;
    }

    double last_difference(std::size_t i) const {
        if (estimates.size() < 2)
            return std::abs(estimates.back()[i]);
        return std::abs(estimates.back()[i] - estimates[estimates.size() - 2][i]);
    }
};

// Tanh-sinh on (0, split]. The running raw sum (without the step factor) is
// kept so each level only evaluates the new odd nodes.
template <typename F>
class TanhSinhPiece {
public:
    TanhSinhPiece(F &f, std::size_t k, double split) : f_(f), split_(split), sum_(k, 0.0), buf_(k) {}

    std::size_t nodes_for_level(int level) const {
        const double h = ts_step0 / std::ldexp(1.0, level);
        const auto span = static_cast<std::size_t>((ts_t_max - ts_t_min) / h) + 1;
        return level == 0 ? span : span / 2 + 1;
    }

    std::size_t refine(int level, std::vector<double> &estimate) {
        const double h = ts_step0 / std::ldexp(1.0, level);
        std::size_t evals = 0;
        const long lo = static_cast<long>(std::ceil(ts_t_min / h));
        const long hi = static_cast<long>(std::floor(ts_t_max / h));
        const long stride = (level == 0) ? 1 : 2;
        long start = lo;
        if (level > 0 && (start % 2 == 0))
            ++start;
        for (long j = start; j <= hi; j += stride) {
            const double t = static_cast<double>(j) * h;
            const double u = std::numbers::pi * std::sinh(t);
            const double e = std::exp(-u);
            const double sigma = 1.0 / (1.0 + e);
            const double one_minus = e / (1.0 + e);
            const double s = split_ * sigma;
            if (!(s > 0.0) || !std::isfinite(e) || one_minus == 0.0)
                continue;
            const double jac = split_ * std::numbers::pi * std::cosh(t) * sigma * one_minus;
            if (jac == 0.0)
                continue;
            evaluate_checked(f_, s, buf_);
            ++evals;
            for (std::size_t i = 0; i < sum_.size(); ++i)
                sum_[i] += jac * buf_[i];
        }
        estimate.resize(sum_.size());
        for (std::size_t i = 0; i < sum_.size(); ++i)
            estimate[i] = h * sum_[i];
        return evals;
    }

private:
    F &f_;
    double split_;
    std::vector<double> sum_;
    std::vector<double> buf_;
};

template <typename F>
class LaguerrePiece {
public:
    LaguerrePiece(F &f, std::size_t k, double split) : f_(f), split_(split), buf_(k) {}

    std::size_t nodes_for_level(int level) const { return static_cast<std::size_t>(8) << level; }

    std::size_t refine(int level, std::vector<double> &estimate) {
        const auto &rule = laguerre_rule(level);
        estimate.assign(buf_.size(), 0.0);
        std::size_t evals = 0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double w = rule.scaled_weights[j];
            if (w == 0.0 || !std::isfinite(w))
                continue;
            evaluate_checked(f_, split_ + rule.nodes[j], buf_);
            ++evals;
            for (std::size_t i = 0; i < buf_.size(); ++i)
                estimate[i] += w * buf_[i];
        }
        return evals;
    }

private:
    F &f_;
    double split_;
    std::vector<double> buf_;
};

} // namespace detail

/// Integrates k integrand components over (0, inf) sharing every abscissa.
/// `f(s, out)` must fill out[0..k-1]. Convergence requires every component
/// to meet max(rel_tol |value|, abs_tol).
template <typename F>
    requires std::invocable<F &, double, std::span<double>>
MultiQuadResult integrate_hos_multi(F &&f, std::size_t components, const QuadOptions &opt = {}) {
    if (components == 0)
        throw domain_error("integrate_hos_multi: no components");
    if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
        throw domain_error("integrate_hos_multi: tolerances must be positive");
    if (!(opt.split > 0.0) || !std::isfinite(opt.split))
        throw domain_error("integrate_hos_multi: split point must be positive");

    using Fn = std::remove_reference_t<F>;
    detail::TanhSinhPiece<Fn> head(f, components, opt.split);
    detail::LaguerrePiece<Fn> tail(f, components, opt.split);
    detail::PieceState head_state, tail_state;

    MultiQuadResult result;
    result.value.assign(components, 0.0);
    result.error_estimate.assign(components, 0.0);
    std::vector<double> tol(components, opt.abs_tol);
    std::vector<double> scratch;

    auto step = [&](auto &piece, detail::PieceState &state, int max_levels) {
        if (state.next_level >= max_levels ||
            result.evaluations + piece.nodes_for_level(state.next_level) > opt.max_evaluations) {
            state.exhausted = true;
            return;
        }
        result.evaluations += piece.refine(state.next_level, scratch);
        state.estimates.push_back(scratch);
        ++state.next_level;
    };

    for (;;) {
        const bool head_done = head_state.converged(tol);
        const bool tail_done = tail_state.converged(tol);
        if (!head_done && !head_state.exhausted)
            step(head, head_state, detail::ts_levels);
        if (!tail_done && !tail_state.exhausted)
            step(tail, tail_state, detail::laguerre_levels);
        if (head_state.estimates.empty() || tail_state.estimates.empty()) {
            result.error_estimate.assign(components, std::numeric_limits<double>::infinity());
            return result;
        }

        for (std::size_t i = 0; i < components; ++i) {
            result.value[i] = head_state.estimates.back()[i] + tail_state.estimates.back()[i];
            tol[i] = std::max(opt.rel_tol * std::abs(result.value[i]), opt.abs_tol);
        }
        const bool now_head = head_state.converged(tol);
        const bool now_tail = tail_state.converged(tol);
        if (now_head && now_tail) {
            result.converged = true;
            break;
        }
        if ((now_head || head_state.exhausted) && (now_tail || tail_state.exhausted))
            break;
    }

    for (std::size_t i = 0; i < components; ++i)
        result.error_estimate[i] = head_state.last_difference(i) + tail_state.last_difference(i);
    return result;
}

template <typename F>
    requires std::invocable<F &, double>
QuadResult integrate_hos(F &&f, const QuadOptions &opt = {}) {
    auto wrapped = [&f](double s, std::span<double> out) { out[0] = f(s); };
    return integrate_hos_multi(wrapped, 1, opt).component(0);
}

template <typename F>
    requires std::invocable<F &, double>
QuadResult integrate_hos(F &&f, double rel_tol, double abs_tol) {
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = abs_tol;
    return integrate_hos(std::forward<F>(f), opt);
}

} // namespace capstat
