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

// Fading models and their moment generating functions M(s) = E[exp(-s gamma)].
//
// The correlated generalized-Rician model describes gamma_end = r^H r for a
// complex Gaussian vector r with mean eta and covariance C, with m-fold
// diversity per branch. With R = C / (eta^H eta + tr C), lambda = eta /
// sqrt(eta^H eta + tr C) and the eigen-decomposition R = U diag(d) U^H,
//
//   log M(s) = -s Omega sum_i |lt_i|^2 / (1 + s Omega d_i / m)
//              - m sum_i log(1 + s Omega d_i / m),       lt = U^H lambda.
//
// Every evaluation is O(L) once the model has been built.

#include "capstat/errors.hpp"
#include "capstat/linalg.hpp"

#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace capstat {

/// M(s) together with dM/ds.
struct MgfPoint {
    double value = 1.0;
    double derivative = 0.0;
};

/// Anything that can produce (M, M') at an abscissa s >= 0.
template <typename T>
concept MgfSource = requires(const T &src, double s) {
    { src.at(s) } -> std::convertible_to<MgfPoint>;
};

namespace detail {

inline void check_abscissa(double s, const char *who) {
    if (!(s >= 0.0) || !std::isfinite(s))
        throw domain_error(std::string(who) + ": s must be finite and >= 0, got " + std::to_string(s));
}

inline constexpr double psd_tolerance = 1e-12;

} // namespace detail

struct Normalized {
    ComplexMatrix R;
    ComplexVector lambda;
};

/// R = C / (eta^H eta + tr C), lambda = eta / sqrt(eta^H eta + tr C).
inline Normalized normalize(const ComplexVector &eta, const ComplexMatrix &C) {
    if (C.dim() == 0)
        throw domain_error("normalize: empty covariance matrix");
    if (eta.dim() != C.dim())
        throw domain_error("normalize: mean vector has " + std::to_string(eta.dim()) +
                           " entries but covariance is " + std::to_string(C.dim()) + "x" +
                           std::to_string(C.dim()));
    if (!is_hermitian_psd(C, detail::psd_tolerance))
        throw domain_error("normalize: covariance matrix is not Hermitian positive semi-definite");
    const double denom = eta.squared_norm() + trace(C).real();
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw domain_error("normalize: eta^H eta + tr(C) must be positive");

    Normalized out{(C + C.adjoint()) * (0.5 / denom), ComplexVector(eta.dim())};
    const double root = std::sqrt(denom);
    for (std::size_t i = 0; i < eta.dim(); ++i)
        out.lambda[i] = eta[i] / root;
    return out;
}

/// Correlated generalized-Rician MRC model. Immutable once built.
class FadingModel {
public:
    /// From the physical mean and covariance of the channel-gain vector.
    static FadingModel build(double m, double omega, const ComplexVector &eta, const ComplexMatrix &C) {
        auto [R, lambda] = normalize(eta, C);
        return FadingModel(m, omega, std::move(R), std::move(lambda));
    }

    /// From already-normalized (R, lambda); trace(R) + lambda^H lambda must be 1 within `tol`.
    static FadingModel from_normalized(double m, double omega, ComplexMatrix R, ComplexVector lambda,
                                       double tol = 1e-8) {
        if (R.dim() == 0 || R.dim() != lambda.dim())
            throw domain_error("from_normalized: R and lambda dimensions differ");
        if (!is_hermitian_psd(R, detail::psd_tolerance))
            throw domain_error("from_normalized: R is not Hermitian positive semi-definite");
        const double total = trace(R).real() + lambda.squared_norm();
        if (!(std::abs(total - 1.0) <= tol))
            throw domain_error("from_normalized: trace(R) + lambda^H lambda = " + std::to_string(total) +
                               ", expected 1");
        return FadingModel(m, omega, std::move(R), std::move(lambda));
    }

    double m() const noexcept { return m_; }
    double omega() const noexcept { return omega_; }
    std::size_t branches() const noexcept { return R_.dim(); }
    const ComplexMatrix &R() const noexcept { return R_; }
    const ComplexVector &lambda() const noexcept { return lambda_; }
    const Eigensystem &spectral() const noexcept { return spectral_; }
    const ComplexVector &lambda_tilde() const noexcept { return lambda_tilde_; }

    /// Same (m, R, lambda) at a different average output SNR.
    FadingModel with_omega(double omega) const {
        check_positive(omega, "omega");
        FadingModel copy = *this;
        copy.omega_ = omega;
        return copy;
    }

    /// Per-branch average SNR Omega * diag(R + lambda lambda^H).
    std::vector<double> branch_snr() const {
        std::vector<double> out(branches());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = omega_ * (R_(i, i).real() + std::norm(lambda_[i]));
        return out;
    }

    double log_mgf(double s) const {
        detail::check_abscissa(s, "mgf");
        const double k = s * omega_ / m_;
        double acc = 0.0;
        for (std::size_t i = 0; i < eig_.size(); ++i) {
            const double q = 1.0 + k * eig_[i];
            acc -= s * omega_ * los_[i] / q + m_ * std::log1p(k * eig_[i]);
        }
        return acc;
    }

    double mgf(double s) const { return std::exp(log_mgf(s)); }

    double mgf_derivative(double s) const { return at(s).derivative; }

    MgfPoint at(double s) const {
        detail::check_abscissa(s, "mgf");
        const double k = s * omega_ / m_;
        double log_value = 0.0;
        double bracket = 0.0;
        for (std::size_t i = 0; i < eig_.size(); ++i) {
            const double q = 1.0 + k * eig_[i];
            log_value -= s * omega_ * los_[i] / q + m_ * std::log1p(k * eig_[i]);
            bracket += eig_[i] / q + los_[i] / (q * q);
        }
        const double value = std::exp(log_value);
        return {value, -omega_ * value * bracket};
    }

private:
    FadingModel(double m, double omega, ComplexMatrix R, ComplexVector lambda)
        : m_(m), omega_(omega), R_(std::move(R)), lambda_(std::move(lambda)) {
        check_positive(m, "m");
        check_positive(omega, "omega");
        spectral_ = eigen_hermitian(R_);
        const double tr = trace(R_).real();
        eig_ = spectral_.values;
        for (auto &d : eig_) {
            if (d < 0.0) {
                if (d < -detail::psd_tolerance * tr)
                    throw domain_error("FadingModel: R has a negative eigenvalue " + std::to_string(d));
                d = 0.0;
            }
        }
        lambda_tilde_ = spectral_.vectors.adjoint() * lambda_;
        los_.resize(eig_.size());
        for (std::size_t i = 0; i < los_.size(); ++i)
            los_[i] = std::norm(lambda_tilde_[i]);
    }

    static void check_positive(double x, const char *name) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw domain_error(std::string("FadingModel: ") + name + " must be finite and positive, got " +
                               std::to_string(x));
    }

    double m_;
    double omega_;
    ComplexMatrix R_;
    ComplexVector lambda_;
    Eigensystem spectral_;
    ComplexVector lambda_tilde_;
    std::vector<double> eig_; // eigenvalues of R, tiny negatives clamped to 0
    std::vector<double> los_; // |lambda_tilde_i|^2
};

inline FadingModel build_model(double m, double omega, const ComplexVector &eta, const ComplexMatrix &C) {
    return FadingModel::build(m, omega, eta, C);
}

inline double mgf(const FadingModel &model, double s) { return model.mgf(s); }
inline double mgf_derivative(const FadingModel &model, double s) { return model.mgf_derivative(s); }

/// m -> infinity limit of the correlated model: deterministic SNR Omega.
inline double awgn_limit_mgf(const FadingModel &model, double s) {
    detail::check_abscissa(s, "awgn_limit_mgf");
    return std::exp(-s * model.omega());
}

/// Deterministic-SNR source (AWGN channel), M(s) = exp(-s Omega).
struct AwgnChannel {
    double omega;

    MgfPoint at(double s) const {
        detail::check_abscissa(s, "awgn mgf");
        const double v = std::exp(-s * omega);
        return {v, -omega * v};
    }

    AwgnChannel with_omega(double new_omega) const { return {new_omega}; }
};

// ---------------------------------------------------------------------------
// Single-branch closed forms and the independent-branch product.

enum class BranchKind { Rayleigh, NakagamiM, Rician };

struct BranchMgf {
    BranchKind kind = BranchKind::Rayleigh;
    double gbar = 1.0;  // branch average SNR
    double shape = 0.0; // Nakagami m, or Rician K = |mean|^2 / variance

    static BranchMgf rayleigh(double gbar) { return {BranchKind::Rayleigh, gbar, 0.0}; }
    static BranchMgf nakagami(double m, double gbar) { return {BranchKind::NakagamiM, gbar, m}; }
    static BranchMgf rician(double k, double gbar) { return {BranchKind::Rician, gbar, k}; }

    void validate() const {
        if (!(gbar > 0.0) || !std::isfinite(gbar))
            throw domain_error("BranchMgf: gbar must be positive");
        if (kind == BranchKind::NakagamiM && !(shape >= 0.5))
            throw domain_error("BranchMgf: Nakagami m must be >= 0.5");
        if (kind == BranchKind::Rician && !(shape >= 0.0))
            throw domain_error("BranchMgf: Rician K must be >= 0");
    }
};

inline MgfPoint branch_mgf(const BranchMgf &b, double s) {
    detail::check_abscissa(s, "branch_mgf");
    b.validate();
    switch (b.kind) {
    case BranchKind::Rayleigh: {
        const double q = 1.0 + s * b.gbar;
        return {1.0 / q, -b.gbar / (q * q)};
    }
    case BranchKind::NakagamiM: {
        const double q = 1.0 + s * b.gbar / b.shape;
        const double v = std::exp(-b.shape * std::log1p(s * b.gbar / b.shape));
        return {v, -b.gbar * v / q};
    }
    case BranchKind::Rician: {
        const double k = b.shape;
        const double q = 1.0 + k + s * b.gbar;
        const double v = (1.0 + k) / q * std::exp(-k * s * b.gbar / q);
        const double dlog = -b.gbar / q - k * b.gbar * (1.0 + k) / (q * q);
        return {v, v * dlog};
    }
    }
    return {};
}

/// Independent branches: M = prod M_l, M' = sum_l M'_l prod_{k != l} M_k.
inline MgfPoint independent_mgf(std::span<const BranchMgf> branches, double s) {
    if (branches.empty())
        throw domain_error("independent_mgf: no branches");
    const std::size_t n = branches.size();
    std::vector<MgfPoint> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = branch_mgf(branches[i], s);

    // prefix[i] = prod_{k<i} M_k; walking back with a suffix product avoids dividing by M_l.
    std::vector<double> prefix(n + 1, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] * pts[i].value;
    double suffix = 1.0;
    double derivative = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        derivative += pts[i].derivative * prefix[i] * suffix;
        suffix *= pts[i].value;
    }
    return {prefix[n], derivative};
}

/// Owning wrapper so a branch list can be used wherever an MgfSource is expected.
class IndependentBranches {
public:
    explicit IndependentBranches(std::vector<BranchMgf> branches) : branches_(std::move(branches)) {
        if (branches_.empty())
            throw domain_error("IndependentBranches: no branches");
        for (const auto &b : branches_)
            b.validate();
    }

    MgfPoint at(double s) const { return independent_mgf(branches_, s); }
    const std::vector<BranchMgf> &branches() const noexcept { return branches_; }

    double omega() const noexcept {
        double acc = 0.0;
        for (const auto &b : branches_)
            acc += b.gbar;
        return acc;
    }

    /// Rescales every branch so the branch SNRs sum to `new_omega`.
    IndependentBranches with_omega(double new_omega) const {
        const double k = new_omega / omega();
        auto copy = branches_;
        for (auto &b : copy)
            b.gbar *= k;
        return IndependentBranches(std::move(copy));
    }

private:
    std::vector<BranchMgf> branches_;
};

static_assert(MgfSource<FadingModel>);
static_assert(MgfSource<AwgnChannel>);
static_assert(MgfSource<IndependentBranches>);

} // namespace capstat
