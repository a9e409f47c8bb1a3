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

// JSON model files.
//
//   {
//     "label": "free text",
//     "m": 2,                          // number, or "inf" for the AWGN limit
//     "omega_db": 10,                  // or "omega": 10 (linear), exactly one
//     "eta": [[1, 0], [0.5, 0.5]],     // optional, default zero
//     "C": [[[1, 0], [0.5, 0]],
//           [[0.5, 0], [1, 0]]]
//   }
//
// Instead of C/eta a file may carry the normalized pair "R"/"lambda", which
// must satisfy trace(R) + lambda^H lambda = 1 within 1e-8. Complex entries are
// [re, im] pairs; a bare number is read as a real entry.

#include "capstat/errors.hpp"
#include "capstat/fading.hpp"
#include "capstat/hos.hpp"
#include "capstat/linalg.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace capstat::cli {

/// Malformed or incomplete configuration document.
class config_parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed document whose contents violate a model invariant.
class config_invariant_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parsed and validated model file.
struct ModelConfig {
    std::string label;
    double m = 1.0; // +inf selects the AWGN limit
    double omega = 1.0;
    ComplexMatrix R;
    ComplexVector lambda;

    bool is_awgn() const noexcept { return std::isinf(m); }
    double omega_db() const { return linear_to_db(omega); }
};

using ModelSource = std::variant<FadingModel, AwgnChannel>;

namespace detail {

inline complex parse_complex(const nlohmann::json &j, const std::string &where) {
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw config_parse_error(where + ": expected a number or an [re, im] pair");
}

inline ComplexVector parse_vector(const nlohmann::json &j, const std::string &name) {
    if (!j.is_array() || j.empty())
        throw config_parse_error(name + ": expected a non-empty list");
    ComplexVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v[i] = parse_complex(j[i], name + "[" + std::to_string(i) + "]");
    return v;
}

inline ComplexMatrix parse_matrix(const nlohmann::json &j, const std::string &name) {
    if (!j.is_array() || j.empty())
        throw config_parse_error(name + ": expected a non-empty list of rows");
    const std::size_t n = j.size();
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n)
            throw config_parse_error(name + ": row " + std::to_string(i) + " must have " + std::to_string(n) +
                                     " entries");
        for (std::size_t k = 0; k < n; ++k)
            a(i, k) = parse_complex(j[i][k], name + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return a;
}

inline nlohmann::json complex_json(const complex &z) { return nlohmann::json::array({z.real(), z.imag()}); }

// Names the entry with the largest Hermitian defect, or returns empty if within tolerance.
inline std::string hermitian_violation(const ComplexMatrix &a, const std::string &name) {
    const double tol = 1e-12 * std::max(a.max_abs(), 1e-300);
    double worst = 0.0;
    std::size_t wi = 0, wk = 0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = i; k < a.dim(); ++k) {
            const double d = std::abs(a(i, k) - std::conj(a(k, i)));
            if (d > worst) {
                worst = d;
                wi = i;
                wk = k;
            }
        }
    if (worst <= tol)
        return {};
    std::ostringstream os;
    os << name << " is not Hermitian: " << name << "[" << wi << "][" << wk << "] != conj(" << name << "[" << wk
       << "][" << wi << "])";
    return os.str();
}

} // namespace detail

/// The correlated model for the config (finite m only; the AWGN config is
/// still validated against the normalization invariant).
inline FadingModel to_fading_model(const ModelConfig &cfg) {
    try {
        const double m = cfg.is_awgn() ? 1.0 : cfg.m;
        return FadingModel::from_normalized(m, cfg.omega, cfg.R, cfg.lambda);
    } catch (const domain_error &e) {
        throw config_invariant_error(e.what());
    }
}

inline ModelConfig parse_model_config(const nlohmann::json &doc) {
    if (!doc.is_object())
        throw config_parse_error("model file must contain a JSON object");

    ModelConfig cfg;
    if (doc.contains("label")) {
        if (!doc["label"].is_string())
            throw config_parse_error("label: expected a string");
        cfg.label = doc["label"].get<std::string>();
    }

    if (!doc.contains("m"))
        throw config_parse_error("missing field m");
    const auto &jm = doc["m"];
    if (jm.is_string() && (jm.get<std::string>() == "inf" || jm.get<std::string>() == "infinity"))
        cfg.m = std::numeric_limits<double>::infinity();
    else if (jm.is_number())
        cfg.m = jm.get<double>();
    else
        throw config_parse_error("m: expected a number or \"inf\"");

    const bool has_db = doc.contains("omega_db"), has_lin = doc.contains("omega");
    if (has_db == has_lin)
        throw config_parse_error("exactly one of omega_db and omega must be given");
    const auto &jo = has_db ? doc["omega_db"] : doc["omega"];
    if (!jo.is_number())
        throw config_parse_error(std::string(has_db ? "omega_db" : "omega") + ": expected a number");
    cfg.omega = has_db ? db_to_linear(jo.get<double>()) : jo.get<double>();

    const bool has_c = doc.contains("C"), has_r = doc.contains("R");
    if (has_c == has_r)
        throw config_parse_error("exactly one of C (with optional eta) and R (with lambda) must be given");

    if (has_c) {
        if (doc.contains("lambda"))
            throw config_parse_error("lambda belongs with R, not with C");
        const ComplexMatrix C = detail::parse_matrix(doc["C"], "C");
        const ComplexVector eta = doc.contains("eta") ? detail::parse_vector(doc["eta"], "eta")
                                                      : ComplexVector(C.dim());
        if (eta.dim() != C.dim())
            throw config_parse_error("eta has " + std::to_string(eta.dim()) + " entries but C is " +
                                     std::to_string(C.dim()) + "x" + std::to_string(C.dim()));
        if (auto msg = detail::hermitian_violation(C, "C"); !msg.empty())
            throw config_invariant_error(msg);
        if (!is_hermitian_psd(C, 1e-12))
            throw config_invariant_error("C is not positive semi-definite");
        try {
            auto [R, lambda] = normalize(eta, C);
            cfg.R = std::move(R);
            cfg.lambda = std::move(lambda);
        } catch (const domain_error &e) {
            throw config_invariant_error(e.what());
        }
    } else {
        if (doc.contains("eta"))
            throw config_parse_error("eta belongs with C, not with R");
        if (!doc.contains("lambda"))
            throw config_parse_error("R requires lambda");
        cfg.R = detail::parse_matrix(doc["R"], "R");
        cfg.lambda = detail::parse_vector(doc["lambda"], "lambda");
        if (cfg.lambda.dim() != cfg.R.dim())
            throw config_parse_error("lambda and R dimensions differ");
        if (auto msg = detail::hermitian_violation(cfg.R, "R"); !msg.empty())
            throw config_invariant_error(msg);
    }

    if (!(cfg.m > 0.0))
        throw config_invariant_error("m must be positive");
    if (!(cfg.omega > 0.0) || !std::isfinite(cfg.omega))
        throw config_invariant_error("omega must be finite and positive");
    (void)to_fading_model(cfg); // normalization invariant, PSD check
    return cfg;
}

inline ModelConfig load_model_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw config_parse_error("cannot open model file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        throw config_parse_error(path + ": " + e.what());
    }
    return parse_model_config(doc);
}

inline ModelSource to_source(const ModelConfig &cfg) {
    FadingModel model = to_fading_model(cfg);
    if (cfg.is_awgn())
        return AwgnChannel{cfg.omega};
    return model;
}

/// Normalized form of a config; parse_model_config(emit_config(c)) reproduces c exactly.
inline nlohmann::json emit_config(const ModelConfig &cfg) {
    nlohmann::json doc;
    doc["label"] = cfg.label;
    if (cfg.is_awgn())
        doc["m"] = "inf";
    else
        doc["m"] = cfg.m;
    doc["omega"] = cfg.omega;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < cfg.R.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < cfg.R.dim(); ++k)
            row.push_back(detail::complex_json(cfg.R(i, k)));
        rows.push_back(std::move(row));
    }
    doc["R"] = std::move(rows);
    nlohmann::json lam = nlohmann::json::array();
    for (const auto &z : cfg.lambda)
        lam.push_back(detail::complex_json(z));
    doc["lambda"] = std::move(lam);
    return doc;
}

} // namespace capstat::cli
