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

// CSV/JSON rendering of capacity statistics. Numbers go through
// std::to_chars, so output never depends on the process locale.

#include "capstat/hos.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace capstat::cli {

inline constexpr int csv_digits = 9;
inline constexpr const char *undef_token = "undef";
inline constexpr const char *err_token = "err";

inline std::string format_number(double x, int digits = csv_digits) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, digits);
    return std::string(buf, r.ptr);
}

inline std::string format_optional(const std::optional<double> &x) {
    return x ? format_number(*x) : std::string(undef_token);
}

/// mu_n -> mu_n / (ln 2)^n with every derived metric recomputed in bits.
inline CapacityStats to_bits(const CapacityStats &nats) {
    std::vector<double> mu = nats.mu;
    double scale = 1.0;
    for (double &v : mu) {
        scale /= std::numbers::ln2;
        v *= scale;
    }
    return stats_from_moments(mu);
}

inline std::vector<std::string> csv_header(int orders) {
    std::vector<std::string> cols{"snr_db"};
    for (int n = 1; n <= orders; ++n)
        cols.push_back("mu" + std::to_string(n));
    for (const char *c : {"variance", "aod", "reliability_pct", "skewness", "kurtosis"})
        cols.emplace_back(c);
    for (int n = 2; n <= orders; ++n)
        cols.push_back("mu_ratio_" + std::to_string(n));
    return cols;
}

inline std::string join_csv(const std::vector<std::string> &cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

inline std::vector<std::string> csv_cells(double snr_db, const CapacityStats &s) {
    std::vector<std::string> cells{format_number(snr_db)};
    for (double v : s.mu)
        cells.push_back(format_number(v));
    cells.push_back(format_number(s.variance));
    cells.push_back(format_number(s.aod));
    cells.push_back(format_number(s.reliability_pct));
    cells.push_back(format_optional(s.skewness));
    cells.push_back(format_optional(s.kurtosis));
    for (int n = 2; n <= s.orders; ++n)
        cells.push_back(format_number(s.mu_n(n) / std::pow(s.mu_n(1), n)));
    return cells;
}

inline std::vector<std::string> csv_error_cells(double snr_db, int orders) {
    std::vector<std::string> cells(csv_header(orders).size(), err_token);
    cells[0] = format_number(snr_db);
    return cells;
}

inline nlohmann::json stats_json(const CapacityStats &s) {
    auto opt = [](const std::optional<double> &x) -> nlohmann::json {
        if (x)
            return *x;
        return undef_token;
    };
    nlohmann::json j;
    j["orders"] = s.orders;
    j["mu"] = s.mu;
    j["variance"] = s.variance;
    j["aod"] = s.aod;
    j["reliability_pct"] = s.reliability_pct;
    j["skewness"] = opt(s.skewness);
    j["kurtosis"] = opt(s.kurtosis);
    std::vector<double> ratios;
    for (int n = 2; n <= s.orders; ++n)
        ratios.push_back(s.mu_n(n) / std::pow(s.mu_n(1), n));
    j["mu_ratio"] = ratios;
    return j;
}

} // namespace capstat::cli
