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

// Subcommands of the capstat tool. Each returns a process exit code and
// writes results to `out`, diagnostics (one line) to `err`.

#include "capstat/cli/config.hpp"
#include "capstat/cli/report.hpp"
#include "capstat/errors.hpp"
#include "capstat/hos.hpp"
#include "capstat/mc.hpp"
#include "capstat/parallel.hpp"
#include "capstat/specfun.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace capstat::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_verify_mismatch = 1,
    exit_parse = 2,
    exit_invariant = 3,
    exit_quadrature = 4,
    exit_sweep_rows = 5,
    exit_capability = 6,
};

inline constexpr double verify_z_limit = 4.0;

struct ComputeOptions {
    std::string model_path;
    int orders = 4;
    std::optional<double> snr_db;
    bool bits = false;
    bool csv = false;
    std::string out_path; // empty: `out`
    bool emit_config = false;
};

struct SweepOptions {
    std::string model_path;
    int orders = 4;
    std::string grid; // "start:stop:step" in dB
    bool bits = false;
    std::string out_path; // "-" or empty: `out`
};

struct VerifyOptions {
    std::string model_path;
    int orders = 4;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    double perturb_analytic = 0.0; // test hook: added to every analytic mu_n
};

struct ZfunOptions {
    int n = 1;
    double s = 1.0;
};

namespace detail {

/// Maps library exceptions onto the exit-code contract.
inline int run_guarded(std::ostream &err, const std::function<int()> &body) {
    try {
        return body();
    } catch (const config_parse_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    } catch (const config_invariant_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_invariant;
    } catch (const capability_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_capability;
    } catch (const quadrature_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_quadrature;
    } catch (const evaluation_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_quadrature;
    } catch (const domain_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_invariant;
    } catch (const factorization_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_invariant;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_verify_mismatch;
    }
}

/// Writes to `path` when given, otherwise to `fallback`.
inline void with_output(const std::string &path, std::ostream &fallback,
                        const std::function<void(std::ostream &)> &write) {
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw config_parse_error("cannot open output file " + path);
    write(file);
    if (!file)
        throw config_parse_error("failed writing " + path);
}

inline void check_orders(int orders, int minimum) {
    if (orders < minimum)
        throw config_parse_error("--orders must be at least " + std::to_string(minimum));
    if (orders > max_order)
        throw capability_error("--orders " + std::to_string(orders) + " exceeds the supported maximum " +
                               std::to_string(max_order));
}

inline double parse_double(const std::string &text, const std::string &what) {
    double v = 0.0;
    const char *first = text.data();
    const char *last = first + text.size();
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last)
        throw config_parse_error("cannot parse " + what + " from '" + text + "'");
    return v;
}

template <typename Visitor>
decltype(auto) visit_source(const ModelSource &src, Visitor &&v) {
    return std::visit(std::forward<Visitor>(v), src);
}

} // namespace detail

/// "A:B:STEP" -> A, A+STEP, ..., up to B (inclusive within rounding).
inline std::vector<double> parse_grid(const std::string &text) {
    const auto c1 = text.find(':');
    const auto c2 = (c1 == std::string::npos) ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
        throw config_parse_error("grid must look like START:STOP:STEP, got '" + text + "'");
    const double start = detail::parse_double(text.substr(0, c1), "grid start");
    const double stop = detail::parse_double(text.substr(c1 + 1, c2 - c1 - 1), "grid stop");
    const double step = detail::parse_double(text.substr(c2 + 1), "grid step");
    if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop))
        throw config_parse_error("grid needs STEP > 0 and STOP >= START");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100'000)
        throw config_parse_error("grid has too many points");
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = start + static_cast<double>(i) * step;
    return grid;
}

inline int cmd_compute(const ComputeOptions &opt, std::ostream &out, std::ostream &err) {
    return detail::run_guarded(err, [&] {
        ModelConfig cfg = load_model_config(opt.model_path);
        if (opt.snr_db)
            cfg.omega = db_to_linear(*opt.snr_db);

        if (opt.emit_config) {
            detail::with_output(opt.out_path, out, [&](std::ostream &os) { os << emit_config(cfg).dump(2) << '\n'; });
            return int{exit_ok};
        }

        detail::check_orders(opt.orders, 2);
        const ModelSource src = to_source(cfg);
        CapacityStats stats = detail::visit_source(src, [&](const auto &s) { return capacity_stats(s, opt.orders); });
        if (opt.bits)
            stats = to_bits(stats);

        const double snr_db = cfg.omega_db();
        detail::with_output(opt.out_path, out, [&](std::ostream &os) {
            if (opt.csv) {
                os << join_csv(csv_header(opt.orders)) << join_csv(csv_cells(snr_db, stats));
            } else {
                nlohmann::json j = stats_json(stats);
                j["label"] = cfg.label;
                j["snr_db"] = snr_db;
                j["omega"] = cfg.omega;
                j["unit"] = opt.bits ? "bits" : "nats";
                os << j.dump(2) << '\n';
            }
        });
        return int{exit_ok};
    });
}

inline int cmd_sweep(const SweepOptions &opt, std::ostream &out, std::ostream &err) {
    return detail::run_guarded(err, [&] {
        const ModelConfig cfg = load_model_config(opt.model_path);
        detail::check_orders(opt.orders, 2);
        const auto grid = parse_grid(opt.grid);
        const ModelSource src = to_source(cfg);
        const int threads = threads_from_env();
        const auto rows = detail::visit_source(src, [&](const auto &s) {
            return sweep(s, std::span<const double>(grid), opt.orders, QuadOptions{}, threads);
        });

        int failures = 0;
        detail::with_output(opt.out_path, out, [&](std::ostream &os) {
            os << join_csv(csv_header(opt.orders));
            for (const auto &row : rows) {
                if (row.stats) {
                    os << join_csv(csv_cells(row.snr_db, opt.bits ? to_bits(*row.stats) : *row.stats));
                } else {
                    ++failures;
                    os << join_csv(csv_error_cells(row.snr_db, opt.orders));
                }
            }
        });
        for (const auto &row : rows)
            if (!row.stats)
                err << "error: row snr_db=" << format_number(row.snr_db) << ": " << row.error << '\n';
        return failures ? int{exit_sweep_rows} : int{exit_ok};
    });
}

struct VerifyRow {
    int n = 0;
    double analytic = 0.0;
    McEstimate mc;
    double z = 0.0;
};

inline std::vector<VerifyRow> verify_rows(const FadingModel &model, int orders, std::uint64_t samples,
                                          std::uint64_t seed, double perturb, int threads) {
    const auto mu = hos_moments(model, orders);
    const auto est = estimate_moments(model, orders, samples, RngSeed{seed}, threads);
    std::vector<VerifyRow> rows;
    for (int n = 1; n <= orders; ++n) {
        VerifyRow r{n, mu[n] + perturb, est[n - 1], 0.0};
        const double diff = r.analytic - r.mc.mean;
        r.z = (r.mc.std_error > 0.0) ? diff / r.mc.std_error
                                     : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
        rows.push_back(r);
    }
    return rows;
}

inline int cmd_verify(const VerifyOptions &opt, std::ostream &out, std::ostream &err) {
    return detail::run_guarded(err, [&] {
        const ModelConfig cfg = load_model_config(opt.model_path);
        detail::check_orders(opt.orders, 1);
        if (opt.samples < 1000)
            throw config_parse_error("--samples must be at least 1000");
        if (cfg.is_awgn())
            throw capability_error("Monte Carlo verification needs a finite integer m; the AWGN limit has no sampler");
        const FadingModel model = to_fading_model(cfg);
        GammaEndSampler::integer_m(model.m());

        const auto rows = verify_rows(model, opt.orders, opt.samples, opt.seed, opt.perturb_analytic,
                                      threads_from_env());
        double worst = 0.0;
        out << "# model: " << (cfg.label.empty() ? opt.model_path : cfg.label) << '\n';
        out << "# m=" << format_number(cfg.m) << " snr_db=" << format_number(cfg.omega_db())
            << " branches=" << model.branches() << " samples=" << opt.samples << " seed=" << opt.seed << '\n';
        out << "n,analytic,mc,std_error,z\n";
        for (const auto &r : rows) {
            worst = std::max(worst, std::abs(r.z));
            out << r.n << ',' << format_number(r.analytic) << ',' << format_number(r.mc.mean) << ','
                << format_number(r.mc.std_error) << ',' << format_number(r.z, 4) << '\n';
        }
        const bool pass = worst <= verify_z_limit;
        out << "# " << (pass ? "PASS" : "FAIL") << ": max |z| = " << format_number(worst, 4)
            << (pass ? " <= " : " > ") << format_number(verify_z_limit) << '\n';
        return pass ? int{exit_ok} : int{exit_verify_mismatch};
    });
}

inline int cmd_zfun(const ZfunOptions &opt, std::ostream &out, std::ostream &err) {
    return detail::run_guarded(err, [&] {
        const double z = z_aux(opt.n, opt.s);
        out << format_number(z, 15) << '\n';
        return int{exit_ok};
    });
}

} // namespace capstat::cli
