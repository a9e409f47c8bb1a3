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

#include "capstat/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
    using namespace capstat::cli;

    CLI::App app{"capstat: higher-order statistics of MRC channel capacity"};
    app.require_subcommand(1);

    ComputeOptions compute;
    bool want_json = false;
    auto *c = app.add_subcommand("compute", "capacity moments and derived metrics at one SNR");
    c->add_option("--model", compute.model_path, "model file (JSON)")->required();
    c->add_option("--orders", compute.orders, "highest moment order (>= 2)");
    c->add_option("--snr-db", compute.snr_db, "override the model's average SNR, dB");
    c->add_flag("--bits", compute.bits, "report in bits instead of nats");
    auto *json_flag = c->add_flag("--json", want_json, "JSON output (default)");
    auto *csv_flag = c->add_flag("--csv", compute.csv, "CSV output");
    json_flag->excludes(csv_flag);
    c->add_option("--out", compute.out_path, "write to this file instead of stdout");
    c->add_flag("--emit-config", compute.emit_config, "print the normalized model file and exit");

    SweepOptions sweep;
    auto *s = app.add_subcommand("sweep", "CSV table over an SNR grid");
    s->add_option("--model", sweep.model_path, "model file (JSON)")->required();
    s->add_option("--orders", sweep.orders, "highest moment order (>= 2)");
    s->add_option("--grid", sweep.grid, "START:STOP:STEP in dB")->required();
    s->add_flag("--bits", sweep.bits, "report in bits instead of nats");
    s->add_option("--out", sweep.out_path, "output CSV path ('-' for stdout)")->required();

    VerifyOptions verify;
    auto *v = app.add_subcommand("verify", "compare analytic moments with Monte Carlo");
    v->add_option("--model", verify.model_path, "model file (JSON)")->required();
    v->add_option("--orders", verify.orders, "highest moment order");
    v->add_option("--samples", verify.samples, "Monte Carlo sample count (>= 1000)");
    v->add_option("--seed", verify.seed, "generator seed");
    v->add_option("--perturb-analytic", verify.perturb_analytic)->group("");

    ZfunOptions zfun;
    auto *z = app.add_subcommand("zfun", "print the kernel Z_n(s)");
    z->add_option("--n", zfun.n, "order")->required();
    z->add_option("--s", zfun.s, "abscissa (> 0)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_parse;
    }

    if (*c)
        return cmd_compute(compute, std::cout, std::cerr);
    if (*s)
        return cmd_sweep(sweep, std::cout, std::cerr);
    if (*v)
        return cmd_verify(verify, std::cout, std::cerr);
    return cmd_zfun(zfun, std::cout, std::cerr);
}
