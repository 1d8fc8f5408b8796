// SPDX-License-Identifier: Apache-2.0
//
// cellbeam: two-cell downlink beamforming solvers and large-system limits
// Copyright (C) 2026 The cellbeam authors
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

// cellbeam-cli: command line front end over the C interface.

#include "cellbeam/cellbeam.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace
{

enum ExitCode
{
    kOk = 0,
    kConfig = 2,
    kInfeasible = 3,
    kNumeric = 4
};

int exit_code(cb_status status)
{
    switch (status)
    {
    case CB_OK:
        return kOk;
    case CB_ERR_CONFIG:
    case CB_ERR_INVALID_ARGUMENT:
    case CB_ERR_IO:
        return kConfig;
    case CB_ERR_INFEASIBLE:
        return kInfeasible;
    default:
        return kNumeric;
    }
}

struct CliFailure
{
    int code;
};

void check(cb_status status, const char *what)
{
    if (status == CB_OK)
        return;
    std::cerr << "cellbeam: " << what << ": " << cb_status_name(status);
    const std::string detail = cb_last_error();
    if (!detail.empty())
        std::cerr << ": " << detail;
    std::cerr << '\n';
    throw CliFailure{exit_code(status)};
}

struct FreeString
{
    void operator()(char *p) const { cb_string_free(p); }
};
using OwnedString = std::unique_ptr<char, FreeString>;

template <class H, void (*Destroy)(H *)> struct Handle
{
    H *ptr = nullptr;
    Handle() = default;
    Handle(const Handle &) = delete;
    Handle &operator=(const Handle &) = delete;
    ~Handle() { Destroy(ptr); }
};
using ConfigHandle = Handle<cb_config, cb_config_destroy>;
using ChannelsHandle = Handle<cb_channels, cb_channels_destroy>;
using ExperimentHandle = Handle<cb_experiment, cb_experiment_destroy>;

void emit(const std::string &text, const std::string &path)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        if (!text.empty() && text.back() != '\n')
            std::cout << '\n';
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        std::cerr << "cellbeam: cannot open '" << path << "' for writing\n";
        throw CliFailure{kConfig};
    }
    out << text;
    if (!text.empty() && text.back() != '\n')
        out << '\n';
    if (!out)
    {
        std::cerr << "cellbeam: failed writing '" << path << "'\n";
        throw CliFailure{kConfig};
    }
}

cb_scheme scheme_code(const std::string &name)
{
    cb_scheme s{};
    check(cb_scheme_parse(name.c_str(), &s), "scheme");
    return s;
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

struct Sweep
{
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

// "beta:lo:hi:step"
Sweep parse_sweep(const std::string &text)
{
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ':'))
        parts.push_back(item);
    if (parts.size() != 4 || parts[0] != "beta")
    {
        std::cerr << "cellbeam: --sweep expects beta:lo:hi:step\n";
        throw CliFailure{kConfig};
    }
    try
    {
        return {std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3])};
    }
    catch (const std::exception &)
    {
        std::cerr << "cellbeam: --sweep has a non-numeric bound\n";
        throw CliFailure{kConfig};
    }
}

struct SolveArgs
{
    std::string config;
    std::string scheme;
    std::optional<double> gamma;
    bool maxmin = false;
    std::string baseline;
    std::uint64_t stream = 0;
    double tolerance = 0.0;
    std::string out;
};

int run_solve(const SolveArgs &a)
{
    ConfigHandle cfg;
    check(cb_config_load(a.config.c_str(), &cfg.ptr), "config");
    ChannelsHandle ch;
    check(cb_channels_sample(cfg.ptr, a.stream, &ch.ptr), "channels");

    char *raw = nullptr;
    cb_status status = CB_OK;
    if (!a.baseline.empty())
        status = cb_baseline_max_min(ch.ptr, a.baseline.c_str(), &raw);
    else if (a.gamma)
        status = cb_solve_fixed_gamma(ch.ptr, scheme_code(a.scheme), *a.gamma, &raw);
    else
        status = cb_solve_max_min(ch.ptr, scheme_code(a.scheme), a.tolerance, &raw);
    OwnedString json(raw);
    if (json)
        emit(json.get(), a.out);
    check(status, "solve");
    return kOk;
}

struct AsymptoticArgs
{
    std::string scheme;
    std::optional<double> beta;
    double epsilon = 0.0;
    double snr_db = 10.0;
    std::string sweep;
    std::string out;
};

int run_asymptotic(const AsymptoticArgs &a)
{
    Sweep s;
    if (!a.sweep.empty())
        s = parse_sweep(a.sweep);
    else if (a.beta)
        s = {*a.beta, *a.beta, 1.0};
    else
    {
        std::cerr << "cellbeam: asymptotic needs --beta or --sweep\n";
        return kConfig;
    }
    char *raw = nullptr;
    check(cb_curve_csv(a.scheme.c_str(), s.lo, s.hi, s.step, a.epsilon, a.snr_db, &raw), "asymptotic");
    OwnedString csv(raw);
    emit(csv.get(), a.out);
    return kOk;
}

struct MonteCarloArgs
{
    std::string spec;
    std::string out;
    std::string summary;
};

int run_montecarlo(const MonteCarloArgs &a)
{
    ExperimentHandle exp;
    check(cb_experiment_load(a.spec.c_str(), &exp.ptr), "spec");
    std::string out = a.out;
    if (out.empty())
    {
        char *raw = nullptr;
        check(cb_experiment_output_path(exp.ptr, &raw), "spec");
        out = OwnedString(raw).get();
    }
    char *csv_raw = nullptr;
    char *summary_raw = nullptr;
    check(cb_experiment_run(exp.ptr, &csv_raw, &summary_raw), "montecarlo");
    OwnedString csv(csv_raw);
    OwnedString summary(summary_raw);
    emit(csv.get(), out);

    std::string summary_path = a.summary;
    if (summary_path.empty() && !out.empty() && out != "-")
        summary_path = out + ".summary.json";
    if (summary_path.empty())
        std::cerr << summary.get() << '\n';
    else
        emit(summary.get(), summary_path);
    return kOk;
}

struct OptimalBetaArgs
{
    std::string scheme;
    double epsilon = 0.0;
    double snr_db = 10.0;
    std::string out;
};

int run_optimal_beta(const OptimalBetaArgs &a)
{
    char *raw = nullptr;
    check(cb_optimal_beta(scheme_code(a.scheme), db_to_linear(a.snr_db), a.epsilon, &raw), "optimal-beta");
    OwnedString json(raw);
    emit(json.get(), a.out);
    return kOk;
}

struct CompareArgs
{
    std::string spec;
    std::string out;
};

int run_compare(const CompareArgs &a)
{
    ExperimentHandle exp;
    check(cb_experiment_load(a.spec.c_str(), &exp.ptr), "spec");
    char *raw = nullptr;
    check(cb_experiment_compare(exp.ptr, &raw), "compare");
    OwnedString csv(raw);
    emit(csv.get(), a.out);
    return kOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Two-cell downlink max-min SINR beamforming"};
    app.set_version_flag("--version", std::string(cb_version()));
    app.require_subcommand(1);

    SolveArgs solve;
    auto *solve_cmd = app.add_subcommand("solve", "Solve one channel draw");
    solve_cmd->add_option("--config", solve.config, "System config (JSON or key=value)")->required();
    auto *scheme_opt = solve_cmd->add_option("--scheme", solve.scheme, "scp, cbf or mcp");
    auto *gamma_opt = solve_cmd->add_option("--gamma", solve.gamma, "Fixed SINR target");
    auto *maxmin_opt = solve_cmd->add_flag("--maxmin", solve.maxmin, "Max-min SINR under the power budget");
    auto *baseline_opt =
        solve_cmd->add_option("--baseline", solve.baseline, "scp_zf, gzf, mcp_zf or td_scp instead of --scheme");
    gamma_opt->excludes(maxmin_opt);
    baseline_opt->excludes(scheme_opt)->excludes(gamma_opt);
    solve_cmd->add_option("--stream", solve.stream, "Channel stream id")->capture_default_str();
    solve_cmd->add_option("--tolerance", solve.tolerance, "Max-min SINR tolerance");
    solve_cmd->add_option("--out", solve.out, "Output file (default stdout)");

    AsymptoticArgs asym;
    auto *asym_cmd = app.add_subcommand("asymptotic", "Large-system limits as CSV");
    asym_cmd->add_option("--scheme", asym.scheme, "scp, cbf, mcp or td_scp")->required();
    asym_cmd->add_option("--beta", asym.beta, "Users per antenna");
    asym_cmd->add_option("--epsilon", asym.epsilon, "Cross-cell gain")->required();
    asym_cmd->add_option("--snr-db", asym.snr_db, "SNR in dB")->required();
    asym_cmd->add_option("--sweep", asym.sweep, "beta:lo:hi:step");
    asym_cmd->add_option("--out", asym.out, "Output file (default stdout)");

    MonteCarloArgs mc;
    auto *mc_cmd = app.add_subcommand("montecarlo", "Run an experiment spec");
    mc_cmd->add_option("--spec", mc.spec, "Experiment spec (JSON)")->required();
    mc_cmd->add_option("--out", mc.out, "CSV output (default: spec output_path, else stdout)");
    mc_cmd->add_option("--summary", mc.summary, "Summary JSON output");

    OptimalBetaArgs ob;
    auto *ob_cmd = app.add_subcommand("optimal-beta", "Optimal cell loading");
    ob_cmd->add_option("--scheme", ob.scheme, "scp, cbf or mcp")->required();
    ob_cmd->add_option("--epsilon", ob.epsilon, "Cross-cell gain")->required();
    ob_cmd->add_option("--snr-db", ob.snr_db, "SNR in dB")->required();
    ob_cmd->add_option("--out", ob.out, "Output file (default stdout)");

    CompareArgs cmp;
    auto *cmp_cmd = app.add_subcommand("compare", "Experiment rows with large-system overlay");
    cmp_cmd->add_option("--spec", cmp.spec, "Experiment spec (JSON)")->required();
    cmp_cmd->add_option("--out", cmp.out, "Output file (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kConfig;
    }

    try
    {
        if (solve_cmd->parsed())
        {
            if (solve.baseline.empty() && solve.scheme.empty())
            {
                std::cerr << "cellbeam: solve needs --scheme or --baseline\n";
                return kConfig;
            }
            if (solve.baseline.empty() && !solve.gamma && !solve.maxmin)
            {
                std::cerr << "cellbeam: solve needs --gamma or --maxmin\n";
                return kConfig;
            }
            return run_solve(solve);
        }
        if (asym_cmd->parsed())
            return run_asymptotic(asym);
        if (mc_cmd->parsed())
            return run_montecarlo(mc);
        if (ob_cmd->parsed())
            return run_optimal_beta(ob);
        if (cmp_cmd->parsed())
            return run_compare(cmp);
    }
    catch (const CliFailure &f)
    {
        return f.code;
    }
    catch (const std::exception &e)
    {
        std::cerr << "cellbeam: " << e.what() << '\n';
        return kNumeric;
    }
    return kOk;
}
