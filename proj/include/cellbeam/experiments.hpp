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

#pragma once

#include "cellbeam/baselines.hpp"
#include "cellbeam/channel.hpp"
#include "cellbeam/downlink.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cellbeam
{

enum class ExperimentMode
{
    OPTIMIZED,     // finite-N max-min per draw
    ASYMPTOTIC_BF, // large-system beamformers applied at the limiting target
    LSA_ONLY       // closed forms, no draws
};

std::string_view to_string(ExperimentMode mode);
std::optional<ExperimentMode> parse_mode(std::string_view text);

// An optimized scheme or a baseline.
struct Contender
{
    std::variant<Scheme, Baseline> id;

    std::string name() const;
    bool is_baseline() const { return std::holds_alternative<Baseline>(id); }
};

std::optional<Contender> parse_contender(std::string_view text);

struct ExperimentSpec
{
    std::vector<Contender> schemes;
    std::vector<double> beta_grid;
    std::vector<double> epsilon_grid;
    std::vector<double> snr_db_grid;
    int n_draws = 1;
    SystemConfig base; // n_antennas, sigma2, seed; K, epsilon, P come from the grids
    ExperimentMode mode = ExperimentMode::OPTIMIZED;
    std::string output_path;
    bool record_wall_time = false;
    int threads = 0; // 0: CELLBEAM_THREADS or hardware concurrency
    ZfPowerPolicy zf_power = ZfPowerPolicy::BalancedSinr;
    MaxMinSettings solver;

    // Throws ConfigError.
    void validate() const;
};

// JSON document, see README for the keys.
ExperimentSpec parse_experiment_spec(const std::string &text);
ExperimentSpec load_experiment_spec(const std::string &path);

struct ResultRow
{
    std::string scheme;
    double beta = 0.0; // K/N actually simulated (per-slot K/(2N) for TD_SCP)
    double epsilon = 0.0;
    double snr_db = 0.0;
    int draw_id = 0;
    double gamma = 0.0;
    double rate_nats = 0.0;
    double rate_bits = 0.0;
    std::array<double, 2> per_bs_power{0.0, 0.0};
    bool converged = false;
    double wall_time_ms = 0.0;
};

struct SummaryRow
{
    std::string scheme;
    double beta = 0.0;
    double epsilon = 0.0;
    double snr_db = 0.0;
    int draws = 0;
    int failures = 0;
    double mean_rate_nats = 0.0;
    std::optional<double> stderr_rate_nats; // empty for a single successful draw
    double mean_gamma = 0.0;
    bool degenerate = false; // more than half of the draws failed
};

// Worker count: CELLBEAM_THREADS if set, else `requested` if positive,
// else the hardware concurrency.
int resolve_thread_count(int requested);

// Rows ordered by beta, epsilon, snr, draw, then scheme as listed.
std::vector<ResultRow> run_experiment(const ExperimentSpec &spec);

// Groups by (scheme, beta, epsilon, snr_db) in first-appearance order;
// failed rows are excluded from the means.
std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows);

inline constexpr const char *kCsvHeader =
    "scheme,beta,epsilon,snr_db,draw_id,gamma,rate_nats,rate_bits,per_bs_power_1,per_bs_power_2,converged,"
    "wall_time_ms";

std::string to_csv(const std::vector<ResultRow> &rows);
std::string summary_json(const std::vector<SummaryRow> &summary, const ExperimentSpec &spec);

// Large-system overlay for a result row; empty for the ZF baselines.
struct LsaOverlay
{
    std::optional<double> gamma;
    std::optional<double> rate_nats;
};
LsaOverlay lsa_overlay(const ResultRow &row);

// Result rows plus lsa_gamma and lsa_rate_nats columns.
std::string compare_csv(const std::vector<ResultRow> &rows);

// Curve export for closed-form sweeps.
struct CurvePoint
{
    std::string scheme;
    double beta = 0.0;
    double epsilon = 0.0;
    double snr_db = 0.0;
    double gamma_star = 0.0;
    double rate = 0.0;
    bool feasible = false;
};
CurvePoint curve_point(const Contender &who, double beta, double epsilon, double snr_db);
std::string curve_csv(const std::vector<CurvePoint> &points);

// Shortest round-trip decimal form used in all CSV output.
std::string format_number(double value);

} // namespace cellbeam
