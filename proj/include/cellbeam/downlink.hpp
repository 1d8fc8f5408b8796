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

#include "cellbeam/channel.hpp"
#include "cellbeam/dual_uplink.hpp"

#include <array>
#include <optional>

namespace cellbeam
{

// Downlink beamformers w_u = sqrt(p_u / N) * d_u. Column u of `directions`
// is the unit direction of user u = cell * K + k; it has N rows (serving BS
// only) for SCP and CBf and 2N rows for MCP.
struct PrecodingSolution
{
    Scheme scheme = Scheme::SCP;
    CMatrix directions;
    RVector powers;
    std::array<double, 2> per_bs_power{0.0, 0.0};
    RVector sinrs;
    double gamma_target = 0.0;
};

struct MaxMinSettings
{
    SolverSettings solver;
    double gamma_tolerance = 1e-6; // absolute width of the final bracket
    int max_evaluations = 200;
};

struct MaxMinResult
{
    double gamma_star = 0.0;
    PrecodingSolution solution; // empty when gamma_star == 0
    std::optional<DualSolution> dual;
    int bisection_iterations = 0;
    double bracket_width = 0.0;
};

// Gauss-Seidel between the two cells: each cell solves its K x K system
// with sigma2_k = sigma2 + received power from the other BS.
PrecodingSolution scp_downlink_powers(const ChannelSet &channels, const CMatrix &directions, double gamma,
                                      const SolverSettings &settings = {});

PrecodingSolution cbf_downlink_powers(const ChannelSet &channels, const CMatrix &directions, double gamma,
                                      const SolverSettings &settings = {});

PrecodingSolution mcp_downlink_powers(const ChannelSet &channels, const CMatrix &directions, double gamma,
                                      const SolverSettings &settings = {});

PrecodingSolution downlink_powers(Scheme scheme, const ChannelSet &channels, const CMatrix &directions, double gamma,
                                  const SolverSettings &settings = {});

// Optimal beamformers at a fixed target: dual solve (with noise-dual search
// for CBf and MCP), MMSE directions, then power recovery.
struct FixedTargetSolution
{
    DualSolution dual;
    PrecodingSolution primal;
};
FixedTargetSolution solve_fixed_gamma(Scheme scheme, const ChannelSet &channels, double gamma,
                                      const SolverSettings &settings = {});

// Largest balanced SINR meeting both per-BS budgets P.
MaxMinResult max_min_sinr(Scheme scheme, const ChannelSet &channels, const MaxMinSettings &settings = {});

// |primal - dual| / max(primal, dual). CBf/MCP compare 2 max_j P_j with
// sum lambda sigma2 / N; SCP compares each cell's power with
// sum lambda sigma2_k / N and returns the larger of the two gaps.
double duality_gap(const DualSolution &dual, const PrecodingSolution &primal, const ChannelSet &channels);

// Downlink SINR of every user for the solution's directions and powers.
RVector evaluate_sinrs(Scheme scheme, const ChannelSet &channels, const PrecodingSolution &solution);

// Directions as 2N-row columns (zero outside the serving BS for SCP/CBf).
CMatrix embedded_directions(Scheme scheme, const ChannelSet &channels, const CMatrix &directions);

} // namespace cellbeam
