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
#include "cellbeam/types.hpp"

#include <array>

namespace cellbeam
{

struct SolverSettings
{
    double tolerance = 1e-10; // relative fixed-point residual
    int max_iterations = 10000;
    double damping = 0.0; // lambda <- (1-d) I(lambda) + d lambda

    void validate() const;
};

// Virtual uplink solution. User u = cell * K + k; for a single-cell solve
// the vector holds that cell's K users only. Per-user uplink power is
// lambdas[u] / N.
struct DualSolution
{
    Scheme scheme = Scheme::SCP;
    double gamma = 0.0;
    RVector lambdas;
    std::array<double, 2> mus{1.0, 1.0};
    double dual_objective = 0.0; // sum_u lambda_u sigma^2 / N
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
};

struct MuSearchResult
{
    std::array<double, 2> mus{1.0, 1.0};
    DualSolution dual;
    int evaluations = 0;
};

// Lower end of the noise-dual search interval; mu_1 ranges over
// [kMuLow, 2 - kMuLow] with mu_2 = 2 - mu_1.
inline constexpr double kMuLow = 1e-3;

// ---- single cell processing ------------------------------------------

// Fixed point lambda_k = gamma N / (h_k (I + sum_{k'!=k} lambda_k'/N h_k'^H h_k')^-1 h_k^H)
// for one cell (K x N own-cell block). The dual objective uses unit noise.
// Throws InfeasibleError on divergence and NotConvergedError when the
// iteration budget runs out.
DualSolution scp_dual_powers(const ChannelMatrix &cell_channels, double gamma, const SolverSettings &settings,
                             const RVector *initial = nullptr);

// Both cells solved independently, lambdas concatenated.
DualSolution scp_dual_powers(const ChannelSet &channels, double gamma, const SolverSettings &settings);

// Unit-norm MMSE receive direction of one user of the cell.
CVector scp_mmse_direction(const ChannelMatrix &cell_channels, const RVector &lambdas, Index user);

// ---- coordinated beamforming ------------------------------------------

DualSolution cbf_dual_powers(const ChannelSet &channels, double gamma, std::array<double, 2> mus,
                             const SolverSettings &settings, const RVector *initial = nullptr);

// Maximizes the dual objective over mu_1 + mu_2 = 2.
MuSearchResult cbf_mu_search(const ChannelSet &channels, double gamma, const SolverSettings &settings);

// Unit-norm length-N direction of user k of `cell` at its serving BS.
CVector cbf_mmse_direction(const ChannelSet &channels, const RVector &lambdas, std::array<double, 2> mus,
                           Index user, int cell);

// ---- multicell processing ---------------------------------------------

DualSolution mcp_dual_powers(const ChannelSet &channels, double gamma, std::array<double, 2> mus,
                             const SolverSettings &settings, const RVector *initial = nullptr);

MuSearchResult mcp_mu_search(const ChannelSet &channels, double gamma, const SolverSettings &settings);

// Unit-norm length-2N direction.
CVector mcp_mmse_direction(const ChannelSet &channels, const RVector &lambdas, std::array<double, 2> mus,
                           Index user, int cell);

// ---- shared -----------------------------------------------------------

// Scheme-dependent virtual uplink SINR of user k in `cell` given 2K dual
// powers. For SCP the mus are ignored (unit noise, own-cell interference).
double uplink_sinr(Scheme scheme, const ChannelSet &channels, const RVector &lambdas, std::array<double, 2> mus,
                   Index user, int cell);

} // namespace cellbeam
