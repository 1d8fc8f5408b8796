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

// Scheme-independent machinery shared by the dual, primal and baseline
// solvers. Users are rows of a channel matrix (stacked 2N channels for
// two-cell problems); receivers observe a column segment of those rows.

#include "cellbeam/channel.hpp"
#include "cellbeam/dual_uplink.hpp"

#include <array>
#include <vector>

namespace cellbeam::detail
{

struct Receiver
{
    Index offset = 0;                 // first column of the observed segment
    Index dim = 0;                    // segment length
    RVector noise;                    // diagonal receiver noise, length dim
    std::vector<Index> contributors;  // users whose signals reach this receiver
    std::vector<Index> served;        // users decoded here (subset of contributors)
    CMatrix rows;                     // contributor channels restricted to the segment
    std::vector<Index> served_rows;   // positions of served users inside `rows`
};

struct UplinkSystem
{
    CMatrix channels;      // users x total dimension
    double normalizer = 1; // N in lambda / N
    std::vector<Receiver> receivers;
    std::vector<int> serving; // receiver index of each user

    Index n_users() const { return channels.rows(); }
    Index dimension() const { return channels.cols(); }
};

Receiver make_receiver(const CMatrix &channels, Index offset, Index dim, RVector noise,
                       std::vector<Index> contributors, std::vector<Index> served);
void finalize(UplinkSystem &sys);

// One-cell system with unit noise (SCP).
UplinkSystem single_cell_system(const ChannelMatrix &cell_channels);
// Two-cell systems built on the stacked 2K x 2N channel matrix.
UplinkSystem scp_system(const ChannelSet &channels);
UplinkSystem cbf_system(const ChannelSet &channels, std::array<double, 2> mus);
UplinkSystem mcp_system(const ChannelSet &channels, std::array<double, 2> mus);
// Re-weights receiver noise of a CBf/MCP system in place.
void set_mus(UplinkSystem &sys, Scheme scheme, Index n_antennas, std::array<double, 2> mus);

// q_u = h_u C^{-1} h_u^H at the serving receiver, including user u itself
// in the covariance C = diag(noise) + sum_c lambda_c/N h_c^H h_c.
RVector full_quadratic_forms(const UplinkSystem &sys, const RVector &lambdas);

// I_u(lambda) = gamma N / (h_u C_{-u}^{-1} h_u^H), via Sherman-Morrison on
// the shared covariance.
RVector interference_map(const UplinkSystem &sys, const RVector &lambdas, double gamma);

// Virtual uplink SINR (lambda_u/N) h_u C_{-u}^{-1} h_u^H.
RVector uplink_sinrs(const UplinkSystem &sys, const RVector &lambdas);

// Unit MMSE directions embedded in the full dimension, one column per user.
CMatrix mmse_directions(const UplinkSystem &sys, const RVector &lambdas);

// Jacobi fixed-point iteration of interference_map.
DualSolution fixed_point(const UplinkSystem &sys, double gamma, double sigma2, const SolverSettings &settings,
                         const RVector *initial);

// ---- downlink -----------------------------------------------------------

// G(u, v) = |h_u d_v|^2.
RMatrix gain_matrix(const CMatrix &channels, const CMatrix &directions);

// Solves (diag(G)/gamma - offdiag(G)) p = N sigma2 for the users listed in
// `users` (all other users silent). Throws InfeasibleError when the
// solution is not strictly positive and finite.
RVector joint_downlink_powers(const RMatrix &gains, double gamma, double n_antennas, double sigma2);

// Sum over users of p_u/N ||E_j d_u||^2 for the two BS segments of a 2N
// direction matrix.
std::array<double, 2> per_bs_power(const CMatrix &directions, const RVector &powers, Index n_antennas);

// Downlink SINRs p_u/N G(u,u) / (sigma2 + sum_{v != u} p_v/N G(u,v)).
RVector downlink_sinrs(const RMatrix &gains, const RVector &powers, double n_antennas, double sigma2);

struct MuSearchOutcome
{
    std::array<double, 2> mus{1.0, 1.0};
    DualSolution dual;
    CMatrix directions;
    RVector powers;
    std::array<double, 2> bs_power{0.0, 0.0};
    int evaluations = 0;
};

// Maximizes the concave noise-dual over mu_1 in [kMuLow, 2 - kMuLow] by
// locating the sign change of its derivative P_1(mu) - P_2(mu), where P_j
// are the per-BS powers of the downlink solution recovered at mu.
MuSearchOutcome mu_search(Scheme scheme, const ChannelSet &channels, double gamma, const SolverSettings &settings,
                          std::array<double, 2> start = {1.0, 1.0}, const RVector *warm = nullptr);

} // namespace cellbeam::detail
