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

// Large-system limits with N, K -> infinity at fixed loading beta = K/N.
// Functions that can fail return std::nullopt when the target is outside
// the scheme's feasible region; none of them produce NaN.

#include "cellbeam/channel.hpp"
#include "cellbeam/downlink.hpp"
#include "cellbeam/types.hpp"

#include <array>
#include <optional>

namespace cellbeam
{

struct AsymptoticPoint
{
    Scheme scheme = Scheme::SCP;
    double gamma_star = 0.0;
    double lambda_bar = 0.0;
    double p_bar = 0.0;
    double big_p_bar = 0.0; // per-BS power beta * p_bar
    bool feasible = false;
};

enum class LoadingRegime
{
    NoiseLimited,
    InteriorOptimum
};

struct LoadingResult
{
    std::optional<double> beta_star; // empty: unbounded, rate increases with beta
    double rate_at_star = 0.0;       // nats; for unbounded loading the limit as beta -> infinity
    LoadingRegime regime = LoadingRegime::NoiseLimited;
};

struct BetaSearchSettings
{
    double beta_low = 1e-3;
    double beta_max = 1e8; // give up doubling past this loading
    int bits = 40;         // Brent precision
};

// Sum of per-user effective bandwidths times beta; the target is reachable
// with unlimited power iff this is below one.
double bandwidth_load(Scheme scheme, double gamma, double beta, double epsilon);

std::optional<double> lambda_bar(Scheme scheme, double gamma, double beta, double epsilon);
std::optional<double> p_bar(Scheme scheme, double gamma, double beta, double epsilon, double sigma2);

// Balanced SINR reachable with per-BS power P, snr = P / sigma2.
double gamma_star(Scheme scheme, double beta, double epsilon, double snr);

// gamma - F(gamma) for the scheme's defining fixed point, relative to gamma.
double gamma_star_residual(Scheme scheme, double gamma, double beta, double epsilon, double snr);

AsymptoticPoint asymptotic_point(Scheme scheme, double beta, double epsilon, double snr, double sigma2 = 1.0);

double effective_interference(Scheme scheme, double snr, double epsilon, double gamma, double beta);

bool is_feasible(Scheme scheme, double gamma, double beta, double epsilon);
bool is_feasible(Scheme scheme, double gamma, double beta, double epsilon, double snr);

// r(beta) = beta * log(1 + gamma_star(beta)), natural log.
double normalized_rate(Scheme scheme, double beta, double epsilon, double snr);

// True when r(beta) keeps increasing for every beta (noise-limited regime).
bool noise_limited(Scheme scheme, double snr, double epsilon);
double rate_limit(Scheme scheme, double snr, double epsilon);

LoadingResult optimal_beta(Scheme scheme, double snr, double epsilon, const BetaSearchSettings &settings = {});

// Half-reuse time division: each BS alone in its slot with power 2P.
double td_gamma_star(double beta, double snr);
double td_rate(double beta, double snr);

// Fixed points t(-rho) of the deterministic-equivalent equations.
double t_scp(double rho, double lambda, double beta);
double t_cbf(double rho, double lambda_own, double lambda_other, double beta, double epsilon);
std::array<double, 2> t_mcp(double rho, std::array<double, 2> lambdas, std::array<double, 2> mus, double beta,
                            double epsilon);
double t_mcp_symmetric(double rho, double lambda, double mu, double beta, double epsilon);

// Finite-N beamformers built from the limiting dual power: RZF (SCP),
// generalized RZF over own and cross-cell users (CBf), joint RZF (MCP).
// Every user gets power p_bar; MCP powers are scaled down by a common factor
// when a BS exceeds P.
PrecodingSolution asymptotic_beamformers(Scheme scheme, const ChannelSet &channels, double gamma);

} // namespace cellbeam
