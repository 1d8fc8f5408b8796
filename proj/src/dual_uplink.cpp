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

#include "cellbeam/dual_uplink.hpp"
#include "cellbeam/detail/network.hpp"

#include <cmath>
#include <stdexcept>

namespace cellbeam
{

using detail::UplinkSystem;

void SolverSettings::validate() const
{
    if (!(tolerance > 0.0))
        throw ConfigError("solver tolerance must be positive");
    if (max_iterations < 1)
        throw ConfigError("max_iterations must be at least 1");
    if (!(damping >= 0.0 && damping < 1.0))
        throw ConfigError("damping must lie in [0, 1)");
}

namespace
{

void check_mus(std::array<double, 2> mus)
{
    if (!(mus[0] > 0.0) || !(mus[1] > 0.0) || !std::isfinite(mus[0]) || !std::isfinite(mus[1]))
        throw std::invalid_argument("noise duals must be positive");
}

void check_lambdas(const RVector &lambdas, Index expected)
{
    if (lambdas.size() != expected)
        throw DimensionError("dual power vector has length " + std::to_string(lambdas.size()) + ", expected " +
                             std::to_string(expected));
    if ((lambdas.array() < 0.0).any())
        throw std::invalid_argument("dual powers must be nonnegative");
}

Index flat_user(const ChannelSet &channels, Index user, int cell)
{
    if (cell < 0 || cell > 1 || user < 0 || user >= channels.n_users())
        throw std::out_of_range("user index out of range");
    return cell * channels.n_users() + user;
}

DualSolution solve_two_cell(Scheme scheme, const ChannelSet &channels, double gamma, std::array<double, 2> mus,
                            const SolverSettings &settings, const RVector *initial)
{
    check_mus(mus);
    const UplinkSystem sys =
        scheme == Scheme::CBF ? detail::cbf_system(channels, mus) : detail::mcp_system(channels, mus);
    DualSolution sol = detail::fixed_point(sys, gamma, channels.config().sigma2, settings, initial);
    sol.scheme = scheme;
    sol.mus = mus;
    return sol;
}

MuSearchResult search(Scheme scheme, const ChannelSet &channels, double gamma, const SolverSettings &settings)
{
    detail::MuSearchOutcome found = detail::mu_search(scheme, channels, gamma, settings);
    MuSearchResult out;
    out.mus = found.mus;
    out.dual = std::move(found.dual);
    out.evaluations = found.evaluations;
    return out;
}

} // namespace

DualSolution scp_dual_powers(const ChannelMatrix &cell_channels, double gamma, const SolverSettings &settings,
                             const RVector *initial)
{
    if (cell_channels.rows() < 1 || cell_channels.cols() < 1)
        throw DimensionError("cell channel matrix is empty");
    const UplinkSystem sys = detail::single_cell_system(cell_channels);
    DualSolution sol = detail::fixed_point(sys, gamma, 1.0, settings, initial);
    sol.scheme = Scheme::SCP;
    return sol;
}

DualSolution scp_dual_powers(const ChannelSet &channels, double gamma, const SolverSettings &settings)
{
    const UplinkSystem sys = detail::scp_system(channels);
    DualSolution sol = detail::fixed_point(sys, gamma, 1.0, settings, nullptr);
    sol.scheme = Scheme::SCP;
    return sol;
}

CVector scp_mmse_direction(const ChannelMatrix &cell_channels, const RVector &lambdas, Index user)
{
    check_lambdas(lambdas, cell_channels.rows());
    if (user < 0 || user >= cell_channels.rows())
        throw std::out_of_range("user index out of range");
    const UplinkSystem sys = detail::single_cell_system(cell_channels);
    return detail::mmse_directions(sys, lambdas).col(user);
}

DualSolution cbf_dual_powers(const ChannelSet &channels, double gamma, std::array<double, 2> mus,
                             const SolverSettings &settings, const RVector *initial)
{
    return solve_two_cell(Scheme::CBF, channels, gamma, mus, settings, initial);
}

MuSearchResult cbf_mu_search(const ChannelSet &channels, double gamma, const SolverSettings &settings)
{
    return search(Scheme::CBF, channels, gamma, settings);
}

CVector cbf_mmse_direction(const ChannelSet &channels, const RVector &lambdas, std::array<double, 2> mus,
                           Index user, int cell)
{
    check_mus(mus);
    check_lambdas(lambdas, 2 * channels.n_users());
    const Index u = flat_user(channels, user, cell);
    const Index n = channels.n_antennas();
    const UplinkSystem sys = detail::cbf_system(channels, mus);
    return detail::mmse_directions(sys, lambdas).col(u).segment(cell * n, n);
}

DualSolution mcp_dual_powers(const ChannelSet &channels, double gamma, std::array<double, 2> mus,
                             const SolverSettings &settings, const RVector *initial)
{
    return solve_two_cell(Scheme::MCP, channels, gamma, mus, settings, initial);
}

MuSearchResult mcp_mu_search(const ChannelSet &channels, double gamma, const SolverSettings &settings)
{
    return search(Scheme::MCP, channels, gamma, settings);
}

CVector mcp_mmse_direction(const ChannelSet &channels, const RVector &lambdas, std::array<double, 2> mus,
                           Index user, int cell)
{
    check_mus(mus);
    check_lambdas(lambdas, 2 * channels.n_users());
    const Index u = flat_user(channels, user, cell);
    const UplinkSystem sys = detail::mcp_system(channels, mus);
    return detail::mmse_directions(sys, lambdas).col(u);
}

double uplink_sinr(Scheme scheme, const ChannelSet &channels, const RVector &lambdas, std::array<double, 2> mus,
                   Index user, int cell)
{
    check_lambdas(lambdas, 2 * channels.n_users());
    const Index u = flat_user(channels, user, cell);
    UplinkSystem sys;
    switch (scheme)
    {
    case Scheme::SCP:
        sys = detail::scp_system(channels);
        break;
    case Scheme::CBF:
        check_mus(mus);
        sys = detail::cbf_system(channels, mus);
        break;
    case Scheme::MCP:
        check_mus(mus);
        sys = detail::mcp_system(channels, mus);
        break;
    }
    return detail::uplink_sinrs(sys, lambdas)(u);
}

} // namespace cellbeam
