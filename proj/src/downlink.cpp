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

#include "cellbeam/downlink.hpp"
#include "cellbeam/asymptotic.hpp"
#include "cellbeam/detail/network.hpp"
#include "cellbeam/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cellbeam
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// Columns u of a 2N-row direction matrix reduced to the serving BS segment.
CMatrix serving_segments(const CMatrix &embedded, Index n, Index k)
{
    CMatrix out(n, embedded.cols());
    for (Index u = 0; u < embedded.cols(); ++u)
        out.col(u) = embedded.col(u).segment((u / k) * n, n);
    return out;
}

void check_directions(Scheme scheme, const ChannelSet &channels, const CMatrix &directions)
{
    const Index n = channels.n_antennas();
    const Index rows = scheme == Scheme::MCP ? 2 * n : n;
    if (directions.rows() != rows || directions.cols() != 2 * channels.n_users())
        throw DimensionError("direction matrix must be " + std::to_string(rows) + " x " +
                             std::to_string(2 * channels.n_users()));
}

PrecodingSolution assemble(Scheme scheme, const ChannelSet &channels, CMatrix directions, const CMatrix &embedded,
                           const RMatrix &gains, RVector powers, double gamma)
{
    const Index n = channels.n_antennas();
    PrecodingSolution sol;
    sol.scheme = scheme;
    sol.directions = std::move(directions);
    sol.per_bs_power = detail::per_bs_power(embedded, powers, n);
    sol.sinrs = detail::downlink_sinrs(gains, powers, static_cast<double>(n), channels.config().sigma2);
    sol.powers = std::move(powers);
    sol.gamma_target = gamma;
    return sol;
}

RVector gauss_seidel_powers(const RMatrix &gains, Index k, double gamma, double n, double sigma2)
{
    std::array<Eigen::PartialPivLU<RMatrix>, 2> lu;
    for (int j = 0; j < 2; ++j)
    {
        RMatrix a = -gains.block(j * k, j * k, k, k);
        a.diagonal() = gains.block(j * k, j * k, k, k).diagonal() / gamma;
        lu[static_cast<std::size_t>(j)].compute(a);
    }
    RVector p = RVector::Zero(2 * k);
    double change = kInf;
    for (int round = 0; round < 1000; ++round)
    {
        const RVector previous = p;
        for (int j = 0; j < 2; ++j)
        {
            const int other = 1 - j;
            const RVector rhs = RVector::Constant(k, n * sigma2) +
                                gains.block(j * k, other * k, k, k) * p.segment(other * k, k);
            RVector pj = lu[static_cast<std::size_t>(j)].solve(rhs);
            if (!pj.allFinite() || (pj.array() <= 0.0).any())
                throw InfeasibleError("single-cell power system has no positive solution");
            p.segment(j * k, k) = pj;
        }
        change = ((p - previous).array().abs() / p.array()).maxCoeff();
        if (change <= 1e-12)
            return p;
        if (p.maxCoeff() > 1e250)
            break;
    }
    if (change <= 1e-9)
        return p;
    throw InfeasibleError("inter-cell power iteration did not converge");
}

// Dual solve, directions and power recovery at one target, reusing the
// previous target's dual powers and noise duals as the starting point.
class TargetSolver
{
  public:
    TargetSolver(Scheme scheme, const ChannelSet &channels, const SolverSettings &settings)
        : scheme_(scheme), channels_(channels), settings_(settings)
    {
    }

    FixedTargetSolution solve(double gamma)
    {
        const Index n = channels_.n_antennas();
        const Index k = channels_.n_users();
        const double sigma2 = channels_.config().sigma2;
        const CMatrix h = channels_.stacked();
        FixedTargetSolution out;
        if (scheme_ == Scheme::SCP)
        {
            const auto sys = detail::scp_system(channels_);
            out.dual = detail::fixed_point(sys, gamma, 1.0, settings_, warm_ ? &*warm_ : nullptr);
            out.dual.scheme = Scheme::SCP;
            warm_ = out.dual.lambdas;
            const CMatrix embedded = detail::mmse_directions(sys, out.dual.lambdas);
            const RMatrix gains = detail::gain_matrix(h, embedded);
            RVector p = gauss_seidel_powers(gains, k, gamma, static_cast<double>(n), sigma2);
            out.primal = assemble(scheme_, channels_, serving_segments(embedded, n, k), embedded, gains, std::move(p),
                                  gamma);
            return out;
        }
        detail::MuSearchOutcome found =
            detail::mu_search(scheme_, channels_, gamma, settings_, mus_, warm_ ? &*warm_ : nullptr);
        warm_ = found.dual.lambdas;
        mus_ = found.mus;
        out.dual = std::move(found.dual);
        const RMatrix gains = detail::gain_matrix(h, found.directions);
        CMatrix dirs = scheme_ == Scheme::CBF ? serving_segments(found.directions, n, k) : found.directions;
        out.primal =
            assemble(scheme_, channels_, std::move(dirs), found.directions, gains, std::move(found.powers), gamma);
        return out;
    }

  private:
    Scheme scheme_;
    const ChannelSet &channels_;
    SolverSettings settings_;
    std::optional<RVector> warm_;
    std::array<double, 2> mus_{1.0, 1.0};
};

} // namespace

CMatrix embedded_directions(Scheme scheme, const ChannelSet &channels, const CMatrix &directions)
{
    check_directions(scheme, channels, directions);
    if (scheme == Scheme::MCP)
        return directions;
    const Index n = channels.n_antennas();
    const Index k = channels.n_users();
    CMatrix out = CMatrix::Zero(2 * n, directions.cols());
    for (Index u = 0; u < directions.cols(); ++u)
        out.col(u).segment((u / k) * n, n) = directions.col(u);
    return out;
}

PrecodingSolution scp_downlink_powers(const ChannelSet &channels, const CMatrix &directions, double gamma,
                                      const SolverSettings &settings)
{
    settings.validate();
    if (!(gamma > 0.0))
        throw std::invalid_argument("gamma must be positive");
    const CMatrix embedded = embedded_directions(Scheme::SCP, channels, directions);
    const RMatrix gains = detail::gain_matrix(channels.stacked(), embedded);
    RVector p = gauss_seidel_powers(gains, channels.n_users(), gamma, static_cast<double>(channels.n_antennas()),
                                    channels.config().sigma2);
    return assemble(Scheme::SCP, channels, directions, embedded, gains, std::move(p), gamma);
}

namespace
{

PrecodingSolution joint_powers(Scheme scheme, const ChannelSet &channels, const CMatrix &directions, double gamma,
                               const SolverSettings &settings)
{
    settings.validate();
    if (!(gamma > 0.0))
        throw std::invalid_argument("gamma must be positive");
    const CMatrix embedded = embedded_directions(scheme, channels, directions);
    const RMatrix gains = detail::gain_matrix(channels.stacked(), embedded);
    RVector p = detail::joint_downlink_powers(gains, gamma, static_cast<double>(channels.n_antennas()),
                                              channels.config().sigma2);
    return assemble(scheme, channels, directions, embedded, gains, std::move(p), gamma);
}

} // namespace

PrecodingSolution cbf_downlink_powers(const ChannelSet &channels, const CMatrix &directions, double gamma,
                                      const SolverSettings &settings)
{
    return joint_powers(Scheme::CBF, channels, directions, gamma, settings);
}

PrecodingSolution mcp_downlink_powers(const ChannelSet &channels, const CMatrix &directions, double gamma,
                                      const SolverSettings &settings)
{
    return joint_powers(Scheme::MCP, channels, directions, gamma, settings);
}

PrecodingSolution downlink_powers(Scheme scheme, const ChannelSet &channels, const CMatrix &directions, double gamma,
                                  const SolverSettings &settings)
{
    switch (scheme)
    {
    case Scheme::SCP:
        return scp_downlink_powers(channels, directions, gamma, settings);
    case Scheme::CBF:
        return cbf_downlink_powers(channels, directions, gamma, settings);
    case Scheme::MCP:
        break;
    }
    return mcp_downlink_powers(channels, directions, gamma, settings);
}

FixedTargetSolution solve_fixed_gamma(Scheme scheme, const ChannelSet &channels, double gamma,
                                      const SolverSettings &settings)
{
    settings.validate();
    TargetSolver solver(scheme, channels, settings);
    return solver.solve(gamma);
}

MaxMinResult max_min_sinr(Scheme scheme, const ChannelSet &channels, const MaxMinSettings &settings)
{
    settings.solver.validate();
    if (!(settings.gamma_tolerance > 0.0))
        throw ConfigError("gamma tolerance must be positive");
    const SystemConfig &cfg = channels.config();
    cfg.validate();

    MaxMinResult result;
    const CMatrix h = channels.stacked();
    double max_gain = 0.0;
    for (Index u = 0; u < h.rows(); ++u)
        max_gain = std::max(max_gain, h.row(u).squaredNorm());
    // Every user power p/N is at most 2P, so no SINR can exceed this.
    const double gamma_ub = 2.0 * cfg.power * max_gain / cfg.sigma2;
    if (!(gamma_ub > 0.0))
        return result;

    TargetSolver solver(scheme, channels, settings.solver);
    double best_gamma = 0.0;
    std::optional<FixedTargetSolution> best;
    int evaluations = 0;
    auto f = [&](double gamma) {
        ++evaluations;
        try
        {
            FixedTargetSolution sol = solver.solve(gamma);
            const double value = std::max(sol.primal.per_bs_power[0], sol.primal.per_bs_power[1]) / cfg.power - 1.0;
            if (value <= 0.0 && gamma > best_gamma)
            {
                best_gamma = gamma;
                best = std::move(sol);
            }
            return value;
        }
        catch (const InfeasibleError &)
        {
            return kInf;
        }
        catch (const NotConvergedError &)
        {
            return kInf;
        }
    };

    double start = gamma_star(scheme, cfg.beta(), cfg.epsilon, cfg.snr());
    if (!(start > 0.0) || !std::isfinite(start))
        start = 1e-3 * gamma_ub;
    start = std::min(start, 0.5 * gamma_ub);

    const detail::FeasibleSearch search =
        detail::largest_feasible(f, start, gamma_ub, settings.gamma_tolerance, settings.max_evaluations);
    result.bisection_iterations = evaluations;
    result.bracket_width = search.bracket.width();
    if (!search.found)
        return result;

    result.gamma_star = best_gamma;
    if (best)
    {
        result.solution = std::move(best->primal);
        result.dual = std::move(best->dual);
    }
    return result;
}

double duality_gap(const DualSolution &dual, const PrecodingSolution &primal, const ChannelSet &channels)
{
    if (dual.scheme != primal.scheme)
        throw std::invalid_argument("dual and primal solutions belong to different schemes");
    if (std::abs(dual.gamma - primal.gamma_target) > 1e-12 * std::max(1.0, std::abs(dual.gamma)))
        throw std::invalid_argument("dual and primal solutions were computed at different targets");
    const Index k = channels.n_users();
    const Index users = 2 * k;
    if (dual.lambdas.size() != users || primal.powers.size() != users)
        throw DimensionError("solution sizes do not match the channel set");

    const double n = static_cast<double>(channels.n_antennas());
    const double sigma2 = channels.config().sigma2;
    auto relative = [](double a, double b) {
        const double scale = std::max(std::abs(a), std::abs(b));
        return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
    };

    if (primal.scheme != Scheme::SCP)
    {
        const double primal_obj = 2.0 * std::max(primal.per_bs_power[0], primal.per_bs_power[1]);
        const double dual_obj = dual.lambdas.sum() * sigma2 / n;
        return relative(primal_obj, dual_obj);
    }

    const CMatrix embedded = embedded_directions(Scheme::SCP, channels, primal.directions);
    const RMatrix gains = detail::gain_matrix(channels.stacked(), embedded);
    double gap = 0.0;
    for (int j = 0; j < 2; ++j)
    {
        const int other = 1 - j;
        const RVector cell_noise = RVector::Constant(k, sigma2) +
                                   gains.block(j * k, other * k, k, k) * primal.powers.segment(other * k, k) / n;
        const double dual_obj = dual.lambdas.segment(j * k, k).dot(cell_noise) / n;
        gap = std::max(gap, relative(primal.per_bs_power[static_cast<std::size_t>(j)], dual_obj));
    }
    return gap;
}

RVector evaluate_sinrs(Scheme scheme, const ChannelSet &channels, const PrecodingSolution &solution)
{
    if (solution.powers.size() != 2 * channels.n_users())
        throw DimensionError("power vector does not match the channel set");
    const CMatrix embedded = embedded_directions(scheme, channels, solution.directions);
    const RMatrix gains = detail::gain_matrix(channels.stacked(), embedded);
    return detail::downlink_sinrs(gains, solution.powers, static_cast<double>(channels.n_antennas()),
                                  channels.config().sigma2);
}

} // namespace cellbeam
