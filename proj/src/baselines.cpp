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

#include "cellbeam/baselines.hpp"
#include "cellbeam/asymptotic.hpp"
#include "cellbeam/detail/network.hpp"
#include "cellbeam/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace cellbeam
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// Right pseudo-inverse columns for the `served` rows of the constraint
// matrix [served; nulled]. Zero rows of `nulled` are dropped.
CMatrix pinv_served(const CMatrix &served, const CMatrix &nulled)
{
    std::vector<Index> keep;
    for (Index r = 0; r < nulled.rows(); ++r)
        if (nulled.row(r).squaredNorm() > 0.0)
            keep.push_back(r);
    const Index dim = served.cols();
    const Index rows = served.rows() + static_cast<Index>(keep.size());
    if (rows > dim)
        throw RankError("more nonzero constraints than antennas");
    CMatrix a(rows, dim);
    a.topRows(served.rows()) = served;
    for (std::size_t i = 0; i < keep.size(); ++i)
        a.row(served.rows() + static_cast<Index>(i)) = nulled.row(keep[i]);

    // A^H = Q R  =>  pinv(A) = Q R^{-H}.
    Eigen::HouseholderQR<CMatrix> qr(a.adjoint());
    const CMatrix r = qr.matrixQR().topLeftCorner(rows, rows).triangularView<Eigen::Upper>();
    const double scale = r.diagonal().cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || r.diagonal().cwiseAbs().minCoeff() <= 1e-10 * scale)
        throw RankError("channel matrix is rank deficient; zero-forcing undefined");
    const CMatrix q = qr.householderQ() * CMatrix::Identity(dim, rows);
    const CMatrix rinv_h =
        r.adjoint().triangularView<Eigen::Lower>().solve(CMatrix::Identity(rows, rows));
    CMatrix w = q * rinv_h.leftCols(served.rows());
    for (Index c = 0; c < w.cols(); ++c)
        w.col(c).normalize();
    return w;
}

MaxMinResult fixed_direction_max_min(Baseline baseline, const ChannelSet &channels, const CMatrix &directions,
                                     const MaxMinSettings &settings)
{
    const SystemConfig &cfg = channels.config();
    const Scheme scheme = baseline_scheme(baseline);
    const CMatrix embedded = embedded_directions(scheme, channels, directions);
    const CMatrix h = channels.stacked();
    const RMatrix gains = detail::gain_matrix(h, embedded);
    const double n = static_cast<double>(channels.n_antennas());

    double best_gamma = 0.0;
    std::optional<RVector> best_powers;
    int evaluations = 0;
    auto f = [&](double gamma) {
        ++evaluations;
        try
        {
            RVector p = detail::joint_downlink_powers(gains, gamma, n, cfg.sigma2);
            const auto bs = detail::per_bs_power(embedded, p, channels.n_antennas());
            const double value = std::max(bs[0], bs[1]) / cfg.power - 1.0;
            if (value <= 0.0 && gamma > best_gamma)
            {
                best_gamma = gamma;
                best_powers = std::move(p);
            }
            return value;
        }
        catch (const InfeasibleError &)
        {
            return kInf;
        }
    };

    double max_gain = 0.0;
    for (Index u = 0; u < h.rows(); ++u)
        max_gain = std::max(max_gain, h.row(u).squaredNorm());
    const double gamma_ub = 2.0 * cfg.power * max_gain / cfg.sigma2;

    MaxMinResult result;
    if (!(gamma_ub > 0.0))
        return result;
    const double guess = std::min(gamma_star(scheme, cfg.beta(), cfg.epsilon, cfg.snr()), 0.5 * gamma_ub);
    const auto search = detail::largest_feasible(f, guess, gamma_ub, settings.gamma_tolerance, settings.max_evaluations);
    result.bisection_iterations = evaluations;
    result.bracket_width = search.bracket.width();
    if (!search.found || !best_powers)
        return result;

    result.gamma_star = best_gamma;
    PrecodingSolution &sol = result.solution;
    sol.scheme = scheme;
    sol.directions = directions;
    sol.per_bs_power = detail::per_bs_power(embedded, *best_powers, channels.n_antennas());
    sol.sinrs = detail::downlink_sinrs(gains, *best_powers, n, cfg.sigma2);
    sol.powers = std::move(*best_powers);
    sol.gamma_target = best_gamma;
    return result;
}

MaxMinResult equal_power(Baseline baseline, const ChannelSet &channels, const CMatrix &directions)
{
    const SystemConfig &cfg = channels.config();
    const Scheme scheme = baseline_scheme(baseline);
    const CMatrix embedded = embedded_directions(scheme, channels, directions);
    const RMatrix gains = detail::gain_matrix(channels.stacked(), embedded);
    const Index n = channels.n_antennas();
    RVector p = RVector::Ones(gains.rows());
    auto bs = detail::per_bs_power(embedded, p, n);
    p *= cfg.power / std::max(bs[0], bs[1]);
    bs = detail::per_bs_power(embedded, p, n);

    MaxMinResult result;
    PrecodingSolution &sol = result.solution;
    sol.scheme = scheme;
    sol.directions = directions;
    sol.sinrs = detail::downlink_sinrs(gains, p, static_cast<double>(n), cfg.sigma2);
    sol.powers = std::move(p);
    sol.per_bs_power = bs;
    result.gamma_star = sol.sinrs.minCoeff();
    sol.gamma_target = result.gamma_star;
    return result;
}

struct CellSolution
{
    CMatrix directions;
    RVector powers;
    RVector sinrs;
    double power = 0.0;
};

// Optimal single-cell beamformers with no external interference.
class IsolatedCell
{
  public:
    IsolatedCell(const ChannelMatrix &h, double sigma2, const SolverSettings &settings)
        : sys_(detail::single_cell_system(h)), sigma2_(sigma2), settings_(settings)
    {
    }

    CellSolution solve(double gamma)
    {
        const DualSolution dual = detail::fixed_point(sys_, gamma, 1.0, settings_, warm_ ? &*warm_ : nullptr);
        warm_ = dual.lambdas;
        CellSolution out;
        out.directions = detail::mmse_directions(sys_, dual.lambdas);
        const RMatrix gains = detail::gain_matrix(sys_.channels, out.directions);
        const double n = sys_.normalizer;
        out.powers = detail::joint_downlink_powers(gains, gamma, n, sigma2_);
        out.sinrs = detail::downlink_sinrs(gains, out.powers, n, sigma2_);
        out.power = out.powers.sum() / n;
        return out;
    }

    const detail::UplinkSystem &system() const { return sys_; }

  private:
    detail::UplinkSystem sys_;
    double sigma2_;
    SolverSettings settings_;
    std::optional<RVector> warm_;
};

MaxMinResult time_division(const ChannelSet &channels, const MaxMinSettings &settings)
{
    const SystemConfig &cfg = channels.config();
    const double budget = 2.0 * cfg.power;
    const double beta = cfg.beta();
    MaxMinResult result;
    std::array<std::optional<IsolatedCell>, 2> cells;
    std::array<double, 2> gammas{0.0, 0.0};
    for (int j = 0; j < 2; ++j)
    {
        auto &cell = cells[static_cast<std::size_t>(j)];
        cell.emplace(channels.block(j, j), cfg.sigma2, settings.solver);
        auto f = [&](double gamma) {
            ++result.bisection_iterations;
            try
            {
                return cell->solve(gamma).power / budget - 1.0;
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
        const double max_gain = channels.block(j, j).rowwise().squaredNorm().maxCoeff();
        const double upper = budget * max_gain / cfg.sigma2;
        if (!(upper > 0.0))
            return result;
        // An isolated cell at power 2P behaves like the zero-interference
        // limit of SCP with doubled SNR.
        const double guess = std::min(gamma_star(Scheme::SCP, beta, 0.0, 2.0 * cfg.snr()), 0.5 * upper);
        const auto search = detail::largest_feasible(f, guess, upper, settings.gamma_tolerance, settings.max_evaluations);
        if (!search.found)
            return result;
        gammas[static_cast<std::size_t>(j)] = search.bracket.lo;
        result.bracket_width = std::max(result.bracket_width, search.bracket.width());
    }

    const double gamma = std::min(gammas[0], gammas[1]);
    if (!(gamma > 0.0))
        return result;
    const Index n = channels.n_antennas();
    const Index k = channels.n_users();
    PrecodingSolution &sol = result.solution;
    sol.scheme = Scheme::SCP;
    sol.directions.resize(n, 2 * k);
    sol.powers.resize(2 * k);
    sol.sinrs.resize(2 * k);
    for (int j = 0; j < 2; ++j)
    {
        const CellSolution cs = cells[static_cast<std::size_t>(j)]->solve(gamma);
        sol.directions.middleCols(j * k, k) = cs.directions;
        sol.powers.segment(j * k, k) = cs.powers;
        sol.sinrs.segment(j * k, k) = cs.sinrs;
        sol.per_bs_power[static_cast<std::size_t>(j)] = cs.power;
    }
    sol.gamma_target = gamma;
    result.gamma_star = gamma;
    return result;
}

} // namespace

Scheme baseline_scheme(Baseline baseline)
{
    switch (baseline)
    {
    case Baseline::SCP_ZF:
    case Baseline::TD_SCP:
        return Scheme::SCP;
    case Baseline::GZF:
        return Scheme::CBF;
    case Baseline::MCP_ZF:
        break;
    }
    return Scheme::MCP;
}

CMatrix zf_directions(Baseline baseline, const ChannelSet &channels)
{
    const Index n = channels.n_antennas();
    const Index k = channels.n_users();
    switch (baseline)
    {
    case Baseline::SCP_ZF: {
        if (k > n)
            throw DimensionError("SCP-ZF needs K <= N");
        CMatrix out(n, 2 * k);
        for (int j = 0; j < 2; ++j)
            out.middleCols(j * k, k) = pinv_served(channels.block(j, j), CMatrix(0, n));
        return out;
    }
    case Baseline::GZF: {
        if (2 * k > n)
            throw DimensionError("GZF needs 2K <= N");
        CMatrix out(n, 2 * k);
        for (int j = 0; j < 2; ++j)
            out.middleCols(j * k, k) = pinv_served(channels.block(j, j), channels.block(1 - j, j));
        return out;
    }
    case Baseline::MCP_ZF:
        if (k > n)
            throw DimensionError("MCP-ZF needs 2K <= 2N");
        return pinv_served(channels.stacked(), CMatrix(0, 2 * n));
    case Baseline::TD_SCP:
        break;
    }
    throw std::invalid_argument("time division has no zero-forcing directions");
}

MaxMinResult baseline_max_min(Baseline baseline, const ChannelSet &channels, const MaxMinSettings &settings,
                              ZfPowerPolicy policy)
{
    settings.solver.validate();
    channels.config().validate();
    if (baseline == Baseline::TD_SCP)
        return time_division(channels, settings);
    const CMatrix directions = zf_directions(baseline, channels);
    if (policy == ZfPowerPolicy::EqualPower)
        return equal_power(baseline, channels, directions);
    return fixed_direction_max_min(baseline, channels, directions, settings);
}

double baseline_rate(Baseline baseline, double beta, double gamma)
{
    const double rate = beta * std::log1p(std::max(gamma, 0.0));
    return baseline == Baseline::TD_SCP ? 0.5 * rate : rate;
}

} // namespace cellbeam
