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

#include "cellbeam/detail/network.hpp"
#include "cellbeam/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace cellbeam::detail
{

namespace
{

std::vector<Index> iota_range(Index first, Index count)
{
    std::vector<Index> out(static_cast<std::size_t>(count));
    std::iota(out.begin(), out.end(), first);
    return out;
}

CMatrix covariance(const Receiver &rx, const RVector &lambdas, double normalizer)
{
    CMatrix cov = CMatrix::Zero(rx.dim, rx.dim);
    cov.diagonal() = rx.noise.cast<Complex>();
    CMatrix scaled(rx.dim, static_cast<Index>(rx.contributors.size()));
    for (std::size_t c = 0; c < rx.contributors.size(); ++c)
    {
        const double w = std::sqrt(std::max(lambdas(rx.contributors[c]), 0.0) / normalizer);
        scaled.col(static_cast<Index>(c)) = w * rx.rows.row(static_cast<Index>(c)).adjoint();
    }
    cov.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    return cov;
}

} // namespace

Receiver make_receiver(const CMatrix &channels, Index offset, Index dim, RVector noise,
                       std::vector<Index> contributors, std::vector<Index> served)
{
    Receiver rx;
    rx.offset = offset;
    rx.dim = dim;
    rx.noise = std::move(noise);
    rx.contributors = std::move(contributors);
    rx.served = std::move(served);
    rx.rows.resize(static_cast<Index>(rx.contributors.size()), dim);
    for (std::size_t c = 0; c < rx.contributors.size(); ++c)
        rx.rows.row(static_cast<Index>(c)) = channels.block(rx.contributors[c], offset, 1, dim);
    for (Index u : rx.served)
    {
        auto it = std::find(rx.contributors.begin(), rx.contributors.end(), u);
        if (it == rx.contributors.end())
            throw std::logic_error("served user must contribute to its receiver");
        rx.served_rows.push_back(static_cast<Index>(it - rx.contributors.begin()));
    }
    return rx;
}

void finalize(UplinkSystem &sys)
{
    sys.serving.assign(static_cast<std::size_t>(sys.n_users()), -1);
    for (std::size_t r = 0; r < sys.receivers.size(); ++r)
        for (Index u : sys.receivers[r].served)
            sys.serving[static_cast<std::size_t>(u)] = static_cast<int>(r);
}

UplinkSystem single_cell_system(const ChannelMatrix &cell_channels)
{
    UplinkSystem sys;
    sys.channels = cell_channels;
    sys.normalizer = static_cast<double>(cell_channels.cols());
    const Index k = cell_channels.rows();
    const Index n = cell_channels.cols();
    sys.receivers.push_back(
        make_receiver(sys.channels, 0, n, RVector::Ones(n), iota_range(0, k), iota_range(0, k)));
    finalize(sys);
    return sys;
}

UplinkSystem scp_system(const ChannelSet &channels)
{
    UplinkSystem sys;
    sys.channels = channels.stacked();
    const Index n = channels.n_antennas();
    const Index k = channels.n_users();
    sys.normalizer = static_cast<double>(n);
    for (int j = 0; j < 2; ++j)
        sys.receivers.push_back(make_receiver(sys.channels, j * n, n, RVector::Ones(n), iota_range(j * k, k),
                                              iota_range(j * k, k)));
    finalize(sys);
    return sys;
}

UplinkSystem cbf_system(const ChannelSet &channels, std::array<double, 2> mus)
{
    UplinkSystem sys;
    sys.channels = channels.stacked();
    const Index n = channels.n_antennas();
    const Index k = channels.n_users();
    sys.normalizer = static_cast<double>(n);
    for (int j = 0; j < 2; ++j)
        sys.receivers.push_back(make_receiver(sys.channels, j * n, n, RVector::Constant(n, mus[j]),
                                              iota_range(0, 2 * k), iota_range(j * k, k)));
    finalize(sys);
    return sys;
}

UplinkSystem mcp_system(const ChannelSet &channels, std::array<double, 2> mus)
{
    UplinkSystem sys;
    sys.channels = channels.stacked();
    const Index n = channels.n_antennas();
    const Index k = channels.n_users();
    sys.normalizer = static_cast<double>(n);
    RVector noise(2 * n);
    noise.head(n).setConstant(mus[0]);
    noise.tail(n).setConstant(mus[1]);
    sys.receivers.push_back(make_receiver(sys.channels, 0, 2 * n, noise, iota_range(0, 2 * k), iota_range(0, 2 * k)));
    finalize(sys);
    return sys;
}

void set_mus(UplinkSystem &sys, Scheme scheme, Index n_antennas, std::array<double, 2> mus)
{
    if (scheme == Scheme::CBF)
    {
        for (int j = 0; j < 2; ++j)
            sys.receivers[static_cast<std::size_t>(j)].noise.setConstant(mus[j]);
    }
    else if (scheme == Scheme::MCP)
    {
        sys.receivers[0].noise.head(n_antennas).setConstant(mus[0]);
        sys.receivers[0].noise.tail(n_antennas).setConstant(mus[1]);
    }
}

RVector full_quadratic_forms(const UplinkSystem &sys, const RVector &lambdas)
{
    RVector q = RVector::Zero(sys.n_users());
    for (const auto &rx : sys.receivers)
    {
        if (rx.served.empty())
            continue;
        Eigen::LLT<CMatrix, Eigen::Lower> llt(covariance(rx, lambdas, sys.normalizer));
        if (llt.info() != Eigen::Success)
            throw InfeasibleError("uplink covariance is not positive definite");
        CMatrix rhs(rx.dim, static_cast<Index>(rx.served.size()));
        for (std::size_t i = 0; i < rx.served.size(); ++i)
            rhs.col(static_cast<Index>(i)) = rx.rows.row(rx.served_rows[i]).adjoint();
        CMatrix x = llt.solve(rhs);
        for (std::size_t i = 0; i < rx.served.size(); ++i)
        {
            const auto col = static_cast<Index>(i);
            q(rx.served[i]) = std::real(rhs.col(col).dot(x.col(col)));
        }
    }
    return q;
}

RVector interference_map(const UplinkSystem &sys, const RVector &lambdas, double gamma)
{
    const RVector q = full_quadratic_forms(sys, lambdas);
    RVector out(sys.n_users());
    for (Index u = 0; u < sys.n_users(); ++u)
    {
        if (!(q(u) > 0.0))
        {
            out(u) = std::numeric_limits<double>::infinity();
            continue;
        }
        // h C_{-u}^{-1} h^H = q / (1 - a q), a = lambda_u / N.
        out(u) = gamma * (sys.normalizer / q(u) - std::max(lambdas(u), 0.0));
    }
    return out;
}

RVector uplink_sinrs(const UplinkSystem &sys, const RVector &lambdas)
{
    const RVector q = full_quadratic_forms(sys, lambdas);
    RVector out(sys.n_users());
    for (Index u = 0; u < sys.n_users(); ++u)
    {
        const double a = lambdas(u) / sys.normalizer;
        out(u) = a * q(u) / (1.0 - a * q(u));
    }
    return out;
}

CMatrix mmse_directions(const UplinkSystem &sys, const RVector &lambdas)
{
    CMatrix dirs = CMatrix::Zero(sys.dimension(), sys.n_users());
    for (const auto &rx : sys.receivers)
    {
        if (rx.served.empty())
            continue;
        Eigen::LLT<CMatrix, Eigen::Lower> llt(covariance(rx, lambdas, sys.normalizer));
        if (llt.info() != Eigen::Success)
            throw InfeasibleError("uplink covariance is not positive definite");
        for (std::size_t i = 0; i < rx.served.size(); ++i)
        {
            // C^{-1} h^H is collinear with C_{-u}^{-1} h^H.
            CVector d = llt.solve(CVector(rx.rows.row(rx.served_rows[i]).adjoint()));
            const double norm = d.norm();
            if (!(norm > 0.0))
                throw InfeasibleError("zero channel: MMSE direction undefined");
            dirs.block(rx.offset, rx.served[i], rx.dim, 1) = d / norm;
        }
    }
    return dirs;
}

DualSolution fixed_point(const UplinkSystem &sys, double gamma, double sigma2, const SolverSettings &settings,
                         const RVector *initial)
{
    settings.validate();
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma must be positive and finite");
    const Index users = sys.n_users();

    // Divergence cap from the matched-filter powers.
    double min_gain = std::numeric_limits<double>::infinity();
    double max_noise = 0.0;
    for (const auto &rx : sys.receivers)
    {
        max_noise = std::max(max_noise, rx.noise.maxCoeff());
        for (Index pos : rx.served_rows)
            min_gain = std::min(min_gain, rx.rows.row(pos).squaredNorm());
    }
    if (!(min_gain > 0.0))
        throw InfeasibleError("a served user has an all-zero channel");
    const double cap = 1e6 * gamma * sys.normalizer * std::max(max_noise, 1.0) / min_gain;

    RVector lambda = initial ? *initial : RVector::Zero(users);
    if (lambda.size() != users)
        throw std::invalid_argument("initial dual vector has the wrong length");

    DualSolution sol;
    sol.gamma = gamma;
    double prev_residual = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int it = 1; it <= settings.max_iterations; ++it)
    {
        RVector next = interference_map(sys, lambda, gamma);
        if (!next.allFinite())
            throw InfeasibleError("dual fixed point diverged");
        if (settings.damping > 0.0)
            next = (1.0 - settings.damping) * next + settings.damping * lambda;

        double residual = 0.0;
        for (Index u = 0; u < users; ++u)
            residual = std::max(residual, std::abs(next(u) - lambda(u)) / next(u));
        const bool grew = next.sum() > lambda.sum();
        lambda = std::move(next);
        sol.iterations = it;
        sol.residual = residual;

        if (residual <= settings.tolerance)
        {
            sol.converged = true;
            break;
        }
        if (lambda.maxCoeff() > cap)
            throw InfeasibleError("dual powers exceeded the divergence cap");
        if (residual >= prev_residual && grew)
        {
            if (++stalled >= 50)
                throw InfeasibleError("dual iteration stopped contracting while powers grow");
        }
        else
        {
            stalled = 0;
        }
        prev_residual = residual;
    }
    if (!sol.converged)
        throw NotConvergedError("dual fixed point did not reach tolerance within max_iterations");

    sol.lambdas = std::move(lambda);
    sol.dual_objective = sol.lambdas.sum() * sigma2 / sys.normalizer;
    return sol;
}

RMatrix gain_matrix(const CMatrix &channels, const CMatrix &directions)
{
    return (channels * directions).cwiseAbs2();
}

RVector joint_downlink_powers(const RMatrix &gains, double gamma, double n_antennas, double sigma2)
{
    RMatrix a = -gains;
    a.diagonal() = gains.diagonal() / gamma;
    const RVector rhs = RVector::Constant(gains.rows(), n_antennas * sigma2);
    Eigen::PartialPivLU<RMatrix> lu(a);
    RVector p = lu.solve(rhs);
    if (!p.allFinite() || (p.array() <= 0.0).any())
        throw InfeasibleError("downlink power system has no positive solution");
    return p;
}

std::array<double, 2> per_bs_power(const CMatrix &directions, const RVector &powers, Index n_antennas)
{
    std::array<double, 2> out{0.0, 0.0};
    if (directions.rows() == n_antennas)
    {
        out[0] = powers.sum() / static_cast<double>(n_antennas);
        return out;
    }
    for (Index u = 0; u < directions.cols(); ++u)
    {
        const double pu = powers(u) / static_cast<double>(n_antennas);
        out[0] += pu * directions.col(u).head(n_antennas).squaredNorm();
        out[1] += pu * directions.col(u).tail(n_antennas).squaredNorm();
    }
    return out;
}

RVector downlink_sinrs(const RMatrix &gains, const RVector &powers, double n_antennas, double sigma2)
{
    const RVector received = gains * (powers / n_antennas);
    RVector out(gains.rows());
    for (Index u = 0; u < gains.rows(); ++u)
    {
        const double signal = powers(u) / n_antennas * gains(u, u);
        out(u) = signal / (sigma2 + received(u) - signal);
    }
    return out;
}

MuSearchOutcome mu_search(Scheme scheme, const ChannelSet &channels, double gamma, const SolverSettings &settings,
                          std::array<double, 2> start, const RVector *warm)
{
    if (scheme == Scheme::SCP)
        throw std::invalid_argument("mu_search applies to CBF and MCP only");
    const Index n = channels.n_antennas();
    const double sigma2 = channels.config().sigma2;
    UplinkSystem sys = scheme == Scheme::CBF ? cbf_system(channels, start) : mcp_system(channels, start);

    std::optional<RVector> warm_lambda;
    if (warm)
        warm_lambda = *warm;

    struct Eval
    {
        double mu1 = 1.0;
        double f = 0.0; // P_2 - P_1, nondecreasing in mu_1
        DualSolution dual;
        CMatrix dirs;
        RVector powers;
        std::array<double, 2> bs{0.0, 0.0};
    };
    int evaluations = 0;
    auto evaluate = [&](double mu1) {
        Eval e;
        e.mu1 = mu1;
        const std::array<double, 2> mus{mu1, 2.0 - mu1};
        set_mus(sys, scheme, n, mus);
        e.dual = fixed_point(sys, gamma, sigma2, settings, warm_lambda ? &*warm_lambda : nullptr);
        e.dual.scheme = scheme;
        e.dual.mus = mus;
        warm_lambda = e.dual.lambdas;
        e.dirs = mmse_directions(sys, e.dual.lambdas);
        e.powers = joint_downlink_powers(gain_matrix(sys.channels, e.dirs), gamma, static_cast<double>(n), sigma2);
        e.bs = per_bs_power(e.dirs, e.powers, n);
        e.f = e.bs[1] - e.bs[0];
        ++evaluations;
        return e;
    };

    const double lo_limit = kMuLow;
    const double hi_limit = 2.0 - kMuLow;
    Eval lo;
    Eval hi;
    bool have_lo = false;
    bool have_hi = false;
    Eval first = evaluate(std::clamp(start[0], lo_limit, hi_limit));
    std::optional<Eval> boundary;
    if (first.f <= 0.0)
    {
        lo = first;
        have_lo = true;
        double step = 0.05;
        while (!have_hi)
        {
            const double x = std::min(lo.mu1 + step, hi_limit);
            Eval e = evaluate(x);
            if (e.f > 0.0)
            {
                hi = std::move(e);
                have_hi = true;
            }
            else
            {
                lo = std::move(e);
                if (x >= hi_limit)
                {
                    boundary = lo;
                    break;
                }
            }
            step *= 2.0;
        }
    }
    else
    {
        hi = first;
        have_hi = true;
        double step = 0.05;
        while (!have_lo)
        {
            const double x = std::max(hi.mu1 - step, lo_limit);
            Eval e = evaluate(x);
            if (e.f <= 0.0)
            {
                lo = std::move(e);
                have_lo = true;
            }
            else
            {
                hi = std::move(e);
                if (x <= lo_limit)
                {
                    boundary = hi;
                    break;
                }
            }
            step *= 2.0;
        }
    }

    Eval best;
    if (boundary)
    {
        best = std::move(*boundary);
    }
    else
    {
        Bracket b{lo.mu1, hi.mu1, lo.f, hi.f, 0};
        auto f = [&](double mu1) {
            Eval e = evaluate(mu1);
            const double val = e.f;
            if (val <= 0.0)
                lo = std::move(e);
            else
                hi = std::move(e);
            return val;
        };
        shrink_bracket(f, b, 1e-11, 200);
        best = std::abs(lo.f) <= std::abs(hi.f) ? std::move(lo) : std::move(hi);
    }

    MuSearchOutcome out;
    out.mus = best.dual.mus;
    out.dual = std::move(best.dual);
    out.directions = std::move(best.dirs);
    out.powers = std::move(best.powers);
    out.bs_power = best.bs;
    out.evaluations = evaluations;
    return out;
}

} // namespace cellbeam::detail
