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

#include "cellbeam/asymptotic.hpp"
#include "cellbeam/detail/network.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <stdexcept>

namespace cellbeam
{

namespace
{

void require_positive(double value, const char *name)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

void require_nonnegative(double value, const char *name)
{
    if (!(value >= 0.0) || !std::isfinite(value))
        throw std::invalid_argument(std::string(name) + " must be nonnegative and finite");
}

// Positive root of a x^2 + b x - c = 0 with a >= 0, c > 0, avoiding
// cancellation in either sign of b.
double positive_root(double a, double b, double c)
{
    if (a == 0.0)
        return c / b;
    const double disc = std::sqrt(b * b + 4.0 * a * c);
    return b >= 0.0 ? 2.0 * c / (b + disc) : (disc - b) / (2.0 * a);
}

// Loading-normalized quadratic beta a g^2 + (beta a + beta - 1) g - 1 = 0
// shared by the SCP and MCP closed forms.
double balanced_quadratic(double beta, double a)
{
    return positive_root(beta * a, beta * a + beta - 1.0, 1.0);
}

double cbf_root(double beta, double epsilon, double snr)
{
    const double a = 1.0 / snr;
    auto g = [&](double gamma) {
        return gamma * beta * (a + epsilon / (1.0 + epsilon * gamma) + 1.0 / (1.0 + gamma)) - 1.0;
    };
    double hi = 1.0 / (beta * a);
    double g_hi = g(hi);
    while (!(g_hi > 0.0))
    {
        hi *= 2.0;
        g_hi = g(hi);
    }
    if (g_hi == 0.0)
        return hi;
    std::uintmax_t max_iter = 200;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
    const auto [lo_x, hi_x] = boost::math::tools::toms748_solve(g, 0.0, hi, -1.0, g_hi, tol, max_iter);
    const double g_lo = g(lo_x);
    const double g_hix = g(hi_x);
    return std::abs(g_lo) <= std::abs(g_hix) ? lo_x : hi_x;
}

template <class Map> double monotone_fixed_point(Map map, double start)
{
    double t = start;
    for (int it = 0; it < 1000000; ++it)
    {
        const double next = map(t);
        if (std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(next)))
            return next;
        t = next;
    }
    throw NotConvergedError("deterministic-equivalent fixed point did not converge");
}

} // namespace

double bandwidth_load(Scheme scheme, double gamma, double beta, double epsilon)
{
    require_positive(gamma, "gamma");
    require_positive(beta, "beta");
    require_nonnegative(epsilon, "epsilon");
    const double own = gamma / (1.0 + gamma);
    switch (scheme)
    {
    case Scheme::SCP:
        return beta * (own + epsilon * gamma);
    case Scheme::CBF:
        return beta * (own + epsilon * gamma / (1.0 + epsilon * gamma));
    case Scheme::MCP:
        break;
    }
    return beta * own;
}

std::optional<double> lambda_bar(Scheme scheme, double gamma, double beta, double epsilon)
{
    const double load = bandwidth_load(scheme, gamma, beta, epsilon);
    if (!(load < 1.0))
        return std::nullopt;
    switch (scheme)
    {
    case Scheme::SCP:
        return gamma / (1.0 - beta * gamma / (1.0 + gamma));
    case Scheme::CBF:
        return gamma / (1.0 - load);
    case Scheme::MCP:
        break;
    }
    return gamma / ((1.0 + epsilon) * (1.0 - load));
}

std::optional<double> p_bar(Scheme scheme, double gamma, double beta, double epsilon, double sigma2)
{
    require_positive(sigma2, "sigma2");
    const auto lambda = lambda_bar(scheme, gamma, beta, epsilon);
    if (!lambda)
        return std::nullopt;
    if (scheme == Scheme::SCP)
        return sigma2 * gamma / (1.0 - bandwidth_load(scheme, gamma, beta, epsilon));
    return *lambda * sigma2;
}

double gamma_star(Scheme scheme, double beta, double epsilon, double snr)
{
    require_positive(beta, "beta");
    require_nonnegative(epsilon, "epsilon");
    require_positive(snr, "snr");
    switch (scheme)
    {
    case Scheme::SCP:
        return balanced_quadratic(beta, 1.0 / snr + epsilon);
    case Scheme::CBF:
        return cbf_root(beta, epsilon, snr);
    case Scheme::MCP:
        break;
    }
    return balanced_quadratic(beta, 1.0 / ((1.0 + epsilon) * snr));
}

double gamma_star_residual(Scheme scheme, double gamma, double beta, double epsilon, double snr)
{
    double denom = 1.0 / (1.0 + gamma);
    switch (scheme)
    {
    case Scheme::SCP:
        denom += 1.0 / snr + epsilon;
        break;
    case Scheme::CBF:
        denom += 1.0 / snr + epsilon / (1.0 + epsilon * gamma);
        break;
    case Scheme::MCP:
        denom += 1.0 / ((1.0 + epsilon) * snr);
        break;
    }
    const double mapped = 1.0 / (beta * denom);
    return std::abs(gamma - mapped) / gamma;
}

AsymptoticPoint asymptotic_point(Scheme scheme, double beta, double epsilon, double snr, double sigma2)
{
    AsymptoticPoint pt;
    pt.scheme = scheme;
    pt.gamma_star = gamma_star(scheme, beta, epsilon, snr);
    const auto lambda = lambda_bar(scheme, pt.gamma_star, beta, epsilon);
    const auto p = p_bar(scheme, pt.gamma_star, beta, epsilon, sigma2);
    pt.feasible = lambda.has_value() && p.has_value();
    if (pt.feasible)
    {
        pt.lambda_bar = *lambda;
        pt.p_bar = *p;
        pt.big_p_bar = beta * *p;
    }
    return pt;
}

double effective_interference(Scheme scheme, double snr, double epsilon, double gamma, double beta)
{
    require_positive(snr, "snr");
    require_nonnegative(epsilon, "epsilon");
    require_positive(gamma, "gamma");
    require_positive(beta, "beta");
    const double own = snr / (1.0 + gamma);
    switch (scheme)
    {
    case Scheme::SCP:
        return beta * (1.0 + own + epsilon * snr);
    case Scheme::CBF:
        return beta * (1.0 + own + epsilon * snr / (1.0 + epsilon * gamma));
    case Scheme::MCP:
        break;
    }
    return beta * (1.0 + own + epsilon * snr / (1.0 + gamma));
}

bool is_feasible(Scheme scheme, double gamma, double beta, double epsilon)
{
    return bandwidth_load(scheme, gamma, beta, epsilon) < 1.0;
}

bool is_feasible(Scheme scheme, double gamma, double beta, double epsilon, double snr)
{
    const double gain = scheme == Scheme::MCP ? (1.0 + epsilon) * snr : snr;
    return gain / effective_interference(scheme, snr, epsilon, gamma, beta) > gamma;
}

double normalized_rate(Scheme scheme, double beta, double epsilon, double snr)
{
    return beta * std::log1p(gamma_star(scheme, beta, epsilon, snr));
}

bool noise_limited(Scheme scheme, double snr, double epsilon)
{
    require_positive(snr, "snr");
    require_nonnegative(epsilon, "epsilon");
    const double s = 1.0 / snr;
    switch (scheme)
    {
    case Scheme::SCP:
        return s + epsilon >= 1.0;
    case Scheme::CBF:
        return s + epsilon - 2.0 * epsilon * epsilon - 1.0 >= 0.0;
    case Scheme::MCP:
        break;
    }
    return s >= 1.0 + epsilon;
}

double rate_limit(Scheme scheme, double snr, double epsilon)
{
    const double s = 1.0 / snr;
    switch (scheme)
    {
    case Scheme::SCP:
    case Scheme::CBF:
        return 1.0 / (1.0 + s + epsilon);
    case Scheme::MCP:
        break;
    }
    return 1.0 / (1.0 + s / (1.0 + epsilon));
}

LoadingResult optimal_beta(Scheme scheme, double snr, double epsilon, const BetaSearchSettings &settings)
{
    require_positive(settings.beta_low, "beta_low");
    LoadingResult out;
    if (noise_limited(scheme, snr, epsilon))
    {
        out.regime = LoadingRegime::NoiseLimited;
        out.rate_at_star = rate_limit(scheme, snr, epsilon);
        return out;
    }

    auto rate = [&](double beta) { return normalized_rate(scheme, beta, epsilon, snr); };
    // Double the loading until the rate drops; the maximum then lies within
    // the last two doublings.
    double prev2 = settings.beta_low;
    double prev = settings.beta_low;
    double r_prev = rate(prev);
    double beta = 2.0 * prev;
    while (true)
    {
        const double r = rate(beta);
        if (r < r_prev)
            break;
        if (beta > settings.beta_max)
        {
            out.regime = LoadingRegime::NoiseLimited;
            out.rate_at_star = rate_limit(scheme, snr, epsilon);
            return out;
        }
        prev2 = prev;
        prev = beta;
        r_prev = r;
        beta *= 2.0;
    }
    auto negative_rate = [&](double b) { return -rate(b); };
    const auto [best, value] = boost::math::tools::brent_find_minima(negative_rate, prev2, beta, settings.bits);
    out.regime = LoadingRegime::InteriorOptimum;
    out.beta_star = best;
    out.rate_at_star = -value;
    return out;
}

double td_gamma_star(double beta, double snr)
{
    require_positive(beta, "beta");
    require_positive(snr, "snr");
    const double a = 1.0 / snr;
    return positive_root(beta * a, beta * a + 2.0 * beta - 1.0, 1.0);
}

double td_rate(double beta, double snr)
{
    return beta * std::log1p(td_gamma_star(beta, snr));
}

double t_scp(double rho, double lambda, double beta)
{
    require_positive(rho, "rho");
    require_nonnegative(lambda, "lambda");
    require_positive(beta, "beta");
    return monotone_fixed_point([&](double t) { return 1.0 / (rho + beta * lambda / (1.0 + lambda * t)); },
                                1.0 / rho);
}

double t_cbf(double rho, double lambda_own, double lambda_other, double beta, double epsilon)
{
    require_positive(rho, "rho");
    require_nonnegative(lambda_own, "lambda");
    require_nonnegative(lambda_other, "lambda");
    require_positive(beta, "beta");
    require_nonnegative(epsilon, "epsilon");
    return monotone_fixed_point(
        [&](double t) {
            return 1.0 / (rho + beta * lambda_own / (1.0 + lambda_own * t) +
                          beta * epsilon * lambda_other / (1.0 + epsilon * lambda_other * t));
        },
        1.0 / rho);
}

std::array<double, 2> t_mcp(double rho, std::array<double, 2> lambdas, std::array<double, 2> mus, double beta,
                            double epsilon)
{
    require_positive(rho, "rho");
    require_nonnegative(lambdas[0], "lambda");
    require_nonnegative(lambdas[1], "lambda");
    require_positive(mus[0], "mu");
    require_positive(mus[1], "mu");
    require_positive(beta, "beta");
    require_nonnegative(epsilon, "epsilon");
    const double l1 = lambdas[0];
    const double l2 = lambdas[1];
    const double m1 = mus[0];
    const double m2 = mus[1];
    double t1 = 1.0 / rho;
    double t2 = 1.0 / rho;
    for (int it = 0; it < 1000000; ++it)
    {
        const double d1 = 1.0 + l1 / m1 * t1 + epsilon * l1 / m2 * t2;
        const double d2 = 1.0 + epsilon * l2 / m1 * t1 + l2 / m2 * t2;
        const double n1 = 1.0 / (rho + beta * l1 / m1 / d1 + epsilon * beta * l2 / m1 / d2);
        const double n2 = 1.0 / (rho + beta * epsilon * l1 / m2 / d1 + beta * l2 / m2 / d2);
        const double change = std::max(std::abs(n1 - t1), std::abs(n2 - t2));
        t1 = n1;
        t2 = n2;
        if (change <= 1e-15 * std::max(1.0, std::max(t1, t2)))
            return {t1, t2};
    }
    throw NotConvergedError("deterministic-equivalent fixed point did not converge");
}

double t_mcp_symmetric(double rho, double lambda, double mu, double beta, double epsilon)
{
    require_positive(rho, "rho");
    require_nonnegative(lambda, "lambda");
    require_positive(mu, "mu");
    require_positive(beta, "beta");
    require_nonnegative(epsilon, "epsilon");
    const double g = (1.0 + epsilon) * lambda;
    return monotone_fixed_point([&](double t) { return 1.0 / (rho + beta * g / (mu + g * t)); }, 1.0 / rho);
}

PrecodingSolution asymptotic_beamformers(Scheme scheme, const ChannelSet &channels, double gamma)
{
    const SystemConfig &cfg = channels.config();
    const double beta = cfg.beta();
    const auto lambda = lambda_bar(scheme, gamma, beta, cfg.epsilon);
    const auto p = p_bar(scheme, gamma, beta, cfg.epsilon, cfg.sigma2);
    if (!lambda || !p)
        throw InfeasibleError("target is outside the large-system feasible region");

    const Index n = channels.n_antennas();
    const Index k = channels.n_users();
    const RVector lambdas = RVector::Constant(2 * k, *lambda);
    detail::UplinkSystem sys;
    switch (scheme)
    {
    case Scheme::SCP:
        sys = detail::scp_system(channels);
        break;
    case Scheme::CBF:
        sys = detail::cbf_system(channels, {1.0, 1.0});
        break;
    case Scheme::MCP:
        sys = detail::mcp_system(channels, {1.0, 1.0});
        break;
    }
    const CMatrix embedded = detail::mmse_directions(sys, lambdas);
    RVector powers = RVector::Constant(2 * k, *p);
    auto bs = detail::per_bs_power(embedded, powers, n);
    if (scheme == Scheme::MCP)
    {
        const double peak = std::max(bs[0], bs[1]);
        if (peak > cfg.power)
        {
            powers *= cfg.power / peak;
            bs = detail::per_bs_power(embedded, powers, n);
        }
    }

    PrecodingSolution sol;
    sol.scheme = scheme;
    if (scheme == Scheme::MCP)
    {
        sol.directions = embedded;
    }
    else
    {
        sol.directions.resize(n, 2 * k);
        for (Index u = 0; u < 2 * k; ++u)
            sol.directions.col(u) = embedded.col(u).segment((u / k) * n, n);
    }
    const RMatrix gains = detail::gain_matrix(sys.channels, embedded);
    sol.sinrs = detail::downlink_sinrs(gains, powers, static_cast<double>(n), cfg.sigma2);
    sol.powers = std::move(powers);
    sol.per_bs_power = bs;
    sol.gamma_target = gamma;
    return sol;
}

} // namespace cellbeam
