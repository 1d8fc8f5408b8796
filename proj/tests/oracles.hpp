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

// Reference computations written directly from the model definitions. They
// use dense inverses, long double arithmetic and plain loops on purpose and
// share no code with the library's solvers.

#include "cellbeam/channel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle
{

using cellbeam::ChannelSet;
using cellbeam::CMatrix;
using cellbeam::CRowVector;
using cellbeam::CVector;
using cellbeam::Index;
using cellbeam::RVector;
using cellbeam::Scheme;

// Positive root of a x^2 + b x + c = 0 (a > 0, c < 0) by the textbook formula.
inline double quadratic_root(long double a, long double b, long double c)
{
    return static_cast<double>((-b + std::sqrt(b * b - 4.0L * a * c)) / (2.0L * a));
}

// Bisection on a sign change, 300 halvings in long double.
inline double bisect(const std::function<long double(long double)> &f, long double lo, long double hi)
{
    long double f_lo = f(lo);
    for (int i = 0; i < 300; ++i)
    {
        const long double mid = 0.5L * (lo + hi);
        const long double fm = f(mid);
        if ((fm <= 0) == (f_lo <= 0))
        {
            lo = mid;
            f_lo = fm;
        }
        else
            hi = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

// CBf limit written as the cubic polynomial obtained by clearing the
// denominators of gamma = 1 / (beta (1/snr + eps/(1+eps g) + 1/(1+g))).
inline double cbf_gamma_star(double beta, double eps, double snr)
{
    const long double a = 1.0L / snr;
    auto poly = [&](long double g) {
        const long double u = 1 + eps * g;
        const long double v = 1 + g;
        return g * beta * (a * u * v + eps * v + u) - u * v;
    };
    long double hi = 1;
    while (poly(hi) <= 0)
        hi *= 2;
    return bisect(poly, 0, hi);
}

// Downlink SINRs from the system model. `dirs` holds one column per user
// u = cell*K + k: N rows (serving BS only) or 2N rows (both BSs).
inline RVector downlink_sinrs(const ChannelSet &ch, const CMatrix &dirs, const RVector &powers)
{
    const Index n = ch.n_antennas();
    const Index k = ch.n_users();
    const double s2 = ch.config().sigma2;
    const bool joint = dirs.rows() == 2 * n;
    // Transmit vector of user v on the full 2N antenna set.
    auto tx = [&](Index v) {
        CVector w = CVector::Zero(2 * n);
        const int cell = static_cast<int>(v / k);
        const double amp = std::sqrt(powers(v) / static_cast<double>(n));
        if (joint)
            w = amp * dirs.col(v);
        else
            w.segment(cell * n, n) = amp * dirs.col(v);
        return w;
    };
    RVector out(2 * k);
    for (Index u = 0; u < 2 * k; ++u)
    {
        const CRowVector h = ch.stacked_channel(u % k, static_cast<int>(u / k));
        long double signal = std::norm((h * tx(u))(0));
        long double interference = 0;
        for (Index v = 0; v < 2 * k; ++v)
            if (v != u)
                interference += std::norm((h * tx(v))(0));
        out(u) = static_cast<double>(signal / (s2 + interference));
    }
    return out;
}

// Per-BS transmit power sum_u ||E_j w_u||^2.
inline std::array<double, 2> bs_powers(const ChannelSet &ch, const CMatrix &dirs, const RVector &powers)
{
    const Index n = ch.n_antennas();
    const Index k = ch.n_users();
    std::array<double, 2> out{0.0, 0.0};
    for (Index u = 0; u < 2 * k; ++u)
    {
        const double scale = powers(u) / static_cast<double>(n);
        if (dirs.rows() == 2 * n)
        {
            out[0] += scale * dirs.col(u).head(n).squaredNorm();
            out[1] += scale * dirs.col(u).tail(n).squaredNorm();
        }
        else
            out[static_cast<std::size_t>(u / k)] += scale * dirs.col(u).squaredNorm();
    }
    return out;
}

// Virtual uplink quadratic forms h_u C_u^{-1} h_u^H with C_u built
// explicitly for each user (no rank-one updates).
inline double uplink_form(Scheme scheme, const ChannelSet &ch, const RVector &lambdas, std::array<double, 2> mus,
                          Index user, int cell)
{
    const Index n = ch.n_antennas();
    const Index k = ch.n_users();
    const double nn = static_cast<double>(n);
    const Index self = cell * k + user;
    if (scheme == Scheme::MCP)
    {
        CMatrix c = CMatrix::Zero(2 * n, 2 * n);
        c.diagonal().head(n).setConstant(mus[0]);
        c.diagonal().tail(n).setConstant(mus[1]);
        for (Index v = 0; v < 2 * k; ++v)
        {
            if (v == self)
                continue;
            const CRowVector h = ch.stacked_channel(v % k, static_cast<int>(v / k));
            c += lambdas(v) / nn * h.adjoint() * h;
        }
        const CRowVector h = ch.stacked_channel(user, cell);
        return (h * c.inverse() * h.adjoint())(0).real();
    }
    CMatrix c = CMatrix::Identity(n, n) * (scheme == Scheme::CBF ? mus[static_cast<std::size_t>(cell)] : 1.0);
    for (Index v = 0; v < 2 * k; ++v)
    {
        if (v == self)
            continue;
        const int vc = static_cast<int>(v / k);
        if (scheme == Scheme::SCP && vc != cell)
            continue;
        const CRowVector h = ch.channel(v % k, vc, cell);
        c += lambdas(v) / nn * h.adjoint() * h;
    }
    const CRowVector h = ch.channel(user, cell, cell);
    return (h * c.inverse() * h.adjoint())(0).real();
}

// Plain Jacobi iteration lambda_u <- gamma N / q_u(lambda) from `start`.
inline RVector dual_powers(Scheme scheme, const ChannelSet &ch, double gamma, std::array<double, 2> mus,
                           RVector start, int sweeps = 20000)
{
    const Index k = ch.n_users();
    const double nn = static_cast<double>(ch.n_antennas());
    RVector lam = std::move(start);
    for (int it = 0; it < sweeps; ++it)
    {
        RVector next(2 * k);
        for (Index u = 0; u < 2 * k; ++u)
            next(u) = gamma * nn / uplink_form(scheme, ch, lam, mus, u % k, static_cast<int>(u / k));
        const double change = ((next - lam).array().abs() / next.array()).maxCoeff();
        lam = next;
        if (change < 1e-14)
            break;
    }
    return lam;
}

// Unit vector spanning the projection of h^H onto the orthogonal
// complement of the rows of `nulled`, via an explicit Gram inverse.
inline CVector projected_direction(const CRowVector &h, const CMatrix &nulled)
{
    const Index d = h.size();
    CMatrix proj = CMatrix::Identity(d, d);
    if (nulled.rows() > 0)
        proj -= nulled.adjoint() * (nulled * nulled.adjoint()).inverse() * nulled;
    CVector v = proj * h.adjoint();
    return v / v.norm();
}

// |<a, b>| for unit vectors; 1 when collinear.
inline double alignment(const CVector &a, const CVector &b)
{
    return std::abs(a.dot(b));
}

// (1/N) tr (sum_u lambda_u/N g_u^H g_u + rho I)^{-1} for one Gaussian draw
// with per-user per-block variances. Blocks have size n; result per block.
inline std::vector<double> empirical_t(Index n, const std::vector<std::vector<double>> &user_block_variance,
                                       const std::vector<double> &lambdas, double rho, std::uint64_t seed)
{
    const std::size_t blocks = user_block_variance.front().size();
    const Index dim = n * static_cast<Index>(blocks);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix c = CMatrix::Identity(dim, dim) * rho;
    for (std::size_t u = 0; u < user_block_variance.size(); ++u)
    {
        CRowVector g(dim);
        for (std::size_t b = 0; b < blocks; ++b)
        {
            const double sd = std::sqrt(user_block_variance[u][b]);
            for (Index i = 0; i < n; ++i)
                g(static_cast<Index>(b) * n + i) = sd * std::complex<double>(normal(gen), normal(gen));
        }
        c += lambdas[u] / static_cast<double>(n) * g.adjoint() * g;
    }
    const CMatrix inv = c.inverse();
    std::vector<double> out(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
        out[b] = inv.diagonal().segment(static_cast<Index>(b) * n, n).real().sum() / static_cast<double>(n);
    return out;
}

} // namespace oracle
