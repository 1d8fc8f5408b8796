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

#include "cellbeam/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cellbeam::detail
{

Bracket shrink_bracket(const std::function<double(double)> &f, Bracket b, double tol, int max_evaluations)
{
    // Illinois bookkeeping: scaled copies of the stale end values.
    double g_lo = b.f_lo;
    double g_hi = b.f_hi;
    int stale_side = 0; // -1: lo kept twice, +1: hi kept twice
    double width_before = b.width();
    int since_halving = 0;

    while (b.width() > tol && b.evaluations < max_evaluations)
    {
        const double w = b.width();
        double x;
        const bool use_secant = std::isfinite(g_hi) && std::isfinite(g_lo) && g_hi > g_lo && since_halving < 3;
        if (use_secant)
            x = b.lo - g_lo * w / (g_hi - g_lo);
        else
            x = b.lo + 0.5 * w;
        const double margin = std::min(0.5 * tol, 0.25 * w);
        x = std::clamp(x, b.lo + margin, b.hi - margin);

        const double fx = f(x);
        ++b.evaluations;
        if (fx <= 0.0)
        {
            b.lo = x;
            b.f_lo = fx;
            g_lo = fx;
            if (stale_side == 1)
                g_hi *= 0.5;
            stale_side = 1;
        }
        else
        {
            b.hi = x;
            b.f_hi = fx;
            g_hi = fx;
            if (stale_side == -1)
                g_lo *= 0.5;
            stale_side = -1;
        }

        if (b.width() <= 0.5 * width_before)
        {
            width_before = b.width();
            since_halving = 0;
        }
        else
        {
            ++since_halving;
        }
        // After a forced bisection restart the secant bookkeeping.
        if (!use_secant)
        {
            g_lo = b.f_lo;
            g_hi = b.f_hi;
            stale_side = 0;
            since_halving = 0;
            width_before = b.width();
        }
    }
    return b;
}

FeasibleSearch largest_feasible(const std::function<double(double)> &f, double guess, double upper, double tol,
                                int max_evaluations)
{
    FeasibleSearch out;
    Bracket &b = out.bracket;
    const double f0 = f(guess);
    b.evaluations = 1;
    if (f0 <= 0.0)
    {
        b.lo = guess;
        b.f_lo = f0;
        double step = 0.25 * guess;
        while (true)
        {
            const double x = std::min(b.lo + step, upper);
            const double fx = f(x);
            ++b.evaluations;
            if (fx > 0.0)
            {
                b.hi = x;
                b.f_hi = fx;
                break;
            }
            b.lo = x;
            b.f_lo = fx;
            if (x >= upper)
            {
                b.hi = x;
                b.f_hi = std::numeric_limits<double>::infinity();
                out.found = true;
                return out;
            }
            step *= 2.0;
        }
    }
    else
    {
        b.hi = guess;
        b.f_hi = f0;
        double shrink = 0.25;
        while (true)
        {
            const double x = b.hi / (1.0 + shrink);
            const double fx = f(x);
            ++b.evaluations;
            if (fx <= 0.0)
            {
                b.lo = x;
                b.f_lo = fx;
                break;
            }
            b.hi = x;
            b.f_hi = fx;
            if (x < 1e-12 * upper)
            {
                b.lo = 0.0;
                b.f_lo = -1.0;
                return out;
            }
            shrink *= 2.0;
        }
    }
    b = shrink_bracket(f, b, tol, max_evaluations);
    out.found = true;
    return out;
}

} // namespace cellbeam::detail
