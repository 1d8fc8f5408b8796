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

#include <functional>

namespace cellbeam::detail
{

// Bracket [lo, hi] around the sign change of a nondecreasing function.
struct Bracket
{
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0; // <= 0
    double f_hi = 0.0; // > 0, may be +inf
    int evaluations = 0;

    double width() const { return hi - lo; }
};

// Shrinks a bracket of a nondecreasing function until hi - lo <= tol.
// Uses Illinois regula falsi while both end values are finite and falls back
// to bisection otherwise (an infinite value marks a point past a pole, such
// as a divergent power iteration). Trial points are kept at least tol/2 inside
// the bracket so the final steps collapse it.
Bracket shrink_bracket(const std::function<double(double)> &f, Bracket b, double tol, int max_evaluations);

struct FeasibleSearch
{
    bool found = false; // false: even the smallest probe was infeasible
    Bracket bracket;    // lo is the largest probe with f(lo) <= 0
};

// Largest x in (0, upper] with f(x) <= 0 for a nondecreasing f. Probes
// `guess` first, then steps outward geometrically to bracket the sign change
// and shrinks the bracket to width tol.
FeasibleSearch largest_feasible(const std::function<double(double)> &f, double guess, double upper, double tol,
                                int max_evaluations);

} // namespace cellbeam::detail
