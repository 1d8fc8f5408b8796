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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cellbeam
{

using Complex = std::complex<double>;

// User-by-antenna channel blocks are stored row-major so that a user's
// channel row is contiguous.
using ChannelMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Cooperation level of the optimized schemes.
enum class Scheme
{
    SCP, // single cell processing
    CBF, // coordinated beamforming
    MCP  // multicell processing
};

// Suboptimal reference precoders.
enum class Baseline
{
    SCP_ZF,
    GZF,
    MCP_ZF,
    TD_SCP
};

std::string_view to_string(Scheme s);
std::string_view to_string(Baseline b);
std::optional<Scheme> parse_scheme(std::string_view text);
std::optional<Baseline> parse_baseline(std::string_view text);

// ---- error hierarchy --------------------------------------------------

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Invalid scenario or experiment description.
class ConfigError : public Error
{
  public:
    using Error::Error;
};

// The requested SINR target cannot be met (divergent dual iteration,
// negative downlink powers, or power budget exceeded).
class InfeasibleError : public Error
{
  public:
    using Error::Error;
};

// An iterative solver exhausted its budget without meeting its tolerance.
class NotConvergedError : public Error
{
  public:
    using Error::Error;
};

// Zero-forcing dimension requirement violated.
class DimensionError : public Error
{
  public:
    using Error::Error;
};

// Rank-deficient nulling matrix.
class RankError : public Error
{
  public:
    using Error::Error;
};

} // namespace cellbeam
