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

#include "cellbeam/channel.hpp"

#include <doctest.h>

#include <array>

namespace testing
{

inline cellbeam::SystemConfig config(cellbeam::Index n, cellbeam::Index k, double eps, double power = 10.0,
                                     std::uint64_t seed = 11)
{
    cellbeam::SystemConfig c;
    c.n_antennas = n;
    c.n_users = k;
    c.epsilon = eps;
    c.sigma2 = 1.0;
    c.power = power;
    c.seed = seed;
    return c;
}

inline cellbeam::ChannelSet draw(cellbeam::Index n, cellbeam::Index k, double eps, std::uint64_t stream = 0,
                                 double power = 10.0, std::uint64_t seed = 11)
{
    return cellbeam::sample_channels(config(n, k, eps, power, seed), stream);
}

// Channel set from explicit blocks H(0,0), H(0,1), H(1,0), H(1,1).
inline cellbeam::ChannelSet from_blocks(const cellbeam::SystemConfig &cfg, std::array<cellbeam::ChannelMatrix, 4> b)
{
    return cellbeam::ChannelSet(cfg, std::move(b));
}

inline constexpr std::array<cellbeam::Scheme, 3> kSchemes{cellbeam::Scheme::SCP, cellbeam::Scheme::CBF,
                                                          cellbeam::Scheme::MCP};

} // namespace testing
