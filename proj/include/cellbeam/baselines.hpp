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
#include "cellbeam/downlink.hpp"

namespace cellbeam
{

enum class ZfPowerPolicy
{
    BalancedSinr, // max-min SINR with the ZF directions held fixed
    EqualPower    // every user at the same power, peak BS at P
};

// Unit zero-forcing directions, one column per user u = cell * K + k.
//   SCP_ZF: N rows, nulls the other users of the same cell (K <= N).
//   GZF:    N rows, nulls every other user as seen from the serving BS (2K <= N).
//   MCP_ZF: 2N rows, nulls all other stacked channels (2K <= 2N).
// Channels that are identically zero impose no constraint.
CMatrix zf_directions(Baseline baseline, const ChannelSet &channels);

// Scheme whose SINR model and direction shape a baseline shares.
Scheme baseline_scheme(Baseline baseline);

// Max-min SINR of a baseline under per-BS budget P. TD_SCP serves one cell
// per slot with budget 2P and the optimal single-cell beamformers; its
// gamma_star is the smaller of the two cells' balanced SINRs.
MaxMinResult baseline_max_min(Baseline baseline, const ChannelSet &channels, const MaxMinSettings &settings = {},
                              ZfPowerPolicy policy = ZfPowerPolicy::BalancedSinr);

// Normalized rate in nats per antenna. TD_SCP users are active half the
// time.
double baseline_rate(Baseline baseline, double beta, double gamma);

} // namespace cellbeam
