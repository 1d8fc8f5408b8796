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

#include "cellbeam/types.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace cellbeam
{

// Scenario parameters shared by every solver.
struct SystemConfig
{
    Index n_antennas = 1; // N, antennas per base station
    Index n_users = 1;    // K, users per cell
    double epsilon = 0.0; // cross-cell channel gain
    double sigma2 = 1.0;  // receiver noise power
    double power = 1.0;   // per-BS power budget P
    std::uint64_t seed = 0;

    // Throws ConfigError when an invariant is violated.
    void validate() const;

    double beta() const { return static_cast<double>(n_users) / static_cast<double>(n_antennas); }
    double snr() const { return power / sigma2; }
};

// Parses either a JSON object or a plain "key = value" document with keys
// n_antennas, n_users, epsilon, sigma2, power, seed. Missing keys keep their
// defaults; unknown keys are rejected.
SystemConfig parse_config(const std::string &text);
SystemConfig load_config(const std::string &path);

// One random draw of the two-cell channel. block(j_user, j_bs) holds the
// K x N matrix whose row k is the channel from BS j_bs to user k of cell
// j_user. Cells are 0-based.
class ChannelSet
{
  public:
    ChannelSet() = default;
    ChannelSet(SystemConfig config, std::array<ChannelMatrix, 4> blocks);

    const SystemConfig &config() const { return config_; }
    Index n_antennas() const { return config_.n_antennas; }
    Index n_users() const { return config_.n_users; }

    const ChannelMatrix &block(int user_cell, int bs) const;

    // Row k of block(cell, bs).
    CRowVector channel(Index user, int cell, int bs) const;

    // [h_{k,cell,1}, h_{k,cell,2}], length 2N.
    CRowVector stacked_channel(Index user, int cell) const;

    // All 2K stacked channels, cell-1 users first (row u = cell*K + k).
    CMatrix stacked() const;

    // Same draw with the two cells relabeled.
    ChannelSet swapped_cells() const;

  private:
    SystemConfig config_;
    std::array<ChannelMatrix, 4> blocks_;
};

// Draws H_{j',j} with CN(0,1) own-cell and CN(0,epsilon) cross-cell
// entries. Identical (config.seed, stream_id) pairs give bit-identical draws.
ChannelSet sample_channels(const SystemConfig &config, std::uint64_t stream_id);

} // namespace cellbeam
