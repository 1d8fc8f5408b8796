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

// JSON forms of the public data types. Complex entries are [re, im] pairs;
// a ChannelSet stores its config and the blocks in the order
// H(1,1), H(1,2), H(2,1), H(2,2) as arrays of rows.

#include "cellbeam/asymptotic.hpp"
#include "cellbeam/channel.hpp"
#include "cellbeam/downlink.hpp"
#include "cellbeam/dual_uplink.hpp"

#include <nlohmann/json.hpp>

namespace cellbeam
{

void to_json(nlohmann::json &j, const SystemConfig &cfg);
void from_json(const nlohmann::json &j, SystemConfig &cfg);

void to_json(nlohmann::json &j, const ChannelSet &channels);
ChannelSet channels_from_json(const nlohmann::json &j);

void to_json(nlohmann::json &j, const DualSolution &dual);
void to_json(nlohmann::json &j, const PrecodingSolution &sol);
void to_json(nlohmann::json &j, const MaxMinResult &result);
void to_json(nlohmann::json &j, const AsymptoticPoint &pt);
void to_json(nlohmann::json &j, const LoadingResult &result);

} // namespace cellbeam
