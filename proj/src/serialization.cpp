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

#include "cellbeam/serialization.hpp"

#include <string>

namespace cellbeam
{

using nlohmann::json;

namespace
{

json real_vector(const RVector &v)
{
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

template <class M> json complex_rows(const M &m)
{
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r)
    {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

ChannelMatrix block_from_json(const json &rows, Index k, Index n)
{
    if (!rows.is_array() || static_cast<Index>(rows.size()) != k)
        throw ConfigError("channels: block must have K rows");
    ChannelMatrix m(k, n);
    for (Index r = 0; r < k; ++r)
    {
        const json &row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != n)
            throw ConfigError("channels: block row must have N entries");
        for (Index c = 0; c < n; ++c)
        {
            const json &z = row[static_cast<std::size_t>(c)];
            if (!z.is_array() || z.size() != 2)
                throw ConfigError("channels: entries must be [re, im] pairs");
            m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    return m;
}

} // namespace

void to_json(json &j, const SystemConfig &cfg)
{
    j = json{{"n_antennas", cfg.n_antennas}, {"n_users", cfg.n_users}, {"epsilon", cfg.epsilon},
             {"sigma2", cfg.sigma2},         {"power", cfg.power},     {"seed", cfg.seed}};
}

void from_json(const json &j, SystemConfig &cfg)
{
    cfg = parse_config(j.dump());
}

void to_json(json &j, const ChannelSet &channels)
{
    json blocks = json::array();
    for (int user_cell = 0; user_cell < 2; ++user_cell)
        for (int bs = 0; bs < 2; ++bs)
            blocks.push_back(complex_rows(channels.block(user_cell, bs)));
    j = json{{"config", channels.config()}, {"blocks", std::move(blocks)}};
}

ChannelSet channels_from_json(const json &j)
{
    if (!j.is_object() || !j.contains("config") || !j.contains("blocks"))
        throw ConfigError("channels: expected an object with 'config' and 'blocks'");
    const SystemConfig cfg = j.at("config").get<SystemConfig>();
    const json &blocks = j.at("blocks");
    if (!blocks.is_array() || blocks.size() != 4)
        throw ConfigError("channels: expected four blocks");
    std::array<ChannelMatrix, 4> out;
    for (std::size_t b = 0; b < 4; ++b)
        out[b] = block_from_json(blocks[b], cfg.n_users, cfg.n_antennas);
    return ChannelSet(cfg, std::move(out));
}

void to_json(json &j, const DualSolution &dual)
{
    j = json{{"scheme", std::string(to_string(dual.scheme))},
             {"gamma", dual.gamma},
             {"lambdas", real_vector(dual.lambdas)},
             {"mus", {dual.mus[0], dual.mus[1]}},
             {"dual_objective", dual.dual_objective},
             {"iterations", dual.iterations},
             {"converged", dual.converged},
             {"residual", dual.residual}};
}

void to_json(json &j, const PrecodingSolution &sol)
{
    // Directions are stored one user per entry.
    j = json{{"scheme", std::string(to_string(sol.scheme))},
             {"gamma_target", sol.gamma_target},
             {"powers", real_vector(sol.powers)},
             {"per_bs_power", {sol.per_bs_power[0], sol.per_bs_power[1]}},
             {"sinrs", real_vector(sol.sinrs)},
             {"directions", complex_rows(CMatrix(sol.directions.transpose()))}};
}

void to_json(json &j, const MaxMinResult &result)
{
    j = json{{"gamma_star", result.gamma_star},
             {"bisection_iterations", result.bisection_iterations},
             {"bracket_width", result.bracket_width},
             {"solution", result.solution}};
    j["dual"] = result.dual ? json(*result.dual) : json(nullptr);
}

void to_json(json &j, const AsymptoticPoint &pt)
{
    j = json{{"scheme", std::string(to_string(pt.scheme))},
             {"gamma_star", pt.gamma_star},
             {"lambda_bar", pt.lambda_bar},
             {"p_bar", pt.p_bar},
             {"big_p_bar", pt.big_p_bar},
             {"feasible", pt.feasible}};
}

void to_json(json &j, const LoadingResult &result)
{
    j = json{{"regime", result.regime == LoadingRegime::NoiseLimited ? "NoiseLimited" : "InteriorOptimum"},
             {"rate_at_star", result.rate_at_star}};
    j["beta_star"] = result.beta_star ? json(*result.beta_star) : json("Unbounded");
}

} // namespace cellbeam
