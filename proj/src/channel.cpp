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

#include "cellbeam/channel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace cellbeam
{

namespace
{

std::string trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string &key, const std::string &value)
{
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !(in >> std::ws).eof())
        throw ConfigError("config: cannot parse value '" + value + "' for key '" + key + "'");
    return out;
}

void assign_key(SystemConfig &cfg, const std::string &key, const std::string &value)
{
    if (key == "n_antennas")
    {
        auto v = parse_number<long long>(key, value);
        if (v < 1)
            throw ConfigError("config: n_antennas must be >= 1");
        cfg.n_antennas = static_cast<Index>(v);
    }
    else if (key == "n_users")
    {
        auto v = parse_number<long long>(key, value);
        if (v < 1)
            throw ConfigError("config: n_users must be >= 1");
        cfg.n_users = static_cast<Index>(v);
    }
    else if (key == "epsilon")
        cfg.epsilon = parse_number<double>(key, value);
    else if (key == "sigma2")
        cfg.sigma2 = parse_number<double>(key, value);
    else if (key == "power")
        cfg.power = parse_number<double>(key, value);
    else if (key == "seed")
        cfg.seed = parse_number<std::uint64_t>(key, value);
    else
        throw ConfigError("config: unknown key '" + key + "'");
}

// 53-bit uniform in the open interval (0, 1).
double open_uniform(std::mt19937_64 &gen)
{
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace

void SystemConfig::validate() const
{
    if (n_antennas < 1)
        throw ConfigError("n_antennas must be >= 1");
    if (n_users < 1)
        throw ConfigError("n_users must be >= 1");
    if (!std::isfinite(epsilon) || epsilon < 0.0)
        throw ConfigError("epsilon must be finite and >= 0");
    if (!std::isfinite(sigma2) || sigma2 <= 0.0)
        throw ConfigError("sigma2 must be finite and > 0");
    if (!std::isfinite(power) || power <= 0.0)
        throw ConfigError("power must be finite and > 0");
}

SystemConfig parse_config(const std::string &text)
{
    SystemConfig cfg;
    auto body = trim(text);
    if (!body.empty() && body.front() == '{')
    {
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(body);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
        for (auto it = doc.begin(); it != doc.end(); ++it)
        {
            const auto &v = it.value();
            if (!v.is_number())
                throw ConfigError("config: value for '" + it.key() + "' must be a number");
            assign_key(cfg, it.key(), v.dump());
        }
    }
    else
    {
        std::istringstream in(body);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            auto stripped = trim(line);
            if (stripped.empty())
                continue;
            auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config: line " + std::to_string(line_no) + " is not key=value");
            assign_key(cfg, trim(std::string_view(stripped).substr(0, eq)),
                       trim(std::string_view(stripped).substr(eq + 1)));
        }
    }
    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ChannelSet::ChannelSet(SystemConfig config, std::array<ChannelMatrix, 4> blocks)
    : config_(config), blocks_(std::move(blocks))
{
    config_.validate();
    for (const auto &b : blocks_)
        if (b.rows() != config_.n_users || b.cols() != config_.n_antennas)
            throw std::invalid_argument("ChannelSet: every block must be K x N");
}

const ChannelMatrix &ChannelSet::block(int user_cell, int bs) const
{
    if (user_cell < 0 || user_cell > 1 || bs < 0 || bs > 1)
        throw std::out_of_range("ChannelSet: cell index out of range");
    return blocks_[static_cast<std::size_t>(user_cell * 2 + bs)];
}

CRowVector ChannelSet::channel(Index user, int cell, int bs) const
{
    const auto &b = block(cell, bs);
    if (user < 0 || user >= b.rows())
        throw std::out_of_range("ChannelSet: user index out of range");
    return b.row(user);
}

CRowVector ChannelSet::stacked_channel(Index user, int cell) const
{
    const Index n = n_antennas();
    CRowVector out(2 * n);
    out.head(n) = channel(user, cell, 0);
    out.tail(n) = channel(user, cell, 1);
    return out;
}

CMatrix ChannelSet::stacked() const
{
    const Index n = n_antennas();
    const Index k = n_users();
    CMatrix out(2 * k, 2 * n);
    for (int cell = 0; cell < 2; ++cell)
    {
        out.block(cell * k, 0, k, n) = block(cell, 0);
        out.block(cell * k, n, k, n) = block(cell, 1);
    }
    return out;
}

ChannelSet ChannelSet::swapped_cells() const
{
    return ChannelSet(config_, {block(1, 1), block(1, 0), block(0, 1), block(0, 0)});
}

ChannelSet sample_channels(const SystemConfig &config, std::uint64_t stream_id)
{
    config.validate();
    // seed_seq is fully specified by the standard, so the (seed, stream)
    // keyed engine state is identical across conforming implementations.
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(stream_id & 0xffffffffu),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x63656c6cu};
    std::mt19937_64 gen(seq);

    const Index k = config.n_users;
    const Index n = config.n_antennas;
    const double cross_scale = std::sqrt(config.epsilon);
    std::array<ChannelMatrix, 4> blocks;
    for (int user_cell = 0; user_cell < 2; ++user_cell)
    {
        for (int bs = 0; bs < 2; ++bs)
        {
            const double scale = (user_cell == bs ? 1.0 : cross_scale) * std::numbers::sqrt2 / 2.0;
            ChannelMatrix m(k, n);
            for (Index r = 0; r < k; ++r)
            {
                for (Index c = 0; c < n; ++c)
                {
                    // Box-Muller: both normals of the pair feed one entry.
                    const double radius = std::sqrt(-2.0 * std::log(open_uniform(gen)));
                    const double angle = 2.0 * std::numbers::pi * open_uniform(gen);
                    m(r, c) = Complex(scale * radius * std::cos(angle), scale * radius * std::sin(angle));
                }
            }
            blocks[static_cast<std::size_t>(user_cell * 2 + bs)] = std::move(m);
        }
    }
    return ChannelSet(config, std::move(blocks));
}

std::string_view to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::SCP:
        return "SCP";
    case Scheme::CBF:
        return "CBF";
    case Scheme::MCP:
        return "MCP";
    }
    return "?";
}

std::string_view to_string(Baseline b)
{
    switch (b)
    {
    case Baseline::SCP_ZF:
        return "SCP_ZF";
    case Baseline::GZF:
        return "GZF";
    case Baseline::MCP_ZF:
        return "MCP_ZF";
    case Baseline::TD_SCP:
        return "TD_SCP";
    }
    return "?";
}

namespace
{
std::string upper(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    std::replace(out.begin(), out.end(), '-', '_');
    return out;
}
} // namespace

std::optional<Scheme> parse_scheme(std::string_view text)
{
    auto u = upper(text);
    if (u == "SCP")
        return Scheme::SCP;
    if (u == "CBF")
        return Scheme::CBF;
    if (u == "MCP")
        return Scheme::MCP;
    return std::nullopt;
}

std::optional<Baseline> parse_baseline(std::string_view text)
{
    auto u = upper(text);
    if (u == "SCP_ZF")
        return Baseline::SCP_ZF;
    if (u == "GZF")
        return Baseline::GZF;
    if (u == "MCP_ZF")
        return Baseline::MCP_ZF;
    if (u == "TD_SCP" || u == "TD")
        return Baseline::TD_SCP;
    return std::nullopt;
}

} // namespace cellbeam
