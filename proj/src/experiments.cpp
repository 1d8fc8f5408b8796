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

#include "cellbeam/experiments.hpp"
#include "cellbeam/asymptotic.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace cellbeam
{

using nlohmann::json;

std::string_view to_string(ExperimentMode mode)
{
    switch (mode)
    {
    case ExperimentMode::OPTIMIZED:
        return "OPTIMIZED";
    case ExperimentMode::ASYMPTOTIC_BF:
        return "ASYMPTOTIC_BF";
    case ExperimentMode::LSA_ONLY:
        break;
    }
    return "LSA_ONLY";
}

std::optional<ExperimentMode> parse_mode(std::string_view text)
{
    std::string u(text);
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    std::replace(u.begin(), u.end(), '-', '_');
    if (u == "OPTIMIZED")
        return ExperimentMode::OPTIMIZED;
    if (u == "ASYMPTOTIC_BF")
        return ExperimentMode::ASYMPTOTIC_BF;
    if (u == "LSA_ONLY")
        return ExperimentMode::LSA_ONLY;
    return std::nullopt;
}

std::string Contender::name() const
{
    return std::visit([](auto v) { return std::string(to_string(v)); }, id);
}

std::optional<Contender> parse_contender(std::string_view text)
{
    if (auto s = parse_scheme(text))
        return Contender{*s};
    if (auto b = parse_baseline(text))
        return Contender{*b};
    return std::nullopt;
}

std::string format_number(double value)
{
    if (value == 0.0)
        return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void ExperimentSpec::validate() const
{
    if (schemes.empty())
        throw ConfigError("experiment: schemes list is empty");
    if (beta_grid.empty() || epsilon_grid.empty() || snr_db_grid.empty())
        throw ConfigError("experiment: beta, epsilon and snr_db grids must be nonempty");
    for (double b : beta_grid)
        if (!(b > 0.0) || !std::isfinite(b))
            throw ConfigError("experiment: beta values must be positive");
    for (double e : epsilon_grid)
        if (!(e >= 0.0) || !std::isfinite(e))
            throw ConfigError("experiment: epsilon values must be nonnegative");
    for (double s : snr_db_grid)
        if (!std::isfinite(s))
            throw ConfigError("experiment: snr_db values must be finite");
    base.validate();
    solver.solver.validate();
    if (!(solver.gamma_tolerance > 0.0))
        throw ConfigError("experiment: gamma_tolerance must be positive");
    if (mode == ExperimentMode::LSA_ONLY)
    {
        for (const auto &c : schemes)
            if (c.is_baseline() && std::get<Baseline>(c.id) != Baseline::TD_SCP)
                throw ConfigError("experiment: " + c.name() + " has no large-system form");
        return;
    }
    if (n_draws < 1)
        throw ConfigError("experiment: n_draws must be at least 1");
    if (mode == ExperimentMode::ASYMPTOTIC_BF)
        for (const auto &c : schemes)
            if (c.is_baseline())
                throw ConfigError("experiment: ASYMPTOTIC_BF applies to SCP, CBF and MCP only");
    for (double b : beta_grid)
        if (std::lround(b * static_cast<double>(base.n_antennas)) < 1)
            throw ConfigError("experiment: beta " + format_number(b) + " gives no users at N = " +
                              std::to_string(base.n_antennas));
}

namespace
{

std::vector<double> number_list(const json &v, const std::string &key)
{
    if (!v.is_array())
        throw ConfigError("experiment: " + key + " must be an array of numbers");
    std::vector<double> out;
    for (const auto &x : v)
    {
        if (!x.is_number())
            throw ConfigError("experiment: " + key + " must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

} // namespace

ExperimentSpec parse_experiment_spec(const std::string &text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("experiment: invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("experiment: document must be a JSON object");

    ExperimentSpec spec;
    json base = json::object();
    try
    {
        for (const auto &[key, value] : doc.items())
        {
            if (key == "schemes")
            {
                for (const auto &s : value)
                {
                    const auto c = parse_contender(s.get<std::string>());
                    if (!c)
                        throw ConfigError("experiment: unknown scheme '" + s.get<std::string>() + "'");
                    spec.schemes.push_back(*c);
                }
            }
            else if (key == "beta_grid")
                spec.beta_grid = number_list(value, key);
            else if (key == "epsilon_grid")
                spec.epsilon_grid = number_list(value, key);
            else if (key == "snr_db_grid")
                spec.snr_db_grid = number_list(value, key);
            else if (key == "n_draws")
                spec.n_draws = value.get<int>();
            else if (key == "base")
                base.update(value);
            else if (key == "n_antennas" || key == "sigma2" || key == "seed")
                base[key] = value;
            else if (key == "mode")
            {
                const auto m = parse_mode(value.get<std::string>());
                if (!m)
                    throw ConfigError("experiment: unknown mode '" + value.get<std::string>() + "'");
                spec.mode = *m;
            }
            else if (key == "output_path")
                spec.output_path = value.get<std::string>();
            else if (key == "record_wall_time")
                spec.record_wall_time = value.get<bool>();
            else if (key == "threads")
                spec.threads = value.get<int>();
            else if (key == "zf_power_policy")
            {
                const auto p = value.get<std::string>();
                if (p == "balanced")
                    spec.zf_power = ZfPowerPolicy::BalancedSinr;
                else if (p == "equal")
                    spec.zf_power = ZfPowerPolicy::EqualPower;
                else
                    throw ConfigError("experiment: zf_power_policy must be 'balanced' or 'equal'");
            }
            else if (key == "gamma_tolerance")
                spec.solver.gamma_tolerance = value.get<double>();
            else if (key == "tolerance")
                spec.solver.solver.tolerance = value.get<double>();
            else if (key == "max_iterations")
                spec.solver.solver.max_iterations = value.get<int>();
            else if (key == "damping")
                spec.solver.solver.damping = value.get<double>();
            else
                throw ConfigError("experiment: unknown key '" + key + "'");
        }
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("experiment: wrong value type: ") + e.what());
    }
    spec.base = parse_config(base.dump());
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("experiment: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment_spec(buf.str());
}

int resolve_thread_count(int requested)
{
    if (const char *env = std::getenv("CELLBEAM_THREADS"))
    {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<int>(std::min<long>(v, 1024));
    }
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace
{

struct GridPoint
{
    double beta;
    double epsilon;
    double snr_db;
};

std::vector<GridPoint> grid(const ExperimentSpec &spec)
{
    std::vector<GridPoint> out;
    for (double b : spec.beta_grid)
        for (double e : spec.epsilon_grid)
            for (double s : spec.snr_db_grid)
                out.push_back({b, e, s});
    return out;
}

SystemConfig point_config(const ExperimentSpec &spec, const GridPoint &gp, double load_factor)
{
    SystemConfig cfg = spec.base;
    cfg.n_users = std::max<Index>(1, std::lround(load_factor * gp.beta * static_cast<double>(cfg.n_antennas)));
    cfg.epsilon = gp.epsilon;
    cfg.power = std::pow(10.0, gp.snr_db / 10.0) * cfg.sigma2;
    return cfg;
}

double min_sinr(const PrecodingSolution &sol)
{
    return sol.sinrs.size() > 0 ? std::max(sol.sinrs.minCoeff(), 0.0) : 0.0;
}

void set_rate(ResultRow &row, double rate_nats)
{
    row.rate_nats = rate_nats;
    row.rate_bits = rate_nats / std::log(2.0);
}

ResultRow lsa_row(const Contender &who, const GridPoint &gp)
{
    ResultRow row;
    row.scheme = who.name();
    row.beta = gp.beta;
    row.epsilon = gp.epsilon;
    row.snr_db = gp.snr_db;
    const double snr = std::pow(10.0, gp.snr_db / 10.0);
    const CurvePoint cp = curve_point(who, gp.beta, gp.epsilon, gp.snr_db);
    row.gamma = cp.gamma_star;
    set_rate(row, cp.rate);
    row.converged = cp.feasible;
    if (!who.is_baseline())
    {
        const auto pt = asymptotic_point(std::get<Scheme>(who.id), gp.beta, gp.epsilon, snr, 1.0);
        row.per_bs_power = {pt.big_p_bar, pt.big_p_bar};
    }
    else
    {
        row.per_bs_power = {snr, snr};
    }
    return row;
}

ResultRow draw_row(const Contender &who, const ExperimentSpec &spec, const GridPoint &gp, int draw,
                   const ChannelSet &shared)
{
    ResultRow row;
    row.scheme = who.name();
    row.epsilon = gp.epsilon;
    row.snr_db = gp.snr_db;
    row.draw_id = draw;
    row.beta = shared.config().beta();
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
        if (who.is_baseline())
        {
            const Baseline b = std::get<Baseline>(who.id);
            if (b == Baseline::TD_SCP)
            {
                // One cell per slot at twice the simultaneous loading.
                const SystemConfig cfg = point_config(spec, gp, 2.0);
                const ChannelSet ch = sample_channels(cfg, static_cast<std::uint64_t>(draw));
                row.beta = 0.5 * cfg.beta();
                const MaxMinResult r = baseline_max_min(b, ch, spec.solver, spec.zf_power);
                row.gamma = r.gamma_star;
                set_rate(row, baseline_rate(b, cfg.beta(), min_sinr(r.solution)));
                row.per_bs_power = r.solution.per_bs_power;
                row.converged = r.gamma_star > 0.0;
            }
            else
            {
                const MaxMinResult r = baseline_max_min(b, shared, spec.solver, spec.zf_power);
                row.gamma = r.gamma_star;
                set_rate(row, baseline_rate(b, row.beta, min_sinr(r.solution)));
                row.per_bs_power = r.solution.per_bs_power;
                row.converged = r.gamma_star > 0.0;
            }
        }
        else
        {
            const Scheme s = std::get<Scheme>(who.id);
            const SystemConfig &cfg = shared.config();
            PrecodingSolution sol;
            if (spec.mode == ExperimentMode::ASYMPTOTIC_BF)
            {
                const double target = gamma_star(s, cfg.beta(), cfg.epsilon, cfg.snr());
                sol = asymptotic_beamformers(s, shared, target);
                row.gamma = min_sinr(sol);
                row.converged = true;
            }
            else
            {
                MaxMinResult r = max_min_sinr(s, shared, spec.solver);
                row.gamma = r.gamma_star;
                row.converged = r.gamma_star > 0.0;
                sol = std::move(r.solution);
            }
            set_rate(row, row.beta * std::log1p(min_sinr(sol)));
            row.per_bs_power = sol.per_bs_power;
        }
    }
    catch (const std::exception &)
    {
        row.gamma = 0.0;
        set_rate(row, 0.0);
        row.per_bs_power = {0.0, 0.0};
        row.converged = false;
    }
    if (spec.record_wall_time)
        row.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec &spec)
{
    spec.validate();
    const auto points = grid(spec);
    const std::size_t per_task = spec.schemes.size();

    if (spec.mode == ExperimentMode::LSA_ONLY)
    {
        std::vector<ResultRow> rows;
        for (const auto &gp : points)
            for (const auto &who : spec.schemes)
                rows.push_back(lsa_row(who, gp));
        return rows;
    }

    const std::size_t draws = static_cast<std::size_t>(spec.n_draws);
    const std::size_t tasks = points.size() * draws;
    std::vector<ResultRow> rows(tasks * per_task);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true)
        {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks)
                return;
            const GridPoint &gp = points[t / draws];
            const int draw = static_cast<int>(t % draws);
            const ChannelSet shared =
                sample_channels(point_config(spec, gp, 1.0), static_cast<std::uint64_t>(draw));
            for (std::size_t s = 0; s < per_task; ++s)
                rows[t * per_task + s] = draw_row(spec.schemes[s], spec, gp, draw, shared);
        }
    };

    const int threads = std::min<int>(resolve_thread_count(spec.threads), static_cast<int>(tasks));
    if (threads <= 1)
    {
        worker();
        return rows;
    }
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i)
        pool.emplace_back(worker);
    pool.clear();
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows)
{
    struct Acc
    {
        SummaryRow row;
        std::vector<double> rates;
        double gamma_sum = 0.0;
    };
    std::vector<Acc> groups;
    std::map<std::tuple<std::string, double, double, double>, std::size_t> index;
    for (const auto &r : rows)
    {
        const auto key = std::make_tuple(r.scheme, r.beta, r.epsilon, r.snr_db);
        auto it = index.find(key);
        if (it == index.end())
        {
            it = index.emplace(key, groups.size()).first;
            Acc acc;
            acc.row.scheme = r.scheme;
            acc.row.beta = r.beta;
            acc.row.epsilon = r.epsilon;
            acc.row.snr_db = r.snr_db;
            groups.push_back(std::move(acc));
        }
        Acc &acc = groups[it->second];
        ++acc.row.draws;
        if (!r.converged)
        {
            ++acc.row.failures;
            continue;
        }
        acc.rates.push_back(r.rate_nats);
        acc.gamma_sum += r.gamma;
    }

    std::vector<SummaryRow> out;
    for (auto &acc : groups)
    {
        SummaryRow row = acc.row;
        const auto n = static_cast<double>(acc.rates.size());
        if (!acc.rates.empty())
        {
            double sum = 0.0;
            for (double v : acc.rates)
                sum += v;
            row.mean_rate_nats = sum / n;
            row.mean_gamma = acc.gamma_sum / n;
            if (acc.rates.size() > 1)
            {
                double ss = 0.0;
                for (double v : acc.rates)
                    ss += (v - row.mean_rate_nats) * (v - row.mean_rate_nats);
                row.stderr_rate_nats = std::sqrt(ss / (n - 1.0) / n);
            }
        }
        row.degenerate = 2 * row.failures > row.draws;
        out.push_back(std::move(row));
    }
    return out;
}

namespace
{

void append_row(std::string &out, const ResultRow &r)
{
    out += r.scheme;
    for (double v : {r.beta, r.epsilon, r.snr_db})
    {
        out += ',';
        out += format_number(v);
    }
    out += ',';
    out += std::to_string(r.draw_id);
    for (double v : {r.gamma, r.rate_nats, r.rate_bits, r.per_bs_power[0], r.per_bs_power[1]})
    {
        out += ',';
        out += format_number(v);
    }
    out += r.converged ? ",true," : ",false,";
    out += format_number(r.wall_time_ms);
}

} // namespace

std::string to_csv(const std::vector<ResultRow> &rows)
{
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto &r : rows)
    {
        append_row(out, r);
        out += '\n';
    }
    return out;
}

std::string summary_json(const std::vector<SummaryRow> &summary, const ExperimentSpec &spec)
{
    json points = json::array();
    for (const auto &s : summary)
    {
        json p = {{"scheme", s.scheme},
                  {"beta", s.beta},
                  {"epsilon", s.epsilon},
                  {"snr_db", s.snr_db},
                  {"draws", s.draws},
                  {"failures", s.failures},
                  {"mean_rate_nats", s.mean_rate_nats},
                  {"mean_rate_bits", s.mean_rate_nats / std::log(2.0)},
                  {"mean_gamma", s.mean_gamma},
                  {"degenerate", s.degenerate}};
        p["stderr_rate_nats"] = s.stderr_rate_nats ? json(*s.stderr_rate_nats) : json(nullptr);
        points.push_back(std::move(p));
    }
    json doc = {{"metadata",
                 {{"mode", std::string(to_string(spec.mode))},
                  {"n_draws", spec.n_draws},
                  {"n_antennas", spec.base.n_antennas},
                  {"seed", spec.base.seed},
                  {"rate_definition", "beta * ln(1 + min_k SINR_k)"}}},
                {"points", std::move(points)}};
    return doc.dump(2) + "\n";
}

LsaOverlay lsa_overlay(const ResultRow &row)
{
    LsaOverlay out;
    const auto who = parse_contender(row.scheme);
    if (!who || !(row.beta > 0.0))
        return out;
    if (who->is_baseline() && std::get<Baseline>(who->id) != Baseline::TD_SCP)
        return out;
    const CurvePoint cp = curve_point(*who, row.beta, row.epsilon, row.snr_db);
    out.gamma = cp.gamma_star;
    out.rate_nats = cp.rate;
    return out;
}

std::string compare_csv(const std::vector<ResultRow> &rows)
{
    std::string out = std::string(kCsvHeader) + ",lsa_gamma,lsa_rate_nats\n";
    for (const auto &r : rows)
    {
        append_row(out, r);
        const LsaOverlay lsa = lsa_overlay(r);
        out += ',';
        if (lsa.gamma)
            out += format_number(*lsa.gamma);
        out += ',';
        if (lsa.rate_nats)
            out += format_number(*lsa.rate_nats);
        out += '\n';
    }
    return out;
}

CurvePoint curve_point(const Contender &who, double beta, double epsilon, double snr_db)
{
    CurvePoint cp;
    cp.scheme = who.name();
    cp.beta = beta;
    cp.epsilon = epsilon;
    cp.snr_db = snr_db;
    const double snr = std::pow(10.0, snr_db / 10.0);
    if (who.is_baseline())
    {
        if (std::get<Baseline>(who.id) != Baseline::TD_SCP)
            throw ConfigError(who.name() + " has no large-system form");
        cp.gamma_star = td_gamma_star(beta, snr);
        cp.rate = td_rate(beta, snr);
        cp.feasible = true;
        return cp;
    }
    const Scheme s = std::get<Scheme>(who.id);
    const AsymptoticPoint pt = asymptotic_point(s, beta, epsilon, snr, 1.0);
    cp.gamma_star = pt.gamma_star;
    cp.rate = beta * std::log1p(pt.gamma_star);
    cp.feasible = pt.feasible;
    return cp;
}

std::string curve_csv(const std::vector<CurvePoint> &points)
{
    std::string out = "scheme,beta,epsilon,snr_db,gamma_star,rate,feasible\n";
    for (const auto &p : points)
    {
        out += p.scheme;
        for (double v : {p.beta, p.epsilon, p.snr_db, p.gamma_star, p.rate})
        {
            out += ',';
            out += format_number(v);
        }
        out += p.feasible ? ",true\n" : ",false\n";
    }
    return out;
}

} // namespace cellbeam
