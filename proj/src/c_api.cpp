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

#include "cellbeam/cellbeam.h"

#include "cellbeam/asymptotic.hpp"
#include "cellbeam/baselines.hpp"
#include "cellbeam/experiments.hpp"
#include "cellbeam/serialization.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

struct cb_config
{
    cellbeam::SystemConfig value;
};

struct cb_channels
{
    cellbeam::ChannelSet value;
};

struct cb_experiment
{
    cellbeam::ExperimentSpec value;
};

namespace
{

thread_local std::string tl_error;

cb_status fail(cb_status status, const std::string &message)
{
    tl_error = message;
    return status;
}

bool readable(const char *path)
{
    return std::ifstream(path).is_open();
}

char *duplicate(const std::string &text)
{
    char *out = static_cast<char *>(std::malloc(text.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

cellbeam::Scheme to_scheme(cb_scheme s)
{
    switch (s)
    {
    case CB_SCHEME_SCP:
        return cellbeam::Scheme::SCP;
    case CB_SCHEME_CBF:
        return cellbeam::Scheme::CBF;
    case CB_SCHEME_MCP:
        return cellbeam::Scheme::MCP;
    }
    throw std::invalid_argument("unknown scheme code " + std::to_string(static_cast<int>(s)));
}

template <class F> cb_status guarded(F &&body)
{
    try
    {
        tl_error.clear();
        return body();
    }
    catch (const cellbeam::ConfigError &e)
    {
        return fail(CB_ERR_CONFIG, e.what());
    }
    catch (const cellbeam::InfeasibleError &e)
    {
        return fail(CB_ERR_INFEASIBLE, e.what());
    }
    catch (const cellbeam::NotConvergedError &e)
    {
        return fail(CB_ERR_NUMERIC, e.what());
    }
    catch (const cellbeam::DimensionError &e)
    {
        return fail(CB_ERR_DIMENSION, e.what());
    }
    catch (const cellbeam::RankError &e)
    {
        return fail(CB_ERR_RANK, e.what());
    }
    catch (const cellbeam::Error &e)
    {
        return fail(CB_ERR_INTERNAL, e.what());
    }
    catch (const nlohmann::json::exception &e)
    {
        return fail(CB_ERR_CONFIG, e.what());
    }
    catch (const std::out_of_range &e)
    {
        return fail(CB_ERR_RANGE, e.what());
    }
    catch (const std::invalid_argument &e)
    {
        return fail(CB_ERR_INVALID_ARGUMENT, e.what());
    }
    catch (const std::bad_alloc &)
    {
        return fail(CB_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception &e)
    {
        return fail(CB_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(CB_ERR_INTERNAL, "unknown exception");
    }
}

#define CB_REQUIRE(ptr)                                                                                                \
    do                                                                                                                 \
    {                                                                                                                  \
        if (!(ptr))                                                                                                    \
            return fail(CB_ERR_INVALID_ARGUMENT, "null pointer: " #ptr);                                               \
    } while (0)

cb_status write_double(double value, double *out)
{
    if (!std::isfinite(value))
        return fail(CB_ERR_NUMERIC, "result is not finite");
    *out = value;
    return CB_OK;
}

} // namespace

extern "C" {

const char *cb_version(void)
{
    return "0.1.0";
}

const char *cb_last_error(void)
{
    return tl_error.c_str();
}

const char *cb_status_name(cb_status status)
{
    switch (status)
    {
    case CB_OK:
        return "ok";
    case CB_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case CB_ERR_CONFIG:
        return "configuration error";
    case CB_ERR_INFEASIBLE:
        return "infeasible";
    case CB_ERR_NUMERIC:
        return "numeric failure";
    case CB_ERR_RANGE:
        return "index out of range";
    case CB_ERR_DIMENSION:
        return "dimension error";
    case CB_ERR_RANK:
        return "rank deficient";
    case CB_ERR_IO:
        return "i/o error";
    case CB_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void cb_string_free(char *text)
{
    std::free(text);
}

cb_status cb_scheme_parse(const char *name, cb_scheme *out)
{
    CB_REQUIRE(name);
    CB_REQUIRE(out);
    return guarded([&] {
        const auto s = cellbeam::parse_scheme(name);
        if (!s)
            return fail(CB_ERR_INVALID_ARGUMENT, std::string("unknown scheme '") + name + "'");
        *out = static_cast<cb_scheme>(static_cast<int>(*s));
        return CB_OK;
    });
}

cb_status cb_config_create(int64_t n_antennas, int64_t n_users, double epsilon, double sigma2, double power,
                           uint64_t seed, cb_config **out)
{
    CB_REQUIRE(out);
    return guarded([&] {
        cellbeam::SystemConfig cfg;
        cfg.n_antennas = n_antennas;
        cfg.n_users = n_users;
        cfg.epsilon = epsilon;
        cfg.sigma2 = sigma2;
        cfg.power = power;
        cfg.seed = seed;
        cfg.validate();
        *out = new cb_config{cfg};
        return CB_OK;
    });
}

cb_status cb_config_parse(const char *text, cb_config **out)
{
    CB_REQUIRE(text);
    CB_REQUIRE(out);
    return guarded([&] {
        *out = new cb_config{cellbeam::parse_config(text)};
        return CB_OK;
    });
}

cb_status cb_config_load(const char *path, cb_config **out)
{
    CB_REQUIRE(path);
    CB_REQUIRE(out);
    return guarded([&] {
        if (!readable(path))
            return fail(CB_ERR_IO, std::string("cannot open ") + path);
        *out = new cb_config{cellbeam::load_config(path)};
        return CB_OK;
    });
}

cb_status cb_config_get(const cb_config *config, int64_t *n_antennas, int64_t *n_users, double *epsilon,
                        double *sigma2, double *power, uint64_t *seed)
{
    CB_REQUIRE(config);
    const auto &c = config->value;
    if (n_antennas)
        *n_antennas = c.n_antennas;
    if (n_users)
        *n_users = c.n_users;
    if (epsilon)
        *epsilon = c.epsilon;
    if (sigma2)
        *sigma2 = c.sigma2;
    if (power)
        *power = c.power;
    if (seed)
        *seed = c.seed;
    tl_error.clear();
    return CB_OK;
}

void cb_config_destroy(cb_config *config)
{
    delete config;
}

cb_status cb_channels_sample(const cb_config *config, uint64_t stream_id, cb_channels **out)
{
    CB_REQUIRE(config);
    CB_REQUIRE(out);
    return guarded([&] {
        *out = new cb_channels{cellbeam::sample_channels(config->value, stream_id)};
        return CB_OK;
    });
}

cb_status cb_channels_from_json(const char *json, cb_channels **out)
{
    CB_REQUIRE(json);
    CB_REQUIRE(out);
    return guarded([&] {
        *out = new cb_channels{cellbeam::channels_from_json(nlohmann::json::parse(json))};
        return CB_OK;
    });
}

cb_status cb_channels_to_json(const cb_channels *channels, char **out_json)
{
    CB_REQUIRE(channels);
    CB_REQUIRE(out_json);
    return guarded([&] {
        *out_json = duplicate(nlohmann::json(channels->value).dump());
        return CB_OK;
    });
}

cb_status cb_channels_entry(const cb_channels *channels, int user_cell, int bs, int64_t user, int64_t antenna,
                            double *re, double *im)
{
    CB_REQUIRE(channels);
    CB_REQUIRE(re);
    CB_REQUIRE(im);
    return guarded([&] {
        const auto row = channels->value.channel(user, user_cell, bs);
        if (antenna < 0 || antenna >= row.size())
            throw std::out_of_range("antenna index out of range");
        *re = row(antenna).real();
        *im = row(antenna).imag();
        return CB_OK;
    });
}

void cb_channels_destroy(cb_channels *channels)
{
    delete channels;
}

cb_status cb_solve_fixed_gamma(const cb_channels *channels, cb_scheme scheme, double gamma, char **out_json)
{
    CB_REQUIRE(channels);
    CB_REQUIRE(out_json);
    return guarded([&] {
        const auto sol = cellbeam::solve_fixed_gamma(to_scheme(scheme), channels->value, gamma);
        nlohmann::json doc{{"dual", sol.dual},
                           {"primal", sol.primal},
                           {"duality_gap", cellbeam::duality_gap(sol.dual, sol.primal, channels->value)}};
        *out_json = duplicate(doc.dump(2));
        return CB_OK;
    });
}

cb_status cb_solve_max_min(const cb_channels *channels, cb_scheme scheme, double gamma_tolerance, char **out_json)
{
    CB_REQUIRE(channels);
    CB_REQUIRE(out_json);
    return guarded([&] {
        cellbeam::MaxMinSettings settings;
        if (gamma_tolerance > 0.0)
            settings.gamma_tolerance = gamma_tolerance;
        const auto result = cellbeam::max_min_sinr(to_scheme(scheme), channels->value, settings);
        nlohmann::json doc = result;
        if (result.dual)
            doc["duality_gap"] = cellbeam::duality_gap(*result.dual, result.solution, channels->value);
        *out_json = duplicate(doc.dump(2));
        if (!(result.gamma_star > 0.0))
            return fail(CB_ERR_INFEASIBLE, "no positive SINR target is reachable");
        return CB_OK;
    });
}

cb_status cb_baseline_max_min(const cb_channels *channels, const char *baseline, char **out_json)
{
    CB_REQUIRE(channels);
    CB_REQUIRE(baseline);
    CB_REQUIRE(out_json);
    return guarded([&] {
        const auto b = cellbeam::parse_baseline(baseline);
        if (!b)
            return fail(CB_ERR_INVALID_ARGUMENT, std::string("unknown baseline '") + baseline + "'");
        const auto result = cellbeam::baseline_max_min(*b, channels->value);
        nlohmann::json doc = result;
        doc["baseline"] = std::string(cellbeam::to_string(*b));
        doc["rate_nats"] = cellbeam::baseline_rate(*b, channels->value.config().beta(), result.gamma_star);
        *out_json = duplicate(doc.dump(2));
        return CB_OK;
    });
}

cb_status cb_gamma_star(cb_scheme scheme, double beta, double epsilon, double snr, double *out)
{
    CB_REQUIRE(out);
    return guarded([&] { return write_double(cellbeam::gamma_star(to_scheme(scheme), beta, epsilon, snr), out); });
}

cb_status cb_lambda_bar(cb_scheme scheme, double gamma, double beta, double epsilon, double *out)
{
    CB_REQUIRE(out);
    return guarded([&] {
        const auto v = cellbeam::lambda_bar(to_scheme(scheme), gamma, beta, epsilon);
        if (!v)
            return fail(CB_ERR_INFEASIBLE, "target outside the feasible region");
        return write_double(*v, out);
    });
}

cb_status cb_p_bar(cb_scheme scheme, double gamma, double beta, double epsilon, double sigma2, double *out)
{
    CB_REQUIRE(out);
    return guarded([&] {
        const auto v = cellbeam::p_bar(to_scheme(scheme), gamma, beta, epsilon, sigma2);
        if (!v)
            return fail(CB_ERR_INFEASIBLE, "target outside the feasible region");
        return write_double(*v, out);
    });
}

cb_status cb_effective_interference(cb_scheme scheme, double snr, double epsilon, double gamma, double beta,
                                    double *out)
{
    CB_REQUIRE(out);
    return guarded([&] {
        return write_double(cellbeam::effective_interference(to_scheme(scheme), snr, epsilon, gamma, beta), out);
    });
}

cb_status cb_is_feasible(cb_scheme scheme, double gamma, double beta, double epsilon, double snr, int *out)
{
    CB_REQUIRE(out);
    return guarded([&] {
        const auto s = to_scheme(scheme);
        const bool ok = snr > 0.0 ? cellbeam::is_feasible(s, gamma, beta, epsilon, snr)
                                  : cellbeam::is_feasible(s, gamma, beta, epsilon);
        *out = ok ? 1 : 0;
        return CB_OK;
    });
}

cb_status cb_td_gamma_star(double beta, double snr, double *out)
{
    CB_REQUIRE(out);
    return guarded([&] { return write_double(cellbeam::td_gamma_star(beta, snr), out); });
}

cb_status cb_td_rate(double beta, double snr, double *out)
{
    CB_REQUIRE(out);
    return guarded([&] { return write_double(cellbeam::td_rate(beta, snr), out); });
}

cb_status cb_asymptotic_point(cb_scheme scheme, double beta, double epsilon, double snr, char **out_json)
{
    CB_REQUIRE(out_json);
    return guarded([&] {
        const auto pt = cellbeam::asymptotic_point(to_scheme(scheme), beta, epsilon, snr, 1.0);
        *out_json = duplicate(nlohmann::json(pt).dump(2));
        return CB_OK;
    });
}

cb_status cb_optimal_beta(cb_scheme scheme, double snr, double epsilon, char **out_json)
{
    CB_REQUIRE(out_json);
    return guarded([&] {
        const auto r = cellbeam::optimal_beta(to_scheme(scheme), snr, epsilon);
        nlohmann::json doc = r;
        doc["scheme"] = std::string(cellbeam::to_string(to_scheme(scheme)));
        doc["snr"] = snr;
        doc["epsilon"] = epsilon;
        *out_json = duplicate(doc.dump(2));
        return CB_OK;
    });
}

cb_status cb_curve_csv(const char *scheme, double beta_lo, double beta_hi, double beta_step, double epsilon,
                       double snr_db, char **out_csv)
{
    CB_REQUIRE(scheme);
    CB_REQUIRE(out_csv);
    return guarded([&] {
        const auto who = cellbeam::parse_contender(scheme);
        if (!who)
            return fail(CB_ERR_INVALID_ARGUMENT, std::string("unknown scheme '") + scheme + "'");
        if (!(beta_lo > 0.0) || !(beta_hi >= beta_lo) || !(beta_step > 0.0))
            return fail(CB_ERR_CONFIG, "sweep needs 0 < lo <= hi and step > 0");
        const double span = (beta_hi - beta_lo) / beta_step;
        if (span > 1e7)
            return fail(CB_ERR_CONFIG, "sweep has too many points");
        std::vector<cellbeam::CurvePoint> points;
        const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
        for (long i = 0; i < count; ++i)
            points.push_back(
                cellbeam::curve_point(*who, beta_lo + static_cast<double>(i) * beta_step, epsilon, snr_db));
        *out_csv = duplicate(cellbeam::curve_csv(points));
        return CB_OK;
    });
}

cb_status cb_experiment_parse(const char *json, cb_experiment **out)
{
    CB_REQUIRE(json);
    CB_REQUIRE(out);
    return guarded([&] {
        *out = new cb_experiment{cellbeam::parse_experiment_spec(json)};
        return CB_OK;
    });
}

cb_status cb_experiment_load(const char *path, cb_experiment **out)
{
    CB_REQUIRE(path);
    CB_REQUIRE(out);
    return guarded([&] {
        if (!readable(path))
            return fail(CB_ERR_IO, std::string("cannot open ") + path);
        *out = new cb_experiment{cellbeam::load_experiment_spec(path)};
        return CB_OK;
    });
}

cb_status cb_experiment_output_path(const cb_experiment *experiment, char **out_path)
{
    CB_REQUIRE(experiment);
    CB_REQUIRE(out_path);
    return guarded([&] {
        *out_path = duplicate(experiment->value.output_path);
        return CB_OK;
    });
}

cb_status cb_experiment_run(const cb_experiment *experiment, char **out_csv, char **out_summary_json)
{
    CB_REQUIRE(experiment);
    return guarded([&] {
        const auto rows = cellbeam::run_experiment(experiment->value);
        if (out_csv)
            *out_csv = duplicate(cellbeam::to_csv(rows));
        if (out_summary_json)
            *out_summary_json = duplicate(cellbeam::summary_json(cellbeam::summarize(rows), experiment->value));
        return CB_OK;
    });
}

cb_status cb_experiment_compare(const cb_experiment *experiment, char **out_csv)
{
    CB_REQUIRE(experiment);
    CB_REQUIRE(out_csv);
    return guarded([&] {
        const auto rows = cellbeam::run_experiment(experiment->value);
        *out_csv = duplicate(cellbeam::compare_csv(rows));
        return CB_OK;
    });
}

void cb_experiment_destroy(cb_experiment *experiment)
{
    delete experiment;
}

} // extern "C"
