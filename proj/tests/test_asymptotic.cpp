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

#include "oracles.hpp"
#include "support.hpp"

#include "cellbeam/asymptotic.hpp"
#include "cellbeam/serialization.hpp"

#include <cmath>
#include <vector>

using namespace cellbeam;
using doctest::Approx;

namespace
{

double snr_of_db(double db)
{
    return std::pow(10.0, db / 10.0);
}

// Closed-form quadratics in textbook form, solved by the oracle.
double reference_gamma(Scheme s, double beta, double eps, double snr)
{
    if (s == Scheme::CBF)
        return oracle::cbf_gamma_star(beta, eps, snr);
    const double a = s == Scheme::SCP ? 1.0 / snr + eps : 1.0 / ((1.0 + eps) * snr);
    return oracle::quadratic_root(beta * a, beta * a + beta - 1.0, -1.0);
}

} // namespace

TEST_SUITE("asymptotic")
{
    TEST_CASE("limiting dual power closed forms")
    {
        for (double eps : {0.0, 0.3, 0.9})
            CHECK(*lambda_bar(Scheme::SCP, 1.0, 0.5, eps) == Approx(4.0 / 3.0).epsilon(1e-15));
        CHECK(*lambda_bar(Scheme::MCP, 1.0, 0.5, 1.0) == Approx(2.0 / 3.0).epsilon(1e-15));
        for (double g : {0.2, 1.0, 3.0})
            for (double b : {0.1, 0.5, 0.9})
                CHECK(*lambda_bar(Scheme::CBF, g, b, 0.0) == Approx(*lambda_bar(Scheme::SCP, g, b, 0.0)));
        CHECK_FALSE(lambda_bar(Scheme::SCP, 1.0, 1.0, 0.5).has_value());
        CHECK_FALSE(lambda_bar(Scheme::MCP, 1e6, 1.5, 0.5).has_value());
    }

    TEST_CASE("limiting downlink power closed forms")
    {
        CHECK(*p_bar(Scheme::SCP, 1.0, 0.5, 0.5, 1.0) == Approx(2.0).epsilon(1e-15));
        for (Scheme s : {Scheme::CBF, Scheme::MCP})
            for (double eps : {0.0, 0.5, 1.0})
                CHECK(*p_bar(s, 0.8, 0.6, eps, 2.5) == Approx(*lambda_bar(s, 0.8, 0.6, eps) * 2.5).epsilon(1e-15));
        CHECK(*p_bar(Scheme::MCP, 0.8, 0.6, 0.0, 1.0) == Approx(*p_bar(Scheme::SCP, 0.8, 0.6, 0.0, 1.0)));
        CHECK_FALSE(p_bar(Scheme::SCP, 1.0, 1.0, 0.5, 1.0).has_value());
    }

    TEST_CASE("balanced SINR regression values")
    {
        CHECK(gamma_star(Scheme::SCP, 1.0, 0.0, 10.0) == Approx((-1.0 + std::sqrt(41.0)) / 2.0).epsilon(1e-14));
        CHECK(gamma_star(Scheme::MCP, 1.0, 1.0, 10.0) == Approx(4.0).epsilon(1e-15));
        const double cbf = gamma_star(Scheme::CBF, 1.0, 1.0, 10.0);
        CHECK(cbf == Approx((-11.0 + std::sqrt(161.0)) / 2.0).epsilon(1e-13));
        CHECK(cbf == Approx(td_gamma_star(1.0, 10.0)).epsilon(1e-13));
    }

    TEST_CASE("closed forms agree with independent root solves")
    {
        for (Scheme s : testing::kSchemes)
            for (double beta : {0.1, 0.5, 1.0, 2.0, 4.0})
                for (double eps : {0.0, 0.25, 1.0, 2.0})
                    for (double snr : {0.1, 1.0, 10.0, 100.0})
                    {
                        const double g = gamma_star(s, beta, eps, snr);
                        CHECK(g == Approx(reference_gamma(s, beta, eps, snr)).epsilon(1e-10));
                        CHECK(gamma_star_residual(s, g, beta, eps, snr) <= 1e-12);
                    }
    }

    TEST_CASE("SINR ordering across cooperation levels")
    {
        for (double eps : {0.05, 0.5, 1.0, 1.5, 2.0})
            for (double beta : {0.1, 0.5, 1.0, 2.0, 4.0})
                for (double snr : {0.1, 1.0, 10.0, 100.0})
                {
                    const double s = gamma_star(Scheme::SCP, beta, eps, snr);
                    const double c = gamma_star(Scheme::CBF, beta, eps, snr);
                    const double m = gamma_star(Scheme::MCP, beta, eps, snr);
                    CHECK(s < c);
                    CHECK(c < m);
                }
    }

    TEST_CASE("monotonicity in loading and cross gain")
    {
        for (double snr : {1.0, 10.0, 100.0})
        {
            for (Scheme s : testing::kSchemes)
            {
                double prev = INFINITY;
                for (double beta = 0.05; beta < 4.0; beta *= 1.3)
                {
                    const double g = gamma_star(s, beta, 0.4, snr);
                    CHECK(g <= prev);
                    prev = g;
                }
            }
            double prev_scp = INFINITY, prev_cbf = INFINITY, prev_mcp = 0.0;
            for (double eps = 0.0; eps <= 2.0; eps += 0.1)
            {
                const double a = gamma_star(Scheme::SCP, 0.7, eps, snr);
                const double b = gamma_star(Scheme::CBF, 0.7, eps, snr);
                const double c = gamma_star(Scheme::MCP, 0.7, eps, snr);
                CHECK(a <= prev_scp);
                CHECK(b <= prev_cbf);
                CHECK(c >= prev_mcp);
                prev_scp = a;
                prev_cbf = b;
                prev_mcp = c;
            }
        }
    }

    TEST_CASE("high-SNR SCP approaches the bandwidth boundary")
    {
        for (double beta : {0.5, 1.0, 2.0})
            for (double eps : {0.1, 0.5})
            {
                const double g = gamma_star(Scheme::SCP, beta, eps, 1e6);
                const double edge = oracle::bisect(
                    [&](long double x) { return beta * (x / (1 + x) + eps * x) - 1; }, 0, 1e3);
                CHECK(std::abs(g - edge) <= 1e-3);
            }
    }

    TEST_CASE("effective interference")
    {
        CHECK(effective_interference(Scheme::SCP, 10.0, 0.1, 1.0, 1.0) == Approx(7.0).epsilon(1e-15));
        for (double g : {0.3, 1.0, 4.0})
            CHECK(effective_interference(Scheme::MCP, 10.0, 0.0, g, 0.8) ==
                  Approx(effective_interference(Scheme::CBF, 10.0, 0.0, g, 0.8)));
        for (Scheme s : testing::kSchemes)
            for (double beta : {0.25, 1.0, 2.0})
                for (double eps : {0.2, 1.0})
                {
                    const double snr = 10.0;
                    const double g = gamma_star(s, beta, eps, snr);
                    const double gain = s == Scheme::MCP ? (1 + eps) * snr : snr;
                    CHECK(gain / effective_interference(s, snr, eps, g, beta) == Approx(g).epsilon(1e-9));
                }
    }

    TEST_CASE("feasibility tests")
    {
        CHECK_FALSE(is_feasible(Scheme::SCP, 1.0, 1.0, 0.5));
        CHECK(is_feasible(Scheme::SCP, 0.99, 1.0, 0.5));
        for (double g : {0.1, 10.0, 1e6})
            for (double beta : {0.2, 1.0})
                CHECK(is_feasible(Scheme::MCP, g, beta, 0.7));
        CHECK(is_feasible(Scheme::SCP, 1.0, 1.0, 0.1, 10.0));
        for (Scheme s : testing::kSchemes)
        {
            const double g = gamma_star(s, 0.8, 0.4, 10.0);
            CHECK(is_feasible(s, g * (1 - 1e-6), 0.8, 0.4, 10.0));
            CHECK_FALSE(is_feasible(s, g * (1 + 1e-6), 0.8, 0.4, 10.0));
        }
        // The unlimited-power test flips where the bandwidth sum crosses one.
        for (Scheme s : testing::kSchemes)
        {
            const double edge = oracle::bisect(
                [&](long double b) { return bandwidth_load(s, 1.3, static_cast<double>(b), 0.6) - 1.0; }, 1e-6, 10);
            CHECK(is_feasible(s, 1.3, edge * (1 - 1e-9), 0.6));
            CHECK_FALSE(is_feasible(s, 1.3, edge * (1 + 1e-9), 0.6));
        }
    }

    TEST_CASE("optimal loading thresholds")
    {
        const auto scp = optimal_beta(Scheme::SCP, 2.0, 0.6);
        CHECK(scp.regime == LoadingRegime::NoiseLimited);
        CHECK_FALSE(scp.beta_star.has_value());
        const auto mcp = optimal_beta(Scheme::MCP, 1.0 / 2.5, 1.0);
        CHECK(mcp.regime == LoadingRegime::NoiseLimited);
        CHECK(noise_limited(Scheme::CBF, 1.0 / 1.2, 0.1));
        CHECK_FALSE(noise_limited(Scheme::CBF, 10.0, 0.1));
    }

    TEST_CASE("interior optimum matches a dense scan")
    {
        const auto r = optimal_beta(Scheme::SCP, 10.0, 0.1);
        REQUIRE(r.beta_star.has_value());
        CHECK(r.regime == LoadingRegime::InteriorOptimum);
        double best_beta = 0.0, best_rate = -1.0;
        for (int i = 1; i <= 20000; ++i)
        {
            const double b = 1e-3 * i;
            const double rate = normalized_rate(Scheme::SCP, b, 0.1, 10.0);
            if (rate > best_rate)
            {
                best_rate = rate;
                best_beta = b;
            }
        }
        CHECK(std::abs(*r.beta_star - best_beta) <= 1e-2);
        CHECK(r.rate_at_star >= best_rate - 1e-9);
        for (Scheme s : testing::kSchemes)
        {
            const auto o = optimal_beta(s, 10.0, 0.3);
            REQUIRE(o.beta_star.has_value());
            CHECK(o.rate_at_star >= normalized_rate(s, *o.beta_star / 2, 0.3, 10.0));
            CHECK(o.rate_at_star >= normalized_rate(s, *o.beta_star * 2, 0.3, 10.0));
        }
    }

    TEST_CASE("noise-limited rate keeps growing towards its limit")
    {
        const double limit = rate_limit(Scheme::SCP, 2.0, 0.6);
        double prev = 0.0;
        for (double b = 0.1; b < 1e4; b *= 3.0)
        {
            const double r = normalized_rate(Scheme::SCP, b, 0.6, 2.0);
            CHECK(r > prev);
            CHECK(r < limit);
            prev = r;
        }
        CHECK(prev == Approx(limit).epsilon(1e-3));
    }

    TEST_CASE("time division")
    {
        CHECK(td_gamma_star(1.0, 10.0) == Approx((-11.0 + std::sqrt(161.0)) / 2.0).epsilon(1e-13));
        for (double beta : {0.1, 0.25, 0.5, 1.0, 2.0, 3.0})
        {
            CHECK(normalized_rate(Scheme::CBF, beta, 0.5, 10.0) > td_rate(beta, 10.0));
            CHECK(std::abs(normalized_rate(Scheme::CBF, beta, 1.0, 10.0) - td_rate(beta, 10.0)) <= 1e-12);
            const double high = td_gamma_star(beta, 1e12);
            const double edge = oracle::bisect([&](long double x) { return 2 * beta * x / (1 + x) - 1; }, 0, 1e9);
            if (beta > 0.5)
                CHECK(high == Approx(edge).epsilon(1e-6));
            else
                CHECK(high > 1e5);
        }
    }

    TEST_CASE("asymptotic point bundles the limits")
    {
        const auto pt = asymptotic_point(Scheme::CBF, 0.75, 0.5, snr_of_db(10.0), 2.0);
        CHECK(pt.feasible);
        CHECK(pt.p_bar == Approx(pt.lambda_bar * 2.0));
        CHECK(pt.big_p_bar == Approx(0.75 * pt.p_bar));
        // Per-BS power equals the budget at the balanced SINR.
        for (Scheme s : testing::kSchemes)
        {
            const auto q = asymptotic_point(s, 0.75, 0.5, 10.0, 1.0);
            CHECK(q.big_p_bar == Approx(10.0).epsilon(1e-9));
        }
        const nlohmann::json j = pt;
        CHECK(j.at("scheme") == "CBF");
        const nlohmann::json lr = optimal_beta(Scheme::SCP, 2.0, 0.6);
        CHECK(lr.at("beta_star") == "Unbounded");
    }

    TEST_CASE("deterministic-equivalent fixed points")
    {
        CHECK(t_scp(1.0, 0.0, 0.5) == Approx(1.0).epsilon(1e-15));
        const double lam = *lambda_bar(Scheme::SCP, 1.0, 0.5, 0.3);
        CHECK(lam * t_scp(1.0, lam, 0.5) == Approx(1.0).epsilon(1e-9));
        for (double g : {0.5, 1.5})
        {
            const double lc = *lambda_bar(Scheme::CBF, g, 0.6, 0.4);
            CHECK(lc * t_cbf(1.0, lc, lc, 0.6, 0.4) == Approx(g).epsilon(1e-9));
            const double lm = *lambda_bar(Scheme::MCP, g, 0.6, 0.4);
            const double t = t_mcp_symmetric(1.0, lm, 1.0, 0.6, 0.4);
            CHECK((1 + 0.4) * lm * t == Approx(g).epsilon(1e-9));
            const auto tv = t_mcp(1.0, {lm, lm}, {1.0, 1.0}, 0.6, 0.4);
            CHECK(tv[0] == Approx(tv[1]).epsilon(1e-14));
            CHECK(tv[0] == Approx(t).epsilon(1e-12));
        }
        CHECK_THROWS_AS(t_scp(0.0, 1.0, 0.5), std::invalid_argument);
    }

    TEST_CASE("deterministic equivalents track large random matrices")
    {
        const Index n = 200;
        const double beta = 0.6, eps = 0.4, rho = 0.7;
        const Index k = static_cast<Index>(beta * n);
        {
            std::vector<std::vector<double>> var(static_cast<std::size_t>(k), {1.0});
            std::vector<double> lam(static_cast<std::size_t>(k), 1.7);
            const double emp = oracle::empirical_t(n, var, lam, rho, 1)[0];
            CHECK(std::abs(emp - t_scp(rho, 1.7, beta)) <= 0.02 * emp);
        }
        {
            std::vector<std::vector<double>> var;
            std::vector<double> lam;
            for (Index i = 0; i < k; ++i)
            {
                var.push_back({1.0});
                lam.push_back(1.2);
                var.push_back({eps});
                lam.push_back(2.1);
            }
            const double emp = oracle::empirical_t(n, var, lam, rho, 2)[0];
            CHECK(std::abs(emp - t_cbf(rho, 1.2, 2.1, beta, eps)) <= 0.02 * emp);
        }
        {
            const std::array<double, 2> mus{1.3, 0.7};
            const std::array<double, 2> lams{1.1, 2.4};
            std::vector<std::vector<double>> var;
            std::vector<double> lam;
            for (Index i = 0; i < k; ++i)
            {
                var.push_back({1.0 / mus[0], eps / mus[1]});
                lam.push_back(lams[0]);
                var.push_back({eps / mus[0], 1.0 / mus[1]});
                lam.push_back(lams[1]);
            }
            const auto emp = oracle::empirical_t(n, var, lam, rho, 3);
            const auto t = t_mcp(rho, lams, mus, beta, eps);
            CHECK(std::abs(emp[0] - t[0]) <= 0.02 * emp[0]);
            CHECK(std::abs(emp[1] - t[1]) <= 0.02 * emp[1]);
        }
    }

    TEST_CASE("asymptotic beamformers: structure")
    {
        const auto one = testing::draw(6, 1, 0.5, 50);
        const double g1 = 0.5 * gamma_star(Scheme::SCP, 1.0 / 6.0, 0.5, 10.0);
        const auto mf = asymptotic_beamformers(Scheme::SCP, one, g1);
        for (int j = 0; j < 2; ++j)
        {
            const CRowVector h = one.channel(0, j, j);
            CHECK(oracle::alignment(mf.directions.col(j), h.adjoint() / h.norm()) == Approx(1.0).epsilon(1e-13));
            CHECK(mf.powers(j) == Approx(*p_bar(Scheme::SCP, g1, 1.0 / 6.0, 0.5, 1.0)));
        }

        const auto ch = testing::draw(8, 4, 0.0, 51);
        const auto scp = asymptotic_beamformers(Scheme::SCP, ch, 1.0);
        const auto cbf = asymptotic_beamformers(Scheme::CBF, ch, 1.0);
        for (Index u = 0; u < 8; ++u)
            CHECK(oracle::alignment(scp.directions.col(u), cbf.directions.col(u)) == Approx(1.0).epsilon(1e-13));

        const auto big = testing::draw(16, 12, 0.5, 52, 10.0);
        const auto mcp = asymptotic_beamformers(Scheme::MCP, big, gamma_star(Scheme::MCP, 0.75, 0.5, 10.0));
        CHECK(std::max(mcp.per_bs_power[0], mcp.per_bs_power[1]) <= 10.0 * (1 + 1e-12));
        CHECK(mcp.directions.rows() == 32);
        CHECK(mcp.powers.maxCoeff() == Approx(mcp.powers.minCoeff()));

        CHECK_THROWS_AS(asymptotic_beamformers(Scheme::SCP, testing::draw(8, 8, 0.5, 53), 100.0), InfeasibleError);
    }

    TEST_CASE("asymptotic beamformers: average SINR concentrates on the target")
    {
        for (Scheme s : testing::kSchemes)
        {
            const double g = 0.9 * gamma_star(s, 0.75, 0.5, 10.0);
            int ok = 0;
            for (std::uint64_t d = 0; d < 20; ++d)
            {
                const auto ch = testing::draw(64, 48, 0.5, 60 + d, 10.0);
                const auto bf = asymptotic_beamformers(s, ch, g);
                if (std::abs(bf.sinrs.mean() - g) <= 0.1 * g)
                    ++ok;
            }
            CHECK(ok >= 18);
        }
    }

    // Literal per-user form of the concentration claim. Per-user SINRs at
    // N = 64 spread by roughly 1/sqrt(N) around the target, so the minimum
    // over 96 users sits well below it; kept visible rather than removed.
    TEST_CASE("asymptotic beamformers: minimum SINR within 10 percent" * doctest::may_fail())
    {
        for (Scheme s : testing::kSchemes)
        {
            const double g = 0.9 * gamma_star(s, 0.75, 0.5, 10.0);
            int ok = 0;
            for (std::uint64_t d = 0; d < 100; ++d)
            {
                const auto ch = testing::draw(64, 48, 0.5, 60 + d, 10.0);
                const auto bf = asymptotic_beamformers(s, ch, g);
                if (std::abs(bf.sinrs.minCoeff() - g) <= 0.1 * g)
                    ++ok;
            }
            CHECK(ok >= 90);
        }
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS_AS(gamma_star(Scheme::SCP, 0.0, 0.1, 10.0), std::invalid_argument);
        CHECK_THROWS_AS(gamma_star(Scheme::SCP, 1.0, -0.1, 10.0), std::invalid_argument);
        CHECK_THROWS_AS(td_gamma_star(1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(effective_interference(Scheme::CBF, 10.0, 0.1, 0.0, 1.0), std::invalid_argument);
    }
}
