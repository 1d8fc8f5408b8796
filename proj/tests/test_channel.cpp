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

#include "support.hpp"

#include "cellbeam/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace cellbeam;

TEST_SUITE("channel")
{
    TEST_CASE("config parses JSON and key=value forms")
    {
        const auto a = parse_config(R"({"n_antennas": 4, "n_users": 3, "epsilon": 0.5, "sigma2": 2, "power": 10,
                                        "seed": 7})");
        const auto b = parse_config("n_antennas = 4\nn_users=3 # comment\n\nepsilon = 0.5\nsigma2 = 2\npower = 10\n"
                                    "seed = 7\n");
        for (const auto &c : {a, b})
        {
            CHECK(c.n_antennas == 4);
            CHECK(c.n_users == 3);
            CHECK(c.epsilon == 0.5);
            CHECK(c.sigma2 == 2.0);
            CHECK(c.power == 10.0);
            CHECK(c.seed == 7u);
            CHECK(c.beta() == 0.75);
            CHECK(c.snr() == 5.0);
        }
    }

    TEST_CASE("config rejects invalid documents")
    {
        CHECK_THROWS_AS(parse_config("n_antennas = 0"), ConfigError);
        CHECK_THROWS_AS(parse_config("n_users = -1"), ConfigError);
        CHECK_THROWS_AS(parse_config("epsilon = -0.1"), ConfigError);
        CHECK_THROWS_AS(parse_config("sigma2 = 0"), ConfigError);
        CHECK_THROWS_AS(parse_config("power = 0"), ConfigError);
        CHECK_THROWS_AS(parse_config("bogus = 1"), ConfigError);
        CHECK_THROWS_AS(parse_config("n_antennas 4"), ConfigError);
        CHECK_THROWS_AS(parse_config("n_antennas = four"), ConfigError);
        CHECK_THROWS_AS(parse_config(R"({"n_antennas": "4"})"), ConfigError);
        CHECK_THROWS_AS(parse_config("{ broken"), ConfigError);
        CHECK_THROWS_AS(load_config("/nonexistent/cellbeam.cfg"), ConfigError);
    }

    TEST_CASE("load_config reads a file")
    {
        const std::string path = "channel_test_config.txt";
        {
            std::ofstream out(path);
            out << "n_antennas = 6\nn_users = 2\n";
        }
        const auto c = load_config(path);
        CHECK(c.n_antennas == 6);
        CHECK(c.n_users == 2);
        std::remove(path.c_str());
    }

    TEST_CASE("identical seed and stream reproduce the draw")
    {
        const auto c = testing::config(4, 3, 0.5, 10.0, 7);
        const auto x = sample_channels(c, 0);
        const auto y = sample_channels(c, 0);
        const auto z = sample_channels(c, 1);
        for (int j = 0; j < 2; ++j)
            for (int b = 0; b < 2; ++b)
            {
                CHECK(x.block(j, b) == y.block(j, b));
                CHECK(x.block(j, b) != z.block(j, b));
            }
    }

    TEST_CASE("zero cross gain gives zero cross blocks")
    {
        const auto ch = testing::draw(5, 3, 0.0);
        CHECK(ch.block(0, 1).cwiseAbs().maxCoeff() == 0.0);
        CHECK(ch.block(1, 0).cwiseAbs().maxCoeff() == 0.0);
        CHECK(ch.block(0, 0).cwiseAbs().maxCoeff() > 0.0);
        CHECK(ch.stacked_channel(1, 0).tail(5).norm() == 0.0);
    }

    TEST_CASE("entry statistics match the model")
    {
        // 3-sigma bounds on the sample mean of |h|^2 (exponential entries).
        const Index n = 64;
        const Index k = 48;
        const double eps = 0.5;
        const auto ch = testing::draw(n, k, eps, 3);
        const double count = static_cast<double>(n * k);
        for (int j = 0; j < 2; ++j)
        {
            const double own = ch.block(j, j).cwiseAbs2().sum() / count;
            const double cross = ch.block(j, 1 - j).cwiseAbs2().sum() / count;
            CHECK(std::abs(own - 1.0) <= 3.0 / std::sqrt(count));
            CHECK(std::abs(cross - eps) <= 3.0 * eps / std::sqrt(count));
            // Real and imaginary parts share the variance.
            const double re = ch.block(j, j).real().cwiseAbs2().sum() / count;
            CHECK(std::abs(re - 0.5) <= 3.0 * 0.5 * std::sqrt(2.0) / std::sqrt(count));
            CHECK(std::abs(ch.block(j, j).sum() / count) <= 3.0 * std::sqrt(1.0 / count));
        }

        // Larger sample for the variance convergence property.
        const auto big = testing::draw(128, 96, 0.25, 9);
        const double big_count = 128.0 * 96.0;
        CHECK(std::abs(big.block(1, 1).cwiseAbs2().sum() / big_count - 1.0) <= 3.0 / std::sqrt(big_count));
        CHECK(std::abs(big.block(1, 0).cwiseAbs2().sum() / big_count - 0.25) <= 3.0 * 0.25 / std::sqrt(big_count));
    }

    TEST_CASE("stacked channel concatenates in BS order")
    {
        auto cfg = testing::config(1, 1, 1.0);
        std::array<ChannelMatrix, 4> b;
        for (auto &m : b)
            m.resize(1, 1);
        b[0](0, 0) = {1, 0}; // a: cell 1 user from BS 1
        b[1](0, 0) = {0, 2}; // c: cell 1 user from BS 2
        b[2](0, 0) = {3, 0};
        b[3](0, 0) = {0, 4};
        const auto ch = testing::from_blocks(cfg, b);
        const CRowVector h = ch.stacked_channel(0, 0);
        REQUIRE(h.size() == 2);
        CHECK(h(0) == Complex(1, 0));
        CHECK(h(1) == Complex(0, 2));
        CHECK(ch.stacked_channel(0, 1)(0) == Complex(3, 0));
        CHECK(ch.stacked_channel(0, 1)(1) == Complex(0, 4));

        const auto r = testing::draw(4, 3, 0.7);
        for (Index k = 0; k < 3; ++k)
            for (int j = 0; j < 2; ++j)
                CHECK(r.stacked_channel(k, j).squaredNorm() ==
                      doctest::Approx(r.channel(k, j, 0).squaredNorm() + r.channel(k, j, 1).squaredNorm())
                          .epsilon(1e-14));
        const CMatrix s = r.stacked();
        CHECK(s.rows() == 6);
        CHECK(s.cols() == 8);
        CHECK(s.row(4) == r.stacked_channel(1, 1));
    }

    TEST_CASE("index errors")
    {
        const auto ch = testing::draw(3, 2, 0.5);
        CHECK_THROWS_AS(ch.stacked_channel(2, 0), std::out_of_range);
        CHECK_THROWS_AS(ch.stacked_channel(-1, 0), std::out_of_range);
        CHECK_THROWS_AS(ch.channel(0, 2, 0), std::out_of_range);
        CHECK_THROWS_AS(ch.block(0, 3), std::out_of_range);
    }

    TEST_CASE("blocks must be K x N")
    {
        auto cfg = testing::config(2, 2, 0.5);
        std::array<ChannelMatrix, 4> b;
        for (auto &m : b)
            m = ChannelMatrix::Zero(2, 2);
        b[3] = ChannelMatrix::Zero(2, 3);
        CHECK_THROWS_AS(testing::from_blocks(cfg, b), std::invalid_argument);
    }

    TEST_CASE("swapping cells relabels the blocks")
    {
        const auto ch = testing::draw(3, 2, 0.5);
        const auto sw = ch.swapped_cells();
        CHECK(sw.block(0, 0) == ch.block(1, 1));
        CHECK(sw.block(0, 1) == ch.block(1, 0));
        CHECK(sw.block(1, 0) == ch.block(0, 1));
        CHECK(sw.block(1, 1) == ch.block(0, 0));
    }

    TEST_CASE("JSON round trip is exact")
    {
        const auto ch = testing::draw(3, 2, 0.3, 5);
        const nlohmann::json j = ch;
        const auto back = channels_from_json(nlohmann::json::parse(j.dump()));
        CHECK(back.config().n_antennas == 3);
        CHECK(back.config().epsilon == 0.3);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                CHECK(back.block(a, b) == ch.block(a, b));
        CHECK_THROWS_AS(channels_from_json(nlohmann::json::parse(R"({"config": {}})")), ConfigError);
    }

    TEST_CASE("scheme and baseline names")
    {
        CHECK(parse_scheme("cbf") == Scheme::CBF);
        CHECK(parse_scheme("Mcp") == Scheme::MCP);
        CHECK_FALSE(parse_scheme("zf").has_value());
        CHECK(parse_baseline("scp-zf") == Baseline::SCP_ZF);
        CHECK(parse_baseline("td") == Baseline::TD_SCP);
        CHECK(to_string(Baseline::GZF) == "GZF");
    }
}
