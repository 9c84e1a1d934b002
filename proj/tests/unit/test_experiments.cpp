// SPDX-License-Identifier: Apache-2.0
//
// apsp-sim: pilot design and channel acquisition simulator for massive MIMO-OFDM
// Copyright (C) 2026 The apsp-sim contributors
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

#include "catch_amalgamated.hpp"

#include "apsp/errors.hpp"
#include "apsp/experiments.hpp"
#include "apsp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace apsp;
using Catch::Approx;

namespace
{
    std::string small_spec(const std::string &extra = "")
    {
        return "scale = desk\nscenario = UMa\nantennas = 16\nsubcarriers = 64\nguard = 8\nusers = 4\n"
               "trials = 200\nsnr_db = 0, 20\ndelta_ell = 0, 2, 6\nseed = 5\n" +
               extra;
    }

    std::string slurp(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
}

TEST_CASE("Frame delay schedules", "[experiments]")
{
    CHECK(frame_delay_schedule(FrameType::type_a, 7, 3) == std::vector<long long>{1, 2, 3, 4});
    CHECK(frame_delay_schedule(FrameType::type_a, 7, 1) == std::vector<long long>{1, 2, 3, 4, 5, 6});
    CHECK(frame_delay_schedule(FrameType::type_b, 7, 1) == std::vector<long long>{-3, -2, -1, 1, 2, 3});
    for (Index q : {1, 2, 3})
        for (Index len : {5, 7, 14})
        {
            const auto a = frame_delay_schedule(FrameType::type_a, len, q);
            const auto b = frame_delay_schedule(FrameType::type_b, len, q);
            CHECK(Index(a.size()) == len - q);
            CHECK(Index(b.size()) == len - q);
            long long ma = 0, mb = 0;
            for (auto d : a)
                ma = std::max(ma, std::abs(d));
            for (auto d : b)
                mb = std::max(mb, std::abs(d));
            CHECK(mb < ma);
        }
    for (const auto &s : frame_layout(FrameType::type_b, 7, 1))
        CHECK(s.uplink == (s.delta_ell < 0));
    CHECK_THROWS(frame_delay_schedule(FrameType::type_a, 3, 3));
}

TEST_CASE("Data fraction and pilot overhead", "[experiments]")
{
    CHECK(data_fraction(7, 1) == Approx(6.0 / 7.0).epsilon(1e-15));
    CHECK(data_fraction(7, 3) == Approx(4.0 / 7.0).epsilon(1e-15));
    const double pilot_apsp = 1.0 - data_fraction(7, 1), pilot_psop = 1.0 - data_fraction(7, 3);
    CHECK(1.0 - pilot_apsp / pilot_psop == Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("Experiment loader", "[experiments]")
{
    const ExperimentSpec def = parse_experiment("");
    CHECK(def.system.subcarriers == 2048);
    CHECK(def.system.guard == 144);
    CHECK(def.frame_len == 7);
    CHECK(def.gamma == 1e-4);

    const ExperimentSpec su = parse_experiment("scenario = SU\n");
    const ScenarioPreset &p = preset(su.scenario);
    CHECK(p.doppler_symbol_product == 31e-3);
    CHECK(p.delay_spread == Approx(0.77e-6).epsilon(1e-15));
    CHECK(p.angle_spread == Approx(2.0 * std::numbers::pi / 180.0).epsilon(1e-15));

    const ExperimentSpec desk = parse_experiment("users = 20\nscale = desk\n");
    CHECK(desk.system.antennas == 64);
    CHECK(desk.system.subcarriers == 512);
    CHECK(desk.system.users == 20);

    CHECK_THROWS_AS(parse_experiment("scenario = custom\n"), config_error);
    CHECK_THROWS_AS(parse_experiment("scenario = suburban\n"), config_error);
    CHECK_THROWS_AS(parse_experiment("colour = blue\n"), config_error);
    CHECK_THROWS_AS(parse_experiment("trials = many\n"), config_error);
    CHECK_THROWS_AS(parse_experiment("this line has no separator\n"), config_error);
    CHECK_THROWS_AS(parse_experiment("trials = 0\n"), config_error);
    CHECK_THROWS_AS(parse_experiment("frame_len = 1\nscheme = PSOP\nscale = desk\n"), config_error);
    // PSOP needs Q = ceil(K / floor(Nc / Ng)) = 1 here
    CHECK_THROWS_AS(parse_experiment("scale = desk\nscheme = PSOP\nq = 2\n"), config_error);
    CHECK_NOTHROW(parse_experiment("scale = desk\nscheme = PSOP\nq = 1\n"));
    CHECK(parse_experiment("scale = desk\nusers = 42\nscheme = APSP, PSOP\n").segment_length_for(Scheme::psop) == 3);

    const ExperimentSpec cu = parse_experiment("scale = desk\nscenario = custom\nusers = 1\nut.0.doppler_nu = 12.5\n"
                                               "ut.0.taps = 0:1:0.1:0.05; 4:0.5:-0.2:0.1\n");
    REQUIRE(cu.custom_profiles.size() == 1);
    CHECK(cu.custom_profiles[0].doppler_nu == 12.5);
    CHECK(cu.custom_profiles[0].taps.size() == 2);
    CHECK(cu.custom_profiles[0].taps[1].delay_bin == 4);

    const auto path = std::filesystem::temp_directory_path() / "apsp_loader_test.cfg";
    {
        std::ofstream f(path);
        f << "# comment\nscenario = UMi\nscale = desk\n";
    }
    CHECK(load_experiment(path.string()).scenario == Scenario::UMi);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_experiment("/nonexistent/apsp.cfg"), config_error);
}

TEST_CASE("MSE experiment rows", "[experiments]")
{
    const ExperimentSpec spec = parse_experiment(small_spec("scheme = APSP, PSOP\n"));
    const auto rows = run_mse_experiment(spec);
    REQUIRE_FALSE(rows.empty());

    std::map<std::string, const MseRow *> index;
    for (const auto &r : rows)
    {
        CHECK((r.scheme == "APSP" || r.scheme == "PSOP"));
        CHECK(r.per_ut.size() == 4);
        if (r.source == "analytic")
            CHECK(r.bound <= r.total * (1.0 + 1e-12));
        index[r.scheme + "|" + format_number(r.snr_db) + "|" + std::to_string(r.delta_ell) + "|" + r.kind + "|" +
              r.source] = &r;
    }
    for (const auto &r : rows)
    {
        if (r.source != "empirical")
            continue;
        const std::string key = r.scheme + "|" + format_number(r.snr_db) + "|" + std::to_string(r.delta_ell) + "|" + r.kind;
        REQUIRE(index.count(key + "|analytic"));
        const MseRow &a = *index[key + "|analytic"];
        CHECK(a.total <= r.total + 3.0 * r.standard_error);
        CHECK(r.total == Approx(a.total).epsilon(0.03));
    }
    for (const char *scheme : {"APSP", "PSOP"})
        for (const char *snr : {"0", "20"})
        {
            const std::string base = std::string(scheme) + "|" + snr + "|";
            REQUIRE(index.count(base + "0|CP|analytic"));
            CHECK(index[base + "0|CP|analytic"]->total == index[base + "0|CE|analytic"]->total);
            double last = 0.0;
            for (int d : {0, 2, 6})
            {
                const double v = index[base + std::to_string(d) + "|CP|analytic"]->total;
                CHECK(v >= last);
                last = v;
            }
        }
}

TEST_CASE("Disjoint synthetic scenario meets the bounds", "[experiments]")
{
    // One tap per UT at distinct delays packed Ng apart by the scheduler
    std::string text = "scale = desk\nscenario = custom\nantennas = 8\nsubcarriers = 32\nguard = 4\nusers = 3\n"
                       "trials = 4\nsnr_db = 10\ndelta_ell = 0, 3\n";
    for (int k = 0; k < 3; ++k)
        text += "ut." + std::to_string(k) + ".doppler_nu = 300\nut." + std::to_string(k) + ".taps = 0:1:0:0.05\n";
    const ExperimentSpec spec = parse_experiment(text);
    for (const auto &r : run_mse_experiment(spec))
        if (r.source == "analytic" && r.kind != "CE-delay")
            CHECK(std::abs(r.total - r.bound) <= 1e-12 * r.bound);
}

TEST_CASE("CSV output", "[experiments]")
{
    std::ostringstream empty;
    write_results(empty, {});
    CHECK(empty.str() == mse_csv_header() + "\n");

    const auto dir = std::filesystem::temp_directory_path();
    const std::string p1 = (dir / "apsp_rows_a.csv").string(), p2 = (dir / "apsp_rows_b.csv").string();
    write_results({}, p1);
    CHECK(slurp(p1) == mse_csv_header() + "\n");

    ExperimentSpec spec = parse_experiment(small_spec("trials = 20\nscheme = APSP, PSOP\n"));
    write_results(run_mse_experiment(spec), p1);
    write_results(run_mse_experiment(spec), p2);
    const std::string a = slurp(p1);
    CHECK(a == slurp(p2));
    CHECK(a.find(",APSP,") != std::string::npos);
    CHECK(a.find(",PSOP,") != std::string::npos);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
    CHECK_THROWS(write_results({}, "/nonexistent/dir/out.csv"));
}

TEST_CASE("Single UT rate approaches the matched-filter bound", "[experiments]")
{
    double last_ratio = 0.0;
    const double snr = 10.0;
    for (int m : {4, 16, 64})
    {
        std::string text = "scale = desk\nscenario = custom\nusers = 1\nsubcarriers = 64\nguard = 8\ntrials = 40\n"
                           "rate_subsample = 1\nsnr_db = 10\nframe_len = 7\nut.0.doppler_nu = 0\nut.0.taps = ";
        for (int b = 0; b < 8; ++b)
            text += std::to_string(b) + ":1:" + std::to_string(-1.2 + 0.3 * b) + ":0.4" + (b < 7 ? ";" : "\n");
        text += "antennas = " + std::to_string(m) + "\n";
        const ExperimentSpec spec = parse_experiment(text);
        const RateReport rep = evaluate_spectral_efficiency(spec);
        REQUIRE(rep.points.size() == 1);
        const RatePoint &p = rep.points[0];
        CHECK(p.uplink >= 0.0);
        CHECK(p.downlink >= 0.0);
        const double scale = (64.0 / 72.0) * 6.0 / 7.0;
        const double per_sc = p.total() / scale;
        const double bound = std::log2(1.0 + m * std::pow(10.0, snr / 10.0));
        CHECK(per_sc <= bound);
        const double ratio = per_sc / bound;
        CHECK(ratio > last_ratio);
        last_ratio = ratio;
    }
    CHECK(last_ratio > 0.9);

    ExperimentSpec big = parse_experiment("scheme = APSP\n");
    CHECK_THROWS_AS(evaluate_spectral_efficiency(big), size_guard_exceeded);
}
