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
#include "oracles.hpp"

#include "apsp/errors.hpp"
#include "apsp/pilots.hpp"
#include "apsp/rng.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unsupported/Eigen/FFT>

using namespace apsp;

namespace
{
    constexpr double pi = std::numbers::pi;

    // Closed form: sigma * Q * [same group] * exp(-j 2 pi n (sa - sb) / Nc)
    ComplexVector closed_form(long long pa, long long pb, Index q, Index nc, double sigma)
    {
        ComplexVector d = ComplexVector::Zero(nc);
        if (pa % q != pb % q)
            return d;
        const long long diff = pa / q - pb / q;
        for (Index n = 0; n < nc; ++n)
            d(n) = sigma * double(q) * oracle::expj(-2.0 * pi * double(n) * double(diff) / double(nc));
        return d;
    }

    double papr(const ComplexVector &freq)
    {
        Eigen::FFT<double> fft;
        std::vector<cdouble> in(freq.data(), freq.data() + freq.size()), out;
        fft.inv(out, in);
        double peak = 0, mean = 0;
        for (const auto &v : out)
        {
            peak = std::max(peak, std::norm(v));
            mean += std::norm(v);
        }
        return peak / (mean / double(out.size()));
    }
}

TEST_CASE("Basic pilot sequences", "[pilots]")
{
    const BasicPilot ones = make_basic_pilot(4, BasicKind::all_ones);
    CHECK(ones.x == ComplexVector::Ones(4));

    for (Index nc : {12, 13, 64, 512})
    {
        const BasicPilot b = make_basic_pilot(nc, BasicKind::root_sequence, 1);
        CHECK((b.x.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
    const BasicPilot r1 = make_basic_pilot(64, BasicKind::root_sequence, 1);
    const BasicPilot r3 = make_basic_pilot(64, BasicKind::root_sequence, 3);
    CHECK((r1.x - r3.x).cwiseAbs().maxCoeff() > 0.1);
    CHECK_THROWS_AS(make_basic_pilot(64, BasicKind::root_sequence, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_basic_pilot(0, BasicKind::all_ones), invalid_dimension);

    // Even-length root sequence entry by entry: exp(-j pi u n^2 / Nc)
    for (Index n = 0; n < 64; ++n)
        CHECK(std::abs(r3.x(n) - oracle::expj(-pi * 3.0 * double(n * n) / 64.0)) < 1e-9);
    const BasicPilot odd = make_basic_pilot(13, BasicKind::root_sequence, 2);
    for (Index n = 0; n < 13; ++n)
        CHECK(std::abs(odd.x(n) - oracle::expj(-pi * 2.0 * double(n * (n + 1)) / 13.0)) < 1e-9);
}

TEST_CASE("Single-symbol adjustable phase shift pilot", "[pilots]")
{
    const BasicPilot ones = make_basic_pilot(8, BasicKind::all_ones);
    const double sigma = 2.0;
    CHECK((make_apsp_single(ones, 0, sigma) - std::sqrt(sigma) * ones.x).cwiseAbs().maxCoeff() < 1e-15);

    const ComplexVector alt = make_apsp_single(ones, 4, sigma);
    for (Index n = 0; n < 8; ++n)
        CHECK(std::abs(alt(n) - std::sqrt(sigma) * ((n % 2) ? -1.0 : 1.0)) < 1e-12);

    const BasicPilot zc = make_basic_pilot(64);
    const double base = papr(zc.x);
    for (long long phi : {1, 7, 33, 63})
        CHECK(std::abs(papr(make_apsp_single(zc, phi, 1.0)) - base) < 1e-9);

    CHECK_THROWS_AS(make_apsp_single(ones, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_apsp_single(ones, -1, 1.0), std::invalid_argument);
}

TEST_CASE("Multi-symbol pilots and group orthogonality", "[pilots]")
{
    const BasicPilot zc = make_basic_pilot(16);
    const ComplexMatrix u1 = ComplexMatrix::Ones(1, 1);
    const auto single = make_apsp_multi(zc, u1, 5, 1, 1.5);
    REQUIRE(single.size() == 1);
    CHECK((single[0] - make_apsp_single(zc, 5, 1.5)).cwiseAbs().maxCoeff() == 0.0);

    const ComplexMatrix u2 = dft_matrix(2);
    const auto p0 = make_apsp_multi(zc, u2, 0, 2, 1.0);
    const auto p1 = make_apsp_multi(zc, u2, 1, 2, 1.0);
    const auto p2 = make_apsp_multi(zc, u2, 2, 2, 1.0);
    CHECK(pilot_cross_correlation(p0, p1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pilot_cross_correlation(p0, p2) - closed_form(0, 2, 2, 16, 1.0)).cwiseAbs().maxCoeff() < 1e-12);
    // per-symbol power stays sigma
    for (const auto &s : p2)
        CHECK((s.cwiseAbs2().array() - 1.0).abs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(make_apsp_multi(zc, u2, 32, 2, 1.0), std::invalid_argument);
    ComplexMatrix notu = u2;
    notu(0, 0) *= 1.1;
    CHECK_THROWS_AS(make_apsp_multi(zc, notu, 0, 2, 1.0), std::invalid_argument);
}

TEST_CASE("Cross-correlation closed form on random triples", "[pilots]")
{
    const Index nc = 32;
    const BasicPilot zc = make_basic_pilot(nc, BasicKind::root_sequence, 5);
    Rng rng(StreamKey{3, 0, 0, 0, StreamPurpose::test});
    for (int t = 0; t < 100; ++t)
    {
        const Index q = 1 + Index(rng.next_u64() % 4);
        const long long pa = (long long)(rng.next_u64() % std::uint64_t(q * nc));
        const long long pb = (long long)(rng.next_u64() % std::uint64_t(q * nc));
        const double sigma = rng.uniform(0.5, 2.0);
        const ComplexMatrix u = dft_matrix(q);
        const auto a = make_apsp_multi(zc, u, pa, q, sigma);
        const auto b = make_apsp_multi(zc, u, pb, q, sigma);
        CHECK((pilot_cross_correlation(a, b) - closed_form(pa, pb, q, nc, sigma)).cwiseAbs().maxCoeff() < 1e-10);
    }
    const auto a = make_apsp_multi(zc, ComplexMatrix::Ones(1, 1), 3, 1, 1.0);
    CHECK((pilot_cross_correlation(a, a).array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(pilot_cross_correlation(a, {}), invalid_dimension);
}

TEST_CASE("Orthogonal pilot schedule", "[pilots]")
{
    const PilotSchedule s42 = make_psop_schedule(42, 144, 2048);
    CHECK(s42.segment_length == 3);
    const PilotSchedule s1 = make_psop_schedule(1, 144, 2048);
    CHECK(s1.segment_length == 1);
    CHECK(s1.phi(0) == 0);
    const PilotSchedule s14 = make_psop_schedule(14, 144, 2048);
    CHECK(s14.segment_length == 1);
    for (Index k = 0; k < 14; ++k)
        CHECK(s14.phi(k) == 144 * k);

    // Within a symbol (group) the single-symbol shifts are at least Ng apart
    for (Index a = 0; a < 42; ++a)
        for (Index b = a + 1; b < 42; ++b)
            if (s42.group(a) == s42.group(b))
                CHECK(std::abs(s42.symbol_shift(a) - s42.symbol_shift(b)) >= 144);
    CHECK((s42.unitary.adjoint() * s42.unitary - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Schedule file round trip", "[pilots]")
{
    const PilotSchedule s = make_psop_schedule(20, 36, 512);
    std::stringstream ss;
    write_schedule(ss, s);
    const PilotSchedule r = read_schedule(ss);
    CHECK(r.segment_length == s.segment_length);
    CHECK(r.subcarriers == s.subcarriers);
    for (Index k = 0; k < 20; ++k)
        CHECK(r.phi(k) == s.phi(k));

    std::stringstream bad("Q 1\nNc 8\n0 0\n2 3\n");
    CHECK_THROWS_AS(read_schedule(bad), config_error);
    std::stringstream range("Q 1\nNc 8\n0 9\n");
    CHECK_THROWS_AS(read_schedule(range), config_error);
    std::stringstream nohdr("0 0\n");
    CHECK_THROWS_AS(read_schedule(nohdr), config_error);
    CHECK_THROWS_AS(s.phi(20), std::out_of_range);
}
