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

#include "apsp/channel_model.hpp"
#include "apsp/errors.hpp"
#include "apsp/scenario.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

using namespace apsp;
using Catch::Approx;

namespace
{
    constexpr double pi = std::numbers::pi;

    SystemConfig small_cfg(Index m, Index nc, Index ng)
    {
        SystemConfig c;
        c.antennas = m;
        c.subcarriers = nc;
        c.guard = ng;
        c.users = 1;
        return c;
    }

    UTProfile two_tap_profile()
    {
        UTProfile p;
        p.doppler_nu = 100.0;
        p.taps = {{0, 1.0, 0.2, 0.15}, {2, 0.4, -0.5, 0.1}};
        return p;
    }
}

TEST_CASE("System configuration rules", "[channel_model]")
{
    SystemConfig c = SystemConfig::full_scale();
    CHECK_NOTHROW(c.validate());
    CHECK(c.subcarriers == 2048);
    CHECK(c.guard == 144);
    CHECK(c.symbol_duration() == Approx(71.4e-6).epsilon(1e-3));
    CHECK(std::abs(c.symbol_duration() - double(c.subcarriers + c.guard) * c.sample_duration) <=
          1e-12 * c.symbol_duration());
    const SystemConfig d = SystemConfig::desk_scale();
    CHECK(d.symbol_duration() == Approx(c.symbol_duration()).epsilon(1e-12));

    c.antennas = 63;
    CHECK_THROWS_AS(c.validate(), unsupported_configuration);
    c = SystemConfig::desk_scale();
    c.guard = c.subcarriers + 1;
    CHECK_THROWS_AS(c.validate(), invalid_dimension);
    c = SystemConfig::desk_scale();
    c.pilot_snr = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SystemConfig::desk_scale();
    c.users = 0;
    CHECK_THROWS_AS(c.validate(), invalid_dimension);
}

TEST_CASE("Power matrix normalization and shape", "[channel_model]")
{
    const SystemConfig cfg = small_cfg(32, 64, 8);
    const Adcpm a = build_adcpm(two_tap_profile(), cfg);
    REQUIRE(a.values.rows() == 32);
    REQUIRE(a.values.cols() == 8);
    CHECK(a.values.minCoeff() >= 0.0);
    CHECK(std::abs(a.total() - 32.0 * 64.0) <= 1e-9 * 32.0 * 64.0);
    CHECK(a.values.col(1).sum() == 0.0);

    // Each column is the left-endpoint Laplacian profile of its tap: proportional to the
    // entry formula evaluated with the continuous spectrum
    const RealMatrix s = spectrum_power_matrix(two_tap_profile(), cfg);
    for (Index j : {0, 2})
    {
        const double ratio = a.values(0, j) / s(0, j);
        for (Index i = 0; i < 32; ++i)
            CHECK(a.values(i, j) == Approx(ratio * s(i, j)).epsilon(1e-12));
    }
    // Continuous normalization leaves only a small quadrature defect
    CHECK(s.sum() == Approx(32.0 * 64.0).epsilon(0.05));

    UTProfile bad = two_tap_profile();
    bad.taps[1].delay_bin = 8;
    CHECK_THROWS_AS(build_adcpm(bad, cfg), std::out_of_range);
    bad = two_tap_profile();
    bad.taps[1].delay_bin = 0;
    CHECK_THROWS_AS(build_adcpm(bad, cfg), std::invalid_argument);
    bad = two_tap_profile();
    bad.taps[0].relative_power = bad.taps[1].relative_power = 0.0;
    CHECK_THROWS_AS(build_adcpm(bad, cfg), std::invalid_argument);
    bad.taps.clear();
    CHECK_THROWS_AS(build_adcpm(bad, cfg), std::invalid_argument);
}

TEST_CASE("Vanishing angle spread concentrates the power", "[channel_model]")
{
    const SystemConfig cfg = small_cfg(32, 64, 8);
    const double mean = 0.37;
    UTProfile p;
    p.taps = {{0, 1.0, mean, 1e-6}};
    const Adcpm a = build_adcpm(p, cfg);
    REQUIRE(std::isfinite(a.total()));
    const auto grid = angle_grid(32);
    Index nearest = 0;
    for (Index i = 0; i < 32; ++i)
        if (std::abs(grid[i] - mean) < std::abs(grid[nearest] - mean))
            nearest = i;
    CHECK(a.values.col(0).sum() >= 0.99 * a.total());
    CHECK(a.values(nearest, 0) >= 0.99 * a.total());
}

TEST_CASE("Uniform delay profile gives equal tap columns", "[channel_model]")
{
    SystemConfig cfg = small_cfg(16, 32, 8);
    ScenarioPreset flat{Scenario::custom, "flat", 0.0, INFINITY, 0.1};
    UTProfile p;
    for (Index b : {0, 5})
    {
        Tap t;
        t.delay_bin = b;
        t.relative_power = std::exp(-double(b) * cfg.sample_duration / flat.delay_spread);
        t.mean_aoa = 0.1;
        t.angle_spread = 0.1;
        p.taps.push_back(t);
    }
    const Adcpm a = build_adcpm(p, cfg);
    CHECK(std::abs(a.values.col(0).sum() - a.values.col(5).sum()) < 1e-9);
}

TEST_CASE("Temporal correlation", "[channel_model]")
{
    const double tsym = 71.4e-6;
    const double nu = 31e-3 / tsym;
    CHECK(tcf(nu, tsym, 0) == 1.0);
    for (long long d = 1; d < 40; ++d)
        CHECK(tcf(nu, tsym, d) == tcf(nu, tsym, -d));
    CHECK(std::abs(tcf(nu, tsym, 3) - oracle::j0_series(2.0 * pi * 0.093)) < 1e-10);
    CHECK(tcf(0.0, tsym, 1000) == 1.0);
    CHECK_THROWS_AS(tcf(NAN, tsym, 1), std::domain_error);
}

TEST_CASE("Angle-delay sampling statistics", "[channel_model]")
{
    const SystemConfig cfg = small_cfg(32, 64, 8);
    const Adcpm omega = build_adcpm(two_tap_profile(), cfg);

    Rng zr(StreamKey{1, 0, 0, 0, StreamPurpose::test});
    const Adcrm z = sample_adcrm(Adcpm{RealMatrix::Zero(32, 8)}, zr);
    CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);

    const int n = 10000;
    RealMatrix var = RealMatrix::Zero(32, 8);
    ComplexMatrix cross = ComplexMatrix::Zero(32, 8); // each entry against entry (0 or 1) of its column
    double energy = 0.0;
    Rng rng(StreamKey{5, 0, 0, 0, StreamPurpose::test});
    for (int t = 0; t < n; ++t)
    {
        const Adcrm h = sample_adcrm(omega, rng);
        var += h.values.cwiseAbs2();
        energy += h.values.squaredNorm();
        for (Index j = 0; j < 8; ++j)
            for (Index i = 0; i < 32; ++i)
            {
                const Index partner = i == 0 ? 1 : 0;
                cross(i, j) += h.values(i, j) * std::conj(h.values(partner, j));
            }
    }
    var /= n;
    const double mx = omega.values.maxCoeff();
    for (Index j = 0; j < 8; ++j)
        for (Index i = 0; i < 32; ++i)
        {
            const double w = omega.values(i, j);
            if (w > 0.01 * mx)
            {
                CHECK(std::abs(var(i, j) / w - 1.0) < 0.05);
                const Index partner = i == 0 ? 1 : 0;
                const double wp = omega.values(partner, j);
                if (wp > 0.01 * mx)
                    CHECK(std::abs(cross(i, j) / double(n)) / std::sqrt(w * wp) < 0.05);
            }
        }
    CHECK(energy / n == Approx(32.0 * 64.0).epsilon(0.02));
}

TEST_CASE("Temporal evolution", "[channel_model]")
{
    const SystemConfig cfg = small_cfg(8, 16, 4);
    UTProfile p;
    p.taps = {{0, 1.0, 0.0, 0.3}, {3, 0.5, 0.6, 0.3}};
    const Adcpm omega = build_adcpm(p, cfg);

    Rng r0(StreamKey{2, 0, 0, 0, StreamPurpose::channel});
    const Adcrm h = sample_adcrm(omega, r0);
    Rng r1(StreamKey{2, 0, 1, 0, StreamPurpose::evolution});
    CHECK(evolve_adcrm(h, omega, 1.0, r1).values == h.values);
    CHECK_THROWS_AS(evolve_adcrm(h, omega, 1.01, r1), std::domain_error);

    const int n = 10000;
    for (double rho : {0.0, 0.8})
    {
        ComplexMatrix corr = ComplexMatrix::Zero(8, 4);
        RealMatrix p1 = RealMatrix::Zero(8, 4);
        for (int t = 0; t < n; ++t)
        {
            const Adcrm a = sample_adcrm(omega, StreamKey{9, 0, 0, std::uint64_t(t), StreamPurpose::channel});
            Rng er(StreamKey{9, 0, 1, std::uint64_t(t), StreamPurpose::evolution});
            const Adcrm b = evolve_adcrm(a, omega, rho, er);
            corr.array() += b.values.array() * a.values.array().conjugate();
            p1 += b.values.cwiseAbs2();
        }
        corr /= n;
        p1 /= n;
        const double mx = omega.values.maxCoeff();
        for (Index j = 0; j < 4; ++j)
            for (Index i = 0; i < 8; ++i)
            {
                const double w = omega.values(i, j);
                if (w < 0.1 * mx)
                    continue;
                CHECK(std::abs(p1(i, j) / w - 1.0) < 0.05);
                if (rho == 0.0)
                    CHECK(std::abs(corr(i, j)) / w < 0.05);
                else
                    CHECK(std::abs(corr(i, j) - rho * w) < 0.05 * rho * w);
            }
    }
}

TEST_CASE("Domain conversions", "[channel_model]")
{
    const SystemConfig cfg = small_cfg(8, 16, 4);
    CHECK(adcrm_to_sfcrm(Adcrm{ComplexMatrix::Zero(8, 4)}, cfg).values.cwiseAbs().maxCoeff() == 0.0);
    const ComplexMatrix h = ComplexMatrix::Random(8, 4);
    const Sfcrm g = adcrm_to_sfcrm(Adcrm{h}, cfg);
    CHECK(std::abs(g.values.norm() - h.norm()) < 1e-9);
    CHECK((sfcrm_to_adcrm(g, cfg).values - h).cwiseAbs().maxCoeff() < 1e-10);

    // vec(H) = (F kron V)^H vec(G) for an arbitrary G
    const ComplexMatrix any = ComplexMatrix::Random(8, 16);
    const ComplexMatrix fk = oracle::dft(16).leftCols(4);
    const ComplexMatrix v = oracle::centered(8);
    ComplexMatrix kron(8 * 16, 8 * 4);
    for (Index r = 0; r < 16; ++r)
        for (Index c = 0; c < 4; ++c)
            kron.block(r * 8, c * 8, 8, 8) = fk(r, c) * v;
    const Eigen::VectorXcd vg = Eigen::Map<const Eigen::VectorXcd>(any.data(), any.size());
    const Eigen::VectorXcd vh = kron.adjoint() * vg;
    const ComplexMatrix hh = sfcrm_to_adcrm(Sfcrm{any}, cfg).values;
    CHECK((Eigen::Map<const Eigen::VectorXcd>(hh.data(), hh.size()) - vh).cwiseAbs().maxCoeff() < 1e-10);

    CHECK_THROWS_AS(adcrm_to_sfcrm(Adcrm{ComplexMatrix::Zero(8, 5)}, cfg), invalid_dimension);
}

TEST_CASE("Quadrature covariance", "[channel_model]")
{
    const SystemConfig cfg = small_cfg(8, 8, 4);
    UTProfile p = two_tap_profile();
    const ComplexMatrix r = build_sfccm_small(p, cfg);
    REQUIRE(r.rows() == 64);
    CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r);
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
    // trace = M Nc times the quadrature of the unit-mass spectrum
    CHECK(r.trace().real() == Approx(64.0).epsilon(2e-3));
    CHECK(std::abs(r.trace().imag()) < 1e-10);

    UTProfile zero = p;
    for (auto &t : zero.taps)
        t.relative_power = 0.0;
    CHECK(build_sfccm_small(zero, cfg).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(build_sfccm_small(p, small_cfg(64, 128, 4)), size_guard_exceeded);
}

TEST_CASE("Separable space-frequency correlation across symbols", "[channel_model]")
{
    const SystemConfig cfg = small_cfg(4, 8, 2);
    UTProfile p;
    p.taps = {{0, 1.0, 0.1, 0.4}, {1, 0.6, -0.4, 0.4}};
    const Adcpm omega = build_adcpm(p, cfg);
    const double rho = 0.7;
    const ComplexMatrix expect = rho * approximate_sfccm(omega.values, cfg);

    const int n = 10000;
    const Index dim = 32;
    ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
    for (int t = 0; t < n; ++t)
    {
        const Adcrm h = sample_adcrm(omega, StreamKey{11, 0, 0, std::uint64_t(t), StreamPurpose::channel});
        Rng er(StreamKey{11, 0, 1, std::uint64_t(t), StreamPurpose::evolution});
        const Adcrm h2 = evolve_adcrm(h, omega, rho, er);
        // vec ordering subcarrier-major: index = n * M + m (column-major M x Nc)
        const ComplexMatrix g1 = adcrm_to_sfcrm(h, cfg).values;
        const ComplexMatrix g2 = adcrm_to_sfcrm(h2, cfg).values;
        const Eigen::Map<const Eigen::VectorXcd> v1(g1.data(), dim), v2(g2.data(), dim);
        acc += v2 * v1.adjoint();
    }
    acc /= n;
    const double mx = expect.cwiseAbs().maxCoeff();
    int checked = 0;
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j)
            if (std::abs(expect(i, j)) > 0.5 * mx)
            {
                ++checked;
                CHECK(std::abs(acc(i, j) - expect(i, j)) < 0.05 * std::abs(expect(i, j)));
            }
    CHECK(checked > 0);
}

TEST_CASE("Shifted power matrices", "[channel_model]")
{
    RealMatrix w = RealMatrix::Zero(3, 4);
    w(0, 0) = 1;
    w(1, 2) = 2;
    w(2, 3) = 3;
    CHECK(shifted_power_matrix(w, 0, 16) == w);
    CHECK(shifted_power_matrix(w, 16, 16) == w);
    CHECK(shifted_power_matrix(w, 4, 16).cwiseAbs().maxCoeff() == 0.0);
    const RealMatrix s1 = shifted_power_matrix(w, 1, 16);
    CHECK(s1(0, 1) == 1.0);
    CHECK(s1(1, 3) == 2.0);
    CHECK(s1.sum() == 3.0);
    // Negative shift wraps the tail back into the first columns
    const RealMatrix e = extended_shifted(w, -1, 16);
    CHECK(e(2, 2) == 3.0);
    CHECK(e(0, 15) == 1.0);
}
