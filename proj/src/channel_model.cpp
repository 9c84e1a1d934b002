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

#include "apsp/channel_model.hpp"
#include "apsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

namespace apsp
{
    namespace
    {
        constexpr double pi = std::numbers::pi;
        constexpr Index sfccm_guard = 4096;

        // Integral of exp(-sqrt2 |theta - mu| / phi) over [-pi/2, pi/2]
        double laplacian_normalizer(double mu, double phi)
        {
            const double b = phi / std::numbers::sqrt2;
            return b * (2.0 - std::exp(-(0.5 * pi - mu) / b) - std::exp(-(mu + 0.5 * pi) / b));
        }

        void check_spectrum_inputs(const UTProfile &profile, const SystemConfig &cfg)
        {
            cfg.validate();
            profile.validate(cfg);
        }

        double total_tap_power(const UTProfile &profile)
        {
            double s = 0.0;
            for (const auto &t : profile.taps)
                s += t.relative_power;
            return s;
        }
    }

    void SystemConfig::validate() const
    {
        if (antennas < 1 || subcarriers < 1 || guard < 1 || users < 1)
            throw invalid_dimension("system dimensions must all be at least 1");
        if (guard > subcarriers)
            throw invalid_dimension("guard interval (" + std::to_string(guard) + ") exceeds subcarrier count (" +
                                    std::to_string(subcarriers) + ")");
        if (antennas % 2 != 0)
            throw unsupported_configuration("antenna count must be even, got " + std::to_string(antennas));
        if (!(pilot_snr > 0.0) || !std::isfinite(pilot_snr))
            throw std::invalid_argument("pilot SNR must be positive and finite");
        if (!(pilot_power > 0.0) || !std::isfinite(pilot_power))
            throw std::invalid_argument("pilot power must be positive and finite");
        if (!(sample_duration > 0.0) || !std::isfinite(sample_duration))
            throw std::invalid_argument("sample duration must be positive and finite");
    }

    SystemConfig SystemConfig::full_scale()
    {
        SystemConfig c;
        c.antennas = 128;
        c.subcarriers = 2048;
        c.guard = 144;
        c.users = 42;
        c.sample_duration = 32.6e-9;
        return c;
    }

    SystemConfig SystemConfig::desk_scale()
    {
        SystemConfig c;
        c.antennas = 64;
        c.subcarriers = 512;
        c.guard = 36;
        c.users = 12;
        c.sample_duration = 4.0 * 32.6e-9;
        return c;
    }

    void UTProfile::validate(const SystemConfig &cfg) const
    {
        if (taps.empty())
            throw std::invalid_argument("UT profile needs at least one tap");
        if (!std::isfinite(doppler_nu) || doppler_nu < 0.0)
            throw std::invalid_argument("Doppler frequency must be finite and nonnegative");
        std::set<Index> bins;
        for (const auto &t : taps)
        {
            if (t.delay_bin < 0 || t.delay_bin >= cfg.guard)
                throw std::out_of_range("tap delay bin " + std::to_string(t.delay_bin) + " outside [0, " +
                                        std::to_string(cfg.guard) + ")");
            if (!bins.insert(t.delay_bin).second)
                throw std::invalid_argument("duplicate tap delay bin " + std::to_string(t.delay_bin));
            if (!(t.relative_power >= 0.0) || !std::isfinite(t.relative_power))
                throw std::invalid_argument("tap power must be finite and nonnegative");
            if (!(std::abs(t.mean_aoa) <= 0.5 * pi))
                throw std::invalid_argument("mean angle of arrival outside [-pi/2, pi/2]");
            if (!(t.angle_spread > 0.0) || !std::isfinite(t.angle_spread))
                throw std::invalid_argument("angle spread must be positive and finite");
        }
    }

    double laplacian_pas(double theta, double mean_aoa, double angle_spread)
    {
        if (std::abs(theta) > 0.5 * pi)
            return 0.0;
        const double z = laplacian_normalizer(mean_aoa, angle_spread);
        return std::exp(-std::numbers::sqrt2 * std::abs(theta - mean_aoa) / angle_spread) / z;
    }

    RealMatrix spectrum_power_matrix(const UTProfile &profile, const SystemConfig &cfg)
    {
        check_spectrum_inputs(profile, cfg);
        const Index m = cfg.antennas;
        const auto grid = angle_grid(m);
        const double ptot = total_tap_power(profile);
        RealMatrix omega = RealMatrix::Zero(m, cfg.guard);
        if (ptot <= 0.0)
            return omega;
        const double scale = double(m) * double(cfg.subcarriers);
        for (const auto &t : profile.taps)
            for (Index i = 0; i < m; ++i)
                omega(i, t.delay_bin) += scale * (grid[i + 1] - grid[i]) * (t.relative_power / ptot) *
                                         laplacian_pas(grid[i], t.mean_aoa, t.angle_spread);
        return omega;
    }

    Adcpm build_adcpm(const UTProfile &profile, const SystemConfig &cfg)
    {
        check_spectrum_inputs(profile, cfg);
        const double ptot = total_tap_power(profile);
        if (!(ptot > 0.0))
            throw std::invalid_argument("tap powers must sum to a positive value");
        const Index m = cfg.antennas;
        const auto grid = angle_grid(m);
        Adcpm out{RealMatrix::Zero(m, cfg.guard)};
        std::vector<double> w(static_cast<std::size_t>(m));
        for (const auto &t : profile.taps)
        {
            if (t.relative_power == 0.0)
                continue;
            // Shift exponents by the smallest distance so the nearest cell never underflows
            double dmin = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m; ++i)
                dmin = std::min(dmin, std::abs(grid[i] - t.mean_aoa));
            double sum = 0.0;
            for (Index i = 0; i < m; ++i)
            {
                const double d = std::abs(grid[i] - t.mean_aoa) - dmin;
                w[i] = (grid[i + 1] - grid[i]) * std::exp(-std::numbers::sqrt2 * d / t.angle_spread);
                sum += w[i];
            }
            for (Index i = 0; i < m; ++i)
                out.values(i, t.delay_bin) += t.relative_power * w[i] / sum;
        }
        out.values *= double(m) * double(cfg.subcarriers) / out.values.sum();
        return out;
    }

    double tcf(double doppler_nu, double symbol_duration, long long delta_ell)
    {
        if (!std::isfinite(doppler_nu) || !std::isfinite(symbol_duration))
            throw std::domain_error("temporal correlation needs finite inputs");
        return bessel_j0(2.0 * pi * doppler_nu * symbol_duration * double(delta_ell));
    }

    Adcrm sample_adcrm(const Adcpm &omega, Rng &rng)
    {
        const auto &w = omega.values;
        Adcrm h{ComplexMatrix(w.rows(), w.cols())};
        for (Index j = 0; j < w.cols(); ++j)
            for (Index i = 0; i < w.rows(); ++i)
                h.values(i, j) = rng.complex_normal(w(i, j));
        return h;
    }

    Adcrm sample_adcrm(const Adcpm &omega, const StreamKey &key)
    {
        Rng rng(key);
        return sample_adcrm(omega, rng);
    }

    Adcrm evolve_adcrm(const Adcrm &h, const Adcpm &omega, double rho, Rng &rng)
    {
        if (!(std::abs(rho) <= 1.0))
            throw std::domain_error("temporal correlation must lie in [-1, 1]");
        if (h.values.rows() != omega.values.rows() || h.values.cols() != omega.values.cols())
            throw invalid_dimension("channel and power matrix dimensions differ");
        if (rho == 1.0)
            return h;
        const double c = std::sqrt(1.0 - rho * rho);
        Adcrm w = sample_adcrm(omega, rng);
        return Adcrm{rho * h.values + c * w.values};
    }

    Sfcrm adcrm_to_sfcrm(const Adcrm &h, const SystemConfig &cfg)
    {
        if (h.values.rows() != cfg.antennas || h.values.cols() != cfg.guard)
            throw invalid_dimension("angle-delay channel must be antennas x guard");
        return Sfcrm{angle_to_antenna(delay_to_frequency(h.values, cfg.subcarriers))};
    }

    Adcrm sfcrm_to_adcrm(const Sfcrm &g, const SystemConfig &cfg)
    {
        if (g.values.rows() != cfg.antennas || g.values.cols() != cfg.subcarriers)
            throw invalid_dimension("space-frequency channel must be antennas x subcarriers");
        return Adcrm{antenna_to_angle(frequency_to_delay(g.values, cfg.guard))};
    }

    ComplexMatrix build_sfccm_small(const UTProfile &profile, const SystemConfig &cfg, Index angle_nodes)
    {
        const Index m = cfg.antennas, nc = cfg.subcarriers;
        if (m * nc > sfccm_guard)
            throw size_guard_exceeded("SFCCM quadrature limited to M*Nc <= 4096, got " + std::to_string(m * nc));
        check_spectrum_inputs(profile, cfg);
        if (angle_nodes == 0)
            angle_nodes = std::max<Index>(8 * m, 512);
        if (angle_nodes < 2)
            throw std::invalid_argument("angle quadrature needs at least two nodes");

        const double ptot = total_tap_power(profile);
        ComplexMatrix r = ComplexMatrix::Zero(m * nc, m * nc);
        if (!(ptot > 0.0))
            return r;

        std::vector<ComplexMatrix> spatial; // per tap: int v v^H S_q(theta) dtheta
        std::vector<Index> bins;
        for (const auto &t : profile.taps)
        {
            if (t.relative_power == 0.0)
                continue;
            ComplexMatrix a = ComplexMatrix::Zero(m, m);
            // Trapezoid rule on each side of the cusp at the mean angle
            const double edges[3] = {-0.5 * pi, t.mean_aoa, 0.5 * pi};
            for (int side = 0; side < 2; ++side)
            {
                const double lo = edges[side], len = edges[side + 1] - lo;
                if (len <= 0.0)
                    continue;
                const double h = len / double(angle_nodes - 1);
                for (Index n = 0; n < angle_nodes; ++n)
                {
                    const double theta = std::min(lo + h * double(n), 0.5 * pi);
                    const double wt = (n == 0 || n == angle_nodes - 1) ? 0.5 * h : h;
                    const double s = (t.relative_power / ptot) * laplacian_pas(theta, t.mean_aoa, t.angle_spread);
                    if (s == 0.0)
                        continue;
                    const ComplexVector v = steering_vector(m, theta);
                    a.noalias() += (wt * s) * (v * v.adjoint());
                }
            }
            spatial.push_back(std::move(a));
            bins.push_back(t.delay_bin);
        }

        // Frequency factor f_q f_q^H at (n, n') is exp(-j 2 pi (n - n') q / Nc)
        for (Index n = 0; n < nc; ++n)
            for (Index np = 0; np < nc; ++np)
            {
                auto block = r.block(n * m, np * m, m, m);
                for (std::size_t q = 0; q < spatial.size(); ++q)
                {
                    const long long ph = ((long long)(n - np) * bins[q]) % nc;
                    const double ang = -2.0 * pi * double(ph) / double(nc);
                    block += cdouble(std::cos(ang), std::sin(ang)) * spatial[q];
                }
            }
        return r;
    }

    ComplexMatrix approximate_sfccm(const RealMatrix &omega, const SystemConfig &cfg)
    {
        const Index m = cfg.antennas, nc = cfg.subcarriers, ng = cfg.guard;
        if (m * nc > sfccm_guard)
            throw size_guard_exceeded("dense SFCCM limited to M*Nc <= 4096");
        if (omega.rows() != m || omega.cols() != ng)
            throw invalid_dimension("power matrix must be antennas x guard");
        const ComplexMatrix f = dft_matrix_columns(nc, ng);
        const ComplexMatrix v = centered_dft_matrix(m);
        // Column (j * M + i) of F kron V is f_j kron v_i
        ComplexMatrix b(m * nc, m * ng);
        for (Index j = 0; j < ng; ++j)
            for (Index i = 0; i < m; ++i)
                for (Index n = 0; n < nc; ++n)
                    b.block(n * m, j * m + i, m, 1) = f(n, j) * v.col(i);
        Eigen::VectorXd d(m * ng);
        for (Index j = 0; j < ng; ++j)
            for (Index i = 0; i < m; ++i)
                d(j * m + i) = omega(i, j);
        return b * d.asDiagonal() * b.adjoint();
    }

    RealMatrix extended_shifted(const RealMatrix &omega, long long shift, Index subcarriers)
    {
        if (omega.cols() > subcarriers)
            throw invalid_dimension("power matrix wider than subcarrier count");
        RealMatrix ext = RealMatrix::Zero(omega.rows(), subcarriers);
        ext.leftCols(omega.cols()) = omega;
        return cyclic_shift_columns(ext, shift);
    }

    RealMatrix shifted_power_matrix(const RealMatrix &omega, long long shift, Index subcarriers)
    {
        return extended_shifted(omega, shift, subcarriers).leftCols(omega.cols());
    }
}
