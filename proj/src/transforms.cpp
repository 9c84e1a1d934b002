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

#include "apsp/transforms.hpp"
#include "apsp/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace apsp
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        // Beyond this point the Hankel expansion is accurate to ~1e-11 while the
        // power series still loses fewer than four digits to cancellation.
        constexpr double j0_series_limit = 12.0;

        double j0_series(double x)
        {
            const double q = 0.25 * x * x;
            double term = 1.0, sum = 1.0;
            for (int k = 1; k < 200; ++k)
            {
                term *= -q / (double(k) * double(k));
                sum += term;
                if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)) && double(k) * double(k) > q)
                    break;
            }
            return sum;
        }

        double j0_asymptotic(double x)
        {
            // a_k = prod_{m<=k} (-(2m-1)^2) / (k! 8^k); P collects even k, Q odd k
            double p = 1.0, q = 0.0;
            double a = 1.0, xk = 1.0, last = 1.0;
            for (int k = 1; k < 60; ++k)
            {
                a *= -double((2 * k - 1) * (2 * k - 1)) / (8.0 * k);
                xk *= x;
                const double t = a / xk;
                if (std::abs(t) > last) // optimal truncation of the divergent series
                    break;
                last = std::abs(t);
                const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
                if (k % 2 == 0)
                    p += sign * t;
                else
                    q += sign * t;
                if (last < 1e-17)
                    break;
            }
            const double w = x - 0.25 * pi;
            return std::sqrt(2.0 / (pi * x)) * (p * std::cos(w) - q * std::sin(w));
        }

        void require_positive(Index n, const char *what)
        {
            if (n < 1)
                throw invalid_dimension(std::string(what) + " must be at least 1, got " + std::to_string(n));
        }
    }

    ComplexMatrix dft_matrix(Index n)
    {
        return dft_matrix_columns(n, n);
    }

    ComplexMatrix dft_matrix_columns(Index n, Index g)
    {
        require_positive(n, "DFT size");
        if (g < 0 || g > n)
            throw invalid_dimension("DFT column count " + std::to_string(g) + " outside [0, " + std::to_string(n) + "]");
        ComplexMatrix f(n, g);
        const double scale = 1.0 / std::sqrt(double(n));
        for (Index q = 0; q < g; ++q)
            for (Index r = 0; r < n; ++r)
            {
                // reduce the phase index first so large N stays exact
                const double ph = -2.0 * pi * double((r * q) % n) / double(n);
                f(r, q) = std::polar(scale, ph);
            }
        return f;
    }

    ComplexVector steering_vector(Index m, double theta)
    {
        require_positive(m, "Antenna count");
        if (!std::isfinite(theta) || theta < -0.5 * pi || theta > 0.5 * pi)
            throw std::domain_error("Incidence angle " + std::to_string(theta) + " outside [-pi/2, pi/2]");
        ComplexVector v(m);
        const double s = std::sin(theta);
        for (Index i = 0; i < m; ++i)
            v(i) = std::polar(1.0, -pi * double(i) * s);
        return v;
    }

    ComplexMatrix centered_dft_matrix(Index m)
    {
        require_positive(m, "Antenna count");
        if (m % 2 != 0)
            throw unsupported_configuration("Centered angle transform needs an even antenna count, got " + std::to_string(m));
        ComplexMatrix v(m, m);
        const double scale = 1.0 / std::sqrt(double(m));
        const Index half = m / 2;
        for (Index j = 0; j < m; ++j)
            for (Index i = 0; i < m; ++i)
            {
                const Index k = ((i * (j - half)) % m + m) % m;
                v(i, j) = std::polar(scale, -2.0 * pi * double(k) / double(m));
            }
        return v;
    }

    std::vector<double> angle_grid(Index m)
    {
        require_positive(m, "Antenna count");
        std::vector<double> th(static_cast<size_t>(m + 1));
        for (Index i = 0; i <= m; ++i)
            th[size_t(i)] = std::asin(std::clamp(2.0 * double(i) / double(m) - 1.0, -1.0, 1.0));
        th.front() = -0.5 * pi;
        th.back() = 0.5 * pi;
        return th;
    }

    double bessel_j0(double x)
    {
        if (!std::isfinite(x))
            throw std::domain_error("bessel_j0: argument must be finite");
        const double ax = std::abs(x);
        return ax <= j0_series_limit ? j0_series(ax) : j0_asymptotic(ax);
    }

    ComplexMatrix delay_to_frequency(const ComplexMatrix &h, Index nc)
    {
        require_positive(nc, "Subcarrier count");
        if (h.cols() > nc)
            throw invalid_dimension("Delay taps (" + std::to_string(h.cols()) + ") exceed subcarrier count (" + std::to_string(nc) + ")");
        Eigen::FFT<double> fft;
        std::vector<cdouble> in(static_cast<size_t>(nc)), out(static_cast<size_t>(nc));
        ComplexMatrix g(h.rows(), nc);
        const double scale = 1.0 / std::sqrt(double(nc));
        for (Index i = 0; i < h.rows(); ++i)
        {
            std::fill(in.begin(), in.end(), cdouble(0.0));
            for (Index d = 0; d < h.cols(); ++d)
                in[size_t(d)] = h(i, d);
            fft.fwd(out.data(), in.data(), nc);
            for (Index n = 0; n < nc; ++n)
                g(i, n) = out[size_t(n)] * scale;
        }
        return g;
    }

    ComplexMatrix frequency_to_delay(const ComplexMatrix &g, Index ng)
    {
        const Index nc = g.cols();
        require_positive(nc, "Subcarrier count");
        if (ng < 0 || ng > nc)
            throw invalid_dimension("Delay taps (" + std::to_string(ng) + ") outside [0, " + std::to_string(nc) + "]");
        Eigen::FFT<double> fft;
        fft.SetFlag(Eigen::FFT<double>::Unscaled);
        std::vector<cdouble> in(static_cast<size_t>(nc)), out(static_cast<size_t>(nc));
        ComplexMatrix h(g.rows(), ng);
        const double scale = 1.0 / std::sqrt(double(nc));
        for (Index i = 0; i < g.rows(); ++i)
        {
            for (Index n = 0; n < nc; ++n)
                in[size_t(n)] = g(i, n);
            fft.inv(out.data(), in.data(), nc);
            for (Index d = 0; d < ng; ++d)
                h(i, d) = out[size_t(d)] * scale;
        }
        return h;
    }

    ComplexMatrix angle_to_antenna(const ComplexMatrix &a)
    {
        const Index m = a.rows();
        require_positive(m, "Antenna count");
        if (m % 2 != 0)
            throw unsupported_configuration("Centered angle transform needs an even antenna count");
        // V = diag((-1)^i) F_M
        Eigen::FFT<double> fft;
        std::vector<cdouble> in(static_cast<size_t>(m)), out(static_cast<size_t>(m));
        ComplexMatrix r(m, a.cols());
        const double scale = 1.0 / std::sqrt(double(m));
        for (Index c = 0; c < a.cols(); ++c)
        {
            for (Index i = 0; i < m; ++i)
                in[size_t(i)] = a(i, c);
            fft.fwd(out.data(), in.data(), m);
            for (Index i = 0; i < m; ++i)
                r(i, c) = (i % 2 == 0 ? scale : -scale) * out[size_t(i)];
        }
        return r;
    }

    ComplexMatrix antenna_to_angle(const ComplexMatrix &a)
    {
        const Index m = a.rows();
        require_positive(m, "Antenna count");
        if (m % 2 != 0)
            throw unsupported_configuration("Centered angle transform needs an even antenna count");
        Eigen::FFT<double> fft;
        fft.SetFlag(Eigen::FFT<double>::Unscaled);
        std::vector<cdouble> in(static_cast<size_t>(m)), out(static_cast<size_t>(m));
        ComplexMatrix r(m, a.cols());
        const double scale = 1.0 / std::sqrt(double(m));
        for (Index c = 0; c < a.cols(); ++c)
        {
            for (Index i = 0; i < m; ++i)
                in[size_t(i)] = (i % 2 == 0) ? a(i, c) : -a(i, c);
            fft.inv(out.data(), in.data(), m);
            for (Index i = 0; i < m; ++i)
                r(i, c) = scale * out[size_t(i)];
        }
        return r;
    }
}
