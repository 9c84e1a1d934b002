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

#ifndef APSP_TRANSFORMS_HPP
#define APSP_TRANSFORMS_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace apsp
{
    using Index = Eigen::Index;
    using cdouble = std::complex<double>;
    using ComplexMatrix = Eigen::MatrixXcd;
    using ComplexVector = Eigen::VectorXcd;
    using RealMatrix = Eigen::MatrixXd;

    // Unitary DFT matrix, entry (n,q) = exp(-j 2 pi n q / N) / sqrt(N)
    ComplexMatrix dft_matrix(Index n);

    // First g columns of the unitary DFT matrix
    ComplexMatrix dft_matrix_columns(Index n, Index g);

    // ULA response with half-wavelength spacing, entry m = exp(-j pi m sin(theta)).
    // theta must lie in [-pi/2, pi/2].
    ComplexVector steering_vector(Index m, double theta);

    // Centered angle-domain transform, entry (i,j) = exp(-j 2 pi i (j - M/2) / M) / sqrt(M).
    // Column j is the normalized steering vector at arcsin(2j/M - 1). Requires even M.
    ComplexMatrix centered_dft_matrix(Index m);

    // Angle grid theta_m = arcsin(2m/M - 1), m = 0..M (M+1 points, -pi/2 .. pi/2)
    std::vector<double> angle_grid(Index m);

    // A * Pi^n: column j of the result is column (j - n) mod Nc of A
    template <typename Derived>
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
    cyclic_shift_columns(const Eigen::MatrixBase<Derived> &a, long long n)
    {
        const Index nc = a.cols();
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows(), nc);
        if (nc == 0)
            return out;
        const Index s = static_cast<Index>(((n % nc) + nc) % nc);
        for (Index j = 0; j < nc; ++j)
        {
            Index src = j - s;
            if (src < 0)
                src += nc;
            out.col(j) = a.col(src);
        }
        return out;
    }

    // Bessel function of the first kind, order zero. Absolute error below 1e-10 on |x| <= 100.
    double bessel_j0(double x);

    // ---- Fast transforms (no dense Nc x Nc or M x M products) ----

    // H * F_{Nc x Ng}^T for an M x Ng matrix: zero-padded row DFTs scaled by 1/sqrt(Nc)
    ComplexMatrix delay_to_frequency(const ComplexMatrix &h, Index nc);

    // G * conj(F_{Nc x Ng}) for an M x Nc matrix, i.e. the first Ng delay taps of each row
    ComplexMatrix frequency_to_delay(const ComplexMatrix &g, Index ng);

    // V_M * A (angle domain to antenna domain), column-wise FFT of length M
    ComplexMatrix angle_to_antenna(const ComplexMatrix &a);

    // V_M^H * A (antenna domain to angle domain)
    ComplexMatrix antenna_to_angle(const ComplexMatrix &a);
}

#endif
