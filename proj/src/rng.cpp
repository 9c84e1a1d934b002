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

#include "apsp/rng.hpp"

#include <cmath>
#include <numbers>

namespace apsp
{
    namespace
    {
        constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;

        constexpr std::uint64_t mix64(std::uint64_t z)
        {
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            return z ^ (z >> 31);
        }
    }

    Rng::Rng(const StreamKey &key)
    {
        std::uint64_t h = mix64(key.seed + golden);
        h = mix64(h ^ (key.ut + 0x632BE59BD9B4E019ull));
        h = mix64(h ^ (key.symbol + 0x8CB92BA72F3D8DD7ull));
        h = mix64(h ^ (key.trial + 0xD6E8FEB86659FD93ull));
        h = mix64(h ^ (static_cast<std::uint64_t>(key.purpose) + 0xA0761D6478BD642Full));
        base_ = h;
    }

    std::uint64_t Rng::next_u64()
    {
        ++counter_;
        return mix64(base_ + counter_ * golden);
    }

    double Rng::uniform()
    {
        // 53 random bits, shifted by half an ulp so 0 is never returned
        return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double Rng::normal()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> Rng::complex_normal(double variance)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }
}
