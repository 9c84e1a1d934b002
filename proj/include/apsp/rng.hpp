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

#ifndef APSP_RNG_HPP
#define APSP_RNG_HPP

#include <complex>
#include <cstdint>

namespace apsp
{
    // Role of a random stream; keeps channel, noise and evolution draws independent
    enum class StreamPurpose : std::uint32_t
    {
        channel = 1,
        evolution = 2,
        noise = 3,
        profile = 4,
        scheduling = 5,
        test = 99
    };

    // Identifies one independent random stream. Streams for different keys never
    // share state, so trials can be generated in any order or on any worker.
    struct StreamKey
    {
        std::uint64_t seed = 0;
        std::uint64_t ut = 0;
        std::uint64_t symbol = 0;
        std::uint64_t trial = 0;
        StreamPurpose purpose = StreamPurpose::channel;
    };

    // Counter-based generator: output i is a bijective 64-bit mix of (key, i)
    class Rng
    {
    public:
        explicit Rng(const StreamKey &key);

        std::uint64_t next_u64();

        // Uniform on the open interval (0, 1)
        double uniform();

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        // Standard normal (Box-Muller)
        double normal();

        // Circularly symmetric complex Gaussian with E|z|^2 = variance
        std::complex<double> complex_normal(double variance);

        std::uint64_t counter() const { return counter_; }

    private:
        std::uint64_t base_;
        std::uint64_t counter_ = 0;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}

#endif
