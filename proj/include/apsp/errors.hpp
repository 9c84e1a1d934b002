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

#ifndef APSP_ERRORS_HPP
#define APSP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace apsp
{
    // Matrix or sequence dimension that cannot be built (zero size, mismatch)
    class invalid_dimension : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Configuration the formulas do not cover (e.g. odd antenna count for the centered transform)
    class unsupported_configuration : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Overlap of two matrices where one of them carries no power
    class undefined_overlap : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Verification-only or brute-force routine asked to run above its size guard
    class size_guard_exceeded : public std::length_error
    {
    public:
        using std::length_error::length_error;
    };

    // Malformed or inconsistent configuration / schedule file
    class config_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}

#endif
