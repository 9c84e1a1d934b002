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

#ifndef APSP_PILOTS_HPP
#define APSP_PILOTS_HPP

#include "apsp/transforms.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace apsp
{
    enum class BasicKind
    {
        all_ones,
        root_sequence // constant-amplitude Zadoff-Chu style sequence
    };

    // Frequency-domain base sequence shared by all UTs, unit modulus
    struct BasicPilot
    {
        ComplexVector x;
        BasicKind kind = BasicKind::root_sequence;
        long long root = 1;
    };

    // Root sequences need gcd(root, Nc) = 1
    BasicPilot make_basic_pilot(Index subcarriers, BasicKind kind = BasicKind::root_sequence, long long root = 1);

    // sqrt(sigma) * exp(-j 2 pi n phi / Nc) * x_n, 0 <= phi < Nc
    ComplexVector make_apsp_single(const BasicPilot &basic, long long phi, double sigma_xtr);

    // Q pilot symbols: symbol q = sqrt(Q) * U(phi mod Q, q) * single-symbol pilot with shift floor(phi / Q)
    std::vector<ComplexVector> make_apsp_multi(const BasicPilot &basic, const ComplexMatrix &unitary, long long phi,
                                               Index q, double sigma_xtr);

    // Diagonal of sum_q X_{a,q} X_{b,q}^H (the product is diagonal for any pair of pilots)
    ComplexVector pilot_cross_correlation(const std::vector<ComplexVector> &a, const std::vector<ComplexVector> &b);

    // Throws std::invalid_argument unless ||U^H U - I|| <= 1e-10
    void require_unitary(const ComplexMatrix &u);

    struct PilotAssignment
    {
        Index ut = 0;
        long long phi = 0;
    };

    struct PilotSchedule
    {
        Index segment_length = 1; // Q
        Index subcarriers = 0;    // Nc
        std::vector<PilotAssignment> assignments; // indexed by UT
        ComplexMatrix unitary;    // Q x Q

        PilotSchedule() = default;
        PilotSchedule(Index q, Index nc, std::vector<long long> phis);

        Index users() const { return Index(assignments.size()); }
        long long phi(Index ut) const;
        // Phase group phi mod Q; UTs in different groups are orthogonal
        Index group(Index ut) const { return Index(phi(ut) % segment_length); }
        // Single-symbol shift floor(phi / Q)
        long long symbol_shift(Index ut) const { return phi(ut) / segment_length; }

        void validate(Index expected_users) const;
    };

    // Conventional phase shift orthogonal pilots: floor(Nc/Ng) UTs per symbol, shifts Ng apart
    PilotSchedule make_psop_schedule(Index users, Index guard, Index subcarriers);
    Index psop_segment_length(Index users, Index guard, Index subcarriers);

    // Text format: "Q <q>", "Nc <nc>" header lines, then "<ut> <phi>" per line; '#' starts a comment
    void write_schedule(std::ostream &os, const PilotSchedule &s);
    void write_schedule(const std::string &path, const PilotSchedule &s);
    PilotSchedule read_schedule(std::istream &is);
    PilotSchedule read_schedule(const std::string &path);
}

#endif
