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

#ifndef APSP_PARALLEL_HPP
#define APSP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace apsp
{
    // Worker count: APSP_WORKERS if set and positive, otherwise hardware concurrency
    std::size_t worker_count();

    // Runs body(i) for i in [0, n) on up to `workers` threads (0 = worker_count()).
    // Items are independent; callers store results by index and reduce in order,
    // so results never depend on the number of threads. The first exception
    // thrown by any item is rethrown on the calling thread.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body, std::size_t workers = 0);
}

#endif
