// SPDX-License-Identifier: Apache-2.0
//
// capstat - higher-order capacity statistics for MRC diversity receivers
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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace capstat {

/// Number of workers: `requested` if positive, otherwise hardware concurrency.
inline unsigned resolve_threads(int requested) {
    if (requested > 0)
        return static_cast<unsigned>(requested);
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Worker cap from CAPSTAT_THREADS (0 or unset = auto).
inline int threads_from_env() {
    const char *v = std::getenv("CAPSTAT_THREADS");
    if (v == nullptr || *v == '\0')
        return 0;
    try {
        return std::max(0, std::stoi(v));
    } catch (const std::exception &) {
        return 0;
    }
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; the caller owns any ordering of results.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body &&body) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++)
            body(i);
    };
    const auto n_workers = std::min<std::size_t>(resolve_threads(threads), count);
    if (n_workers <= 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t)
        pool.emplace_back(worker);
}

} // namespace capstat
