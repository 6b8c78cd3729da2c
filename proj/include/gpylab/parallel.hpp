// Copyright 2026 The gpylab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gpylab {

// Runs fn(i) for i in [0, n_tasks) on up to `workers` threads. Tasks are
// claimed in ascending order; callers write results into slot i so the
// merged output never depends on scheduling. The exception from the lowest
// failing task index is rethrown.
template <class F>
void parallel_for(std::size_t n_tasks, unsigned workers, F&& fn) {
    if (n_tasks == 0) return;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_tasks)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = n_tasks;
    std::exception_ptr err;

    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

template <class T, class F>
std::vector<T> parallel_map(std::size_t n_tasks, unsigned workers, F&& fn) {
    std::vector<T> out(n_tasks);
    parallel_for(n_tasks, workers, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace gpylab
