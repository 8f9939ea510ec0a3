// Copyright 2026 The neelmqc Authors
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
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace neelmqc {

// Worker count from NEELMQC_THREADS (0 or unset = hardware concurrency).
inline unsigned default_worker_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("NEELMQC_THREADS")) {
        try {
            n = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            n = 0;
        }
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

// Runs job(i) for i in [0, count) on up to `workers` threads. Jobs must write
// only to their own slot; the first exception thrown is rethrown here.
template <typename Job>
void parallel_for(std::size_t count, unsigned workers, Job&& job) {
    if (workers == 0) workers = default_worker_count();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace neelmqc
