#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace shillbid {

/// Splits [0, n) into at most `jobs` contiguous chunks and runs
/// fn(begin, end) on each, one thread per chunk. The chunking depends only on
/// (n, jobs); callers write results by index so output never depends on
/// scheduling. If several chunks throw, the exception of the lowest chunk is
/// rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs <= 1) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(jobs);
    {
        std::vector<std::jthread> workers;
        workers.reserve(jobs);
        const std::size_t step = (n + jobs - 1) / jobs;
        for (std::size_t k = 0; k < jobs; ++k) {
            const std::size_t begin = std::min(n, k * step);
            const std::size_t end = std::min(n, begin + step);
            workers.emplace_back([&, k, begin, end] {
                try {
                    if (begin < end) fn(begin, end);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace shillbid
