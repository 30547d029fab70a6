#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace poseaug {

/**
 * Calls fn(i) for i in [0, count) on up to `workers` threads. Indices are claimed dynamically,
 * so fn must write only to slot i of any shared output. The first exception escaping fn is
 * rethrown after all threads join.
 */
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn)
{
    const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
        {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (std::size_t i = next.fetch_add(1); i < count && !failed.load(); i = next.fetch_add(1))
        {
            try
            {
                fn(i);
            }
            catch (...)
            {
                if (!failed.exchange(true))
                {
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
    {
        pool.emplace_back(body);
    }
    for (auto& t : pool)
    {
        t.join();
    }
    if (error)
    {
        std::rethrow_exception(error);
    }
}

} // namespace poseaug
