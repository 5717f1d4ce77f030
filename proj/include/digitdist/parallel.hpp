#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace digitdist
{
    // Runs fn(i) for i in [0, n) over `workers` threads using a static
    // block partition. Each index writes only its own output slot, so callers
    // that reduce the slots in index order get results independent of the
    // worker count.
    template <class Fn>
    void parallel_for(std::size_t n, unsigned workers, Fn fn)
    {
        if (workers <= 1 || n <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }
        unsigned w = static_cast<unsigned>(std::min<std::size_t>(workers, n));
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(w);
        for (unsigned t = 0; t < w; ++t)
        {
            pool.emplace_back([&, t] {
                std::size_t lo = n * t / w, hi = n * (t + 1) / w;
                try
                {
                    for (std::size_t i = lo; i < hi; ++i)
                        fn(i);
                }
                catch (...)
                {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool)
            th.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }
}
