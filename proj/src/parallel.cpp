#include "sskm/parallel.hpp"

#include <exception>
#include <thread>
#include <vector>

namespace sskm {

unsigned resolve_threads(unsigned requested, std::size_t n) {
    unsigned t = requested;
    if (t == 0) {
        t = std::thread::hardware_concurrency();
        if (t == 0) t = 1;
    }
    if (n == 0) return 1;
    if (static_cast<std::size_t>(t) > n) t = static_cast<unsigned>(n);
    return t;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
    unsigned t = resolve_threads(threads, n);
    if (n == 0) return;
    if (t <= 1) {
        fn(0, n, 0);
        return;
    }
    std::size_t chunk = (n + t - 1) / t;
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(t);
    workers.reserve(t - 1);
    for (unsigned w = 1; w < t; ++w) {
        std::size_t begin = static_cast<std::size_t>(w) * chunk;
        std::size_t end = begin + chunk < n ? begin + chunk : n;
        if (begin >= end) break;
        workers.emplace_back([&fn, &errors, begin, end, w] {
            try {
                fn(begin, end, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    try {
        fn(0, chunk < n ? chunk : n, 0);
    } catch (...) {
        errors[0] = std::current_exception();
    }
    for (std::thread& th : workers) th.join();
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace sskm
