// common.hpp
// Error types, compensated accumulators and the deterministic parallel
// helper shared by every module.

#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qpl {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using cplx = std::complex<double>;

// Bad caller input (domain, range, argument, configuration).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct RangeError : ArgumentError {
    using ArgumentError::ArgumentError;
};
struct DomainError : ArgumentError {
    using ArgumentError::ArgumentError;
};
struct ConfigError : ArgumentError {
    using ArgumentError::ArgumentError;
};

// Memory or table budget exhausted.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation produced a value its own contract rules out.
struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(cplx v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Splits [0, n) into `threads` contiguous shards and runs fn(begin, end, shard)
// on each. Shard boundaries depend only on n and the shard count, and the
// caller merges per-shard results in shard order, so outputs never depend on
// scheduling.
inline void parallel_shards(std::size_t n, unsigned threads,
                            const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
    threads = std::max(1u, std::min<unsigned>(resolve_threads(threads),
                                              static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned s = 0; s < threads; ++s) {
        const std::size_t b = n * s / threads;
        const std::size_t e = n * (s + 1) / threads;
        pool.emplace_back(fn, b, e, s);
    }
    for (auto& t : pool) t.join();
}

// Element-wise parallel loop; each index is written by exactly one worker.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    parallel_shards(n, threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) fn(i);
    });
}

}  // namespace qpl
