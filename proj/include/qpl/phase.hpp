// phase.hpp
// The additive character e(t) = exp(2 pi i t) and exact roots of unity.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qpl/common.hpp"

namespace qpl {

// exp(2 pi i j / n) for integer j. Multiples of 1/8 are returned exactly
// (up to the rounding of sqrt(2)/2), so characters of order dividing 4
// evaluate to exactly {1, i, -1, -i}.
inline cplx root_of_unity(i64 j, u64 n) {
    const i64 nn = static_cast<i64>(n);
    i64 r = j % nn;
    if (r < 0) r += nn;
    if ((static_cast<u128>(r) * 8) % n == 0) {
        static const double h = std::numbers::sqrt2 / 2.0;
        static const cplx eighth[8] = {{1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}};
        return eighth[static_cast<u64>(static_cast<u128>(r) * 8 / n)];
    }
    // Reduce to (-1/2, 1/2] before scaling to keep the argument small.
    const double t = (2 * r > nn) ? -static_cast<double>(nn - r) / static_cast<double>(nn)
                                  : static_cast<double>(r) / static_cast<double>(nn);
    const double a = 2.0 * std::numbers::pi * t;
    return {std::cos(a), std::sin(a)};
}

// e(t) = exp(2 pi i t). The integer part of t is discarded before the
// trigonometric call.
inline cplx e_frac(double t) {
    const double f = t - std::round(t);
    const double f8 = f * 8.0;
    if (f8 == std::round(f8)) {
        i64 j = static_cast<i64>(std::round(f8));
        return root_of_unity(j, 8);
    }
    const double a = 2.0 * std::numbers::pi * f;
    return {std::cos(a), std::sin(a)};
}

// All n-th roots of unity, indexed by exponent.
inline std::vector<cplx> roots_table(u64 n) {
    std::vector<cplx> r(n);
    for (u64 j = 0; j < n; ++j) r[j] = root_of_unity(static_cast<i64>(j), n);
    return r;
}

}  // namespace qpl
