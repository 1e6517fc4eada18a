// Independent reference implementations for tests. Nothing here calls into
// the library except for plain types.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using cplx = std::complex<double>;

inline std::vector<std::pair<u64, unsigned>> trial_factor(u64 n) {
    std::vector<std::pair<u64, unsigned>> f;
    for (u64 p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline double lambda(u64 n) {
    auto f = trial_factor(n);
    return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

inline int mobius(u64 n) {
    int m = 1;
    for (auto [p, e] : trial_factor(n)) {
        if (e > 1) return 0;
        m = -m;
    }
    return m;
}

inline u64 phi(u64 n) {
    u64 r = 0;
    for (u64 a = 1; a <= n; ++a)
        if (std::gcd(a, n) == 1) ++r;
    return r;
}

// Largest square dividing n with square-free cofactor, by search.
inline u64 kappa(u64 n) {
    for (u64 l = static_cast<u64>(std::sqrt(static_cast<double>(n))) + 1; l >= 1; --l) {
        if (l * l > n || n % (l * l)) continue;
        const u64 m = n / (l * l);
        bool sf = true;
        for (u64 s = 2; s * s <= m; ++s)
            if (m % (s * s) == 0) sf = false;
        if (sf) return l * l;
    }
    return 1;
}

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = static_cast<u64>((static_cast<unsigned __int128>(r) * b) % m);
        b = static_cast<u64>((static_cast<unsigned __int128>(b) * b) % m);
        e >>= 1;
    }
    return r;
}

inline u64 modk(i64 k, u64 p) {
    const i64 r = k % static_cast<i64>(p);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(p) : r);
}

// #{n mod p : n^4 + k = 0 mod p} by enumeration.
inline unsigned np(u64 p, i64 k) {
    unsigned c = 0;
    const u64 target = (p - modk(k, p)) % p;
    for (u64 n = 0; n < p; ++n)
        if (powmod(n, 4, p) == target) ++c;
    return c;
}

// n_p for every residue class of k, from one pass over n.
inline std::vector<unsigned> np_all(u64 p) {
    std::vector<unsigned> count(p, 0);
    for (u64 n = 0; n < p; ++n) ++count[powmod(n, 4, p)];
    std::vector<unsigned> out(p);
    for (u64 r = 0; r < p; ++r) out[r] = count[(p - r) % p];
    return out;
}

inline cplx e(double t) {
    const double a = 2.0 * std::numbers::pi * t;
    return {std::cos(a), std::sin(a)};
}

// e(num / den) with num reduced first, to keep the argument small.
inline cplx e_ratio(i64 num, u64 den) { return e(static_cast<double>(modk(num, den)) / static_cast<double>(den)); }

// Sigma(q) by the defining double sum.
inline cplx sigma(u64 q, i64 k) {
    cplx s = 0;
    for (u64 a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        cplx inner = 0;
        for (u64 m = 1; m <= q; ++m) inner += e_ratio(-static_cast<i64>(a * powmod(m, 4, q) % q), q);
        s += e_ratio(-static_cast<i64>(a) * k, q) * inner;
    }
    return s;
}

inline i64 ramanujan(u64 q, i64 k) {
    cplx s = 0;
    for (u64 a = 1; a <= q; ++a)
        if (std::gcd(a, q) == 1) s += e_ratio(static_cast<i64>(a) * k, q);
    return std::llround(s.real());
}

// x^4 + k has a factorisation (x^2 + ax + b)(x^2 - ax + c) over Z, found by
// searching divisor pairs of k.
inline bool quartic_shift_reducible(i64 k) {
    if (k <= 0) return true;
    for (i64 b = -k; b <= k; ++b) {
        if (b == 0 || k % b) continue;
        const i64 c = k / b;
        const i64 a2 = b + c;
        if (a2 < 0) continue;
        const i64 a = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(a2))));
        if (a * a != a2) continue;
        if (a * (c - b) == 0) return true;
    }
    return false;
}

// S_P(k) as the product over odd primes p <= P of 1 - (n_p - 1)/(p - 1).
inline double singular_series(i64 k, u64 P) {
    double prod = 1.0;
    for (u64 p = 3; p <= P; p += 2) {
        if (!is_prime(p)) continue;
        prod *= 1.0 - (static_cast<double>(np(p, k)) - 1.0) / static_cast<double>(p - 1);
    }
    return prod;
}

}  // namespace oracle
