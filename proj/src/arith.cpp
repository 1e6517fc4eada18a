// src/arith.cpp

#include "qpl/arith.hpp"

#include <cmath>
#include <string>

namespace qpl {

SieveTables::SieveTables(u64 limit, std::vector<std::uint32_t> spf) : limit_(limit), spf_(std::move(spf)) {
    if (limit < 2 || spf_.size() != limit - 1)
        throw ArgumentError("SieveTables: table size does not match limit " + std::to_string(limit));
}

SieveTables build_sieve(u64 limit, u64 budget) {
    if (limit < 2) throw ArgumentError("build_sieve: limit must be >= 2");
    if (limit >= (u64{1} << 32)) throw ResourceError("build_sieve: limit exceeds 32-bit table entries");
    if (limit - 1 > budget)
        throw ResourceError("build_sieve: limit " + std::to_string(limit) + " exceeds the memory budget of " +
                            std::to_string(budget) + " entries (" + std::to_string(budget * 4) + " bytes)");

    // Linear sieve: every composite is struck exactly once by its least prime.
    std::vector<std::uint32_t> spf(limit - 1, 0);
    std::vector<std::uint32_t> primes;
    for (u64 n = 2; n <= limit; ++n) {
        std::uint32_t& s = spf[n - 2];
        if (s == 0) {
            s = static_cast<std::uint32_t>(n);
            primes.push_back(s);
        }
        for (std::uint32_t p : primes) {
            const u64 m = n * p;
            if (p > s || m > limit) break;
            spf[m - 2] = p;
        }
    }
    return SieveTables(limit, std::move(spf));
}

std::vector<u64> primes_in(const SieveTables& t, u64 lo, u64 hi) {
    std::vector<u64> out;
    if (hi > t.limit()) throw RangeError("primes_in: upper bound beyond sieve limit");
    for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n)
        if (t.is_prime(n)) out.push_back(n);
    return out;
}

double von_mangoldt(u64 n, const SieveTables& t) {
    if (n == 0 || n > t.limit())
        throw RangeError("von_mangoldt: n = " + std::to_string(n) + " outside sieve range 1.." +
                         std::to_string(t.limit()));
    if (n == 1) return 0.0;
    const u64 p = t.spf(n);
    u64 m = n;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // The first twelve primes are a deterministic witness set below 3.1 * 10^23.
    for (u64 a : small) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

// Exact integer e-th root: largest r with r^e <= n.
u64 iroot(u64 n, unsigned e) {
    if (e == 1) return n;
    u64 r = static_cast<u64>(std::pow(static_cast<long double>(n), 1.0L / e));
    auto pow_le = [&](u64 b) {
        u128 acc = 1;
        for (unsigned i = 0; i < e; ++i) {
            acc *= b;
            if (acc > n) return false;
        }
        return true;
    };
    while (r > 0 && !pow_le(r)) --r;
    while (pow_le(r + 1)) ++r;
    return r;
}

u64 ipow(u64 b, unsigned e) {
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

PerfectPower perfect_power(u64 n) {
    if (n < 4) return {n, 1};
    for (unsigned e = 63; e >= 2; --e) {
        const u64 r = iroot(n, e);
        if (r >= 2 && ipow(r, e) == n) {
            // r itself may be a perfect power; recurse to maximise the exponent.
            const PerfectPower inner = perfect_power(r);
            return {inner.base, inner.exponent * e};
        }
    }
    return {n, 1};
}

double von_mangoldt_large(u64 n) {
    if (n <= 1) return 0.0;
    const PerfectPower pp = perfect_power(n);
    return is_prime_u64(pp.base) ? std::log(static_cast<double>(pp.base)) : 0.0;
}

Factorization factorize(u64 n, const SieveTables& t) {
    if (n == 0 || n > t.limit()) throw RangeError("factorize: n outside sieve range");
    Factorization f{n, {}};
    while (n > 1) {
        const u64 p = t.spf(n);
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.factors.push_back({p, e});
    }
    return f;
}

Factorization factorize(u64 n) {
    if (n == 0) throw ArgumentError("factorize: n must be positive");
    Factorization f{n, {}};
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.factors.push_back({p, e});
    }
    if (n > 1) f.factors.push_back({n, 1});
    return f;
}

int mobius(const Factorization& f) {
    for (const auto& pe : f.factors)
        if (pe.exponent > 1) return 0;
    return (f.factors.size() % 2) ? -1 : 1;
}

u64 euler_phi(const Factorization& f) {
    u64 r = 1;
    for (const auto& pe : f.factors) r *= (pe.prime - 1) * ipow(pe.prime, pe.exponent - 1);
    return r;
}

unsigned omega(const Factorization& f) { return static_cast<unsigned>(f.factors.size()); }

int mobius(u64 n) { return mobius(factorize(n)); }
u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }
unsigned omega(u64 n) { return omega(factorize(n)); }

u64 squarefull_part(const Factorization& f) {
    u64 r = 1;
    for (const auto& pe : f.factors) r *= ipow(pe.prime, 2 * (pe.exponent / 2));
    return r;
}

u64 squarefull_part(u64 n) { return squarefull_part(factorize(n)); }

bool is_squarefree(const Factorization& f) { return mobius(f) != 0; }

}  // namespace qpl
