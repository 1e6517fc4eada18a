// arith.hpp
// Elementary kernels: smallest-prime-factor sieve, von Mangoldt function,
// factorization, multiplicative functions and the square-full part.

#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "qpl/common.hpp"

namespace qpl {

struct PrimePower {
    u64 prime;
    unsigned exponent;
    bool operator==(const PrimePower&) const = default;
};

// n = prod prime^exponent, primes strictly increasing. n = 1 has no factors.
struct Factorization {
    u64 n = 1;
    std::vector<PrimePower> factors;
};

// Default ceiling on sieve entries (4 bytes each): 2^29 entries, 2 GiB.
inline constexpr u64 kDefaultSieveBudget = u64{1} << 29;

// Smallest-prime-factor table for 2..limit. Immutable after construction.
class SieveTables {
public:
    SieveTables() = default;
    SieveTables(u64 limit, std::vector<std::uint32_t> spf);

    u64 limit() const { return limit_; }
    // Least prime dividing n, for 2 <= n <= limit.
    u64 spf(u64 n) const { return spf_[n - 2]; }
    bool is_prime(u64 n) const { return n >= 2 && n <= limit_ && spf_[n - 2] == n; }
    bool contains(u64 n) const { return n >= 1 && n <= limit_; }
    std::span<const std::uint32_t> raw() const { return spf_; }

private:
    u64 limit_ = 0;
    std::vector<std::uint32_t> spf_;
};

SieveTables build_sieve(u64 limit, u64 budget = kDefaultSieveBudget);

// Primes p with lo <= p <= hi taken from the table.
std::vector<u64> primes_in(const SieveTables& t, u64 lo, u64 hi);

double von_mangoldt(u64 n, const SieveTables& t);
double von_mangoldt_large(u64 n);

Factorization factorize(u64 n, const SieveTables& t);
// Trial division; fine for n up to ~10^12.
Factorization factorize(u64 n);

int mobius(const Factorization& f);
u64 euler_phi(const Factorization& f);
unsigned omega(const Factorization& f);
int mobius(u64 n);
u64 euler_phi(u64 n);
unsigned omega(u64 n);

// kappa(n) = l^2 where n = l^2 m with m square-free, i.e.
// prod p^(2 floor(e_p / 2)). Note kappa(8) = 4.
u64 squarefull_part(const Factorization& f);
u64 squarefull_part(u64 n);

bool is_squarefree(const Factorization& f);

// Modular helpers on 64-bit operands.
inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
u64 powmod(u64 base, u64 exp, u64 m);
// x mod m for signed x, result in [0, m).
inline u64 mod_signed(i64 x, u64 m) {
    const i64 mm = static_cast<i64>(m);
    i64 r = x % mm;
    return static_cast<u64>(r < 0 ? r + mm : r);
}

// Deterministic Miller-Rabin, valid for every 64-bit input.
bool is_prime_u64(u64 n);

// Writes n = base^exponent with the largest possible exponent.
struct PerfectPower {
    u64 base;
    unsigned exponent;
};
PerfectPower perfect_power(u64 n);

}  // namespace qpl
