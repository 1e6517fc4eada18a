// residues.hpp
// Fourth-power residue structure and Dirichlet characters.
//
// Two independent routes to n_p = #{n mod p : n^4 + k = 0 mod p}:
//   np_direct         - lookup in a table built from one pass m -> m^4 mod p
//   np_via_characters - sum_{j < d} chi^j(-k) with chi of exact order
//                       d = gcd(p - 1, 4)

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qpl/arith.hpp"
#include "qpl/common.hpp"

namespace qpl {

// Least primitive root of an odd prime or odd prime power.
u64 primitive_root(u64 m);

// Membership bitmap of fourth powers mod an odd prime p. Every attained
// nonzero class is hit by exactly d = gcd(p - 1, 4) values of m; zero by one.
class QuarticTable {
public:
    explicit QuarticTable(u64 p);
    QuarticTable(u64 p, std::vector<std::uint8_t> bits);

    u64 p() const { return p_; }
    unsigned d() const { return d_; }
    bool attained(u64 r) const { r %= p_; return (bits_[r >> 3] >> (r & 7)) & 1u; }
    // #{m mod p : m^4 = r}.
    unsigned count(u64 r) const {
        r %= p_;
        if (r == 0) return 1;
        return attained(r) ? d_ : 0;
    }
    std::vector<u64> attained_nonzero() const;
    const std::vector<std::uint8_t>& bits() const { return bits_; }

private:
    u64 p_;
    unsigned d_;
    std::vector<std::uint8_t> bits_;
};

QuarticTable build_quartic_table(u64 p);

unsigned np_direct(u64 p, i64 k, const QuarticTable& table);
unsigned np_via_characters(u64 p, i64 k);

// Brute-force count over n = 0..p-1; test and diagnostic use.
unsigned np_brute(u64 p, i64 k);

// Quartic tables for every odd prime up to `bound`.
class QuarticTableSet {
public:
    QuarticTableSet() = default;
    QuarticTableSet(u64 bound, const SieveTables& sieve);
    explicit QuarticTableSet(u64 bound, std::vector<QuarticTable> tables);

    u64 bound() const { return bound_; }
    const std::vector<QuarticTable>& tables() const { return tables_; }
    // Throws ResourceError when p exceeds the bound or is not an odd prime.
    const QuarticTable& at(u64 p) const;

private:
    u64 bound_ = 0;
    std::vector<QuarticTable> tables_;
    std::vector<std::uint32_t> index_;  // p -> position in tables_, or UINT32_MAX
};

// (Z/qZ)^* written as a product of cyclic factors with discrete-log tables.
// Odd prime powers contribute one factor generated by their least primitive
// root; 4 contributes <-1>; 2^e (e >= 3) contributes <-1> x <5>.
class CharacterGroup {
public:
    explicit CharacterGroup(u64 q);

    u64 modulus() const { return q_; }
    u64 size() const { return phi_; }
    const std::vector<u64>& factor_orders() const { return orders_; }
    // Prime-power modulus owning each cyclic factor.
    const std::vector<u64>& factor_moduli() const { return factor_moduli_; }
    // Exponent of the group (lcm of factor orders).
    u64 exponent() const { return lambda_; }
    const std::vector<u64>& primes() const { return primes_; }
    // e(j / exponent()) for j in [0, exponent()).
    const std::vector<cplx>& roots() const { return roots_; }
    bool is_unit(u64 n) const { return unit_[n % q_] != 0; }
    // Discrete log of n in factor i; n must be a unit.
    u64 log(u64 n, std::size_t i) const { return logs_[(n % q_) * orders_.size() + i]; }

private:
    u64 q_;
    u64 phi_ = 1;
    u64 lambda_ = 1;
    std::vector<u64> orders_;
    std::vector<u64> factor_moduli_;
    std::vector<u64> primes_;
    std::vector<std::uint8_t> unit_;
    std::vector<cplx> roots_;
    std::vector<u64> logs_;
};

// chi(g_i) = e(exponents[i] / orders[i]) on the cyclic generators. Values are
// stored as phase indices j in Z / lambda (chi(n) = e(j / lambda)) so that
// products and powers stay in integer arithmetic.
class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<u64> exponents);

    u64 modulus() const { return group_->modulus(); }
    u64 order() const { return order_; }
    bool is_principal() const { return order_ == 1; }
    const std::vector<u64>& exponents() const { return exponents_; }
    const CharacterGroup& group() const { return *group_; }

    // Phase index in Z / group().exponent(); nullopt off the units.
    std::optional<u64> phase(i64 n) const;
    cplx operator()(i64 n) const;

    DirichletCharacter pow(u64 j) const;
    DirichletCharacter conj() const { return pow(order_ - 1); }
    bool is_primitive() const;

private:
    std::shared_ptr<const CharacterGroup> group_;
    std::vector<u64> exponents_;
    u64 order_;
    std::vector<std::int64_t> table_;  // phase index per residue, -1 off units
};

// All phi(q) characters mod q, principal first.
std::vector<DirichletCharacter> characters_mod(u64 q);

// The character of exact order gcd(p - 1, 4) mod an odd prime p, sending the
// least primitive root to e(1 / d).
DirichletCharacter quartic_family_character(u64 p);

bool is_fourth_power_residue(i64 r, u64 q);

}  // namespace qpl
