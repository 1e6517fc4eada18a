// src/residues.cpp

#include "qpl/residues.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qpl/phase.hpp"

namespace qpl {

namespace {

std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> out;
    for (const auto& pe : factorize(n).factors) out.push_back(pe.prime);
    return out;
}

}  // namespace

u64 primitive_root(u64 m) {
    if (m < 3 || m % 2 == 0) throw ArgumentError("primitive_root: modulus " + std::to_string(m) + " is not odd");
    const Factorization f = factorize(m);
    if (f.factors.size() != 1)
        throw ArgumentError("primitive_root: " + std::to_string(m) + " is not a prime power");
    const u64 phi = euler_phi(f);
    const std::vector<u64> rs = prime_divisors(phi);
    for (u64 g = 2; g < m; ++g) {
        if (std::gcd(g, m) != 1) continue;
        bool ok = true;
        for (u64 r : rs) {
            if (powmod(g, phi / r, m) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw ConsistencyError("primitive_root: none found for " + std::to_string(m));
}

QuarticTable::QuarticTable(u64 p) : p_(p), d_(static_cast<unsigned>(std::gcd<u64>(p - 1, 4))), bits_((p + 7) / 8, 0) {
    for (u64 m = 0; m < p; ++m) {
        const u64 sq = mulmod(m, m, p);
        const u64 r = mulmod(sq, sq, p);
        bits_[r >> 3] |= static_cast<std::uint8_t>(1u << (r & 7));
    }
}

QuarticTable::QuarticTable(u64 p, std::vector<std::uint8_t> bits)
    : p_(p), d_(static_cast<unsigned>(std::gcd<u64>(p - 1, 4))), bits_(std::move(bits)) {
    if (bits_.size() != (p + 7) / 8) throw ArgumentError("QuarticTable: bitmap size mismatch");
}

std::vector<u64> QuarticTable::attained_nonzero() const {
    std::vector<u64> out;
    for (u64 r = 1; r < p_; ++r)
        if (attained(r)) out.push_back(r);
    return out;
}

QuarticTable build_quartic_table(u64 p) {
    if (p < 3 || !is_prime_u64(p)) throw ArgumentError("build_quartic_table: " + std::to_string(p) + " is not an odd prime");
    return QuarticTable(p);
}

unsigned np_direct(u64 p, i64 k, const QuarticTable& table) {
    if (table.p() != p) throw ArgumentError("np_direct: table built for a different prime");
    return table.count(mod_signed(-k, p));
}

unsigned np_brute(u64 p, i64 k) {
    const u64 target = mod_signed(-k, p);
    unsigned c = 0;
    for (u64 n = 0; n < p; ++n) {
        const u64 sq = mulmod(n, n, p);
        if (mulmod(sq, sq, p) == target) ++c;
    }
    return c;
}

DirichletCharacter quartic_family_character(u64 p) {
    auto group = std::make_shared<const CharacterGroup>(p);
    if (group->factor_orders().size() != 1) throw ArgumentError("quartic_family_character: modulus must be an odd prime");
    const u64 d = std::gcd<u64>(p - 1, 4);
    return DirichletCharacter(group, {(p - 1) / d});
}

unsigned np_via_characters(u64 p, i64 k) {
    if (p < 3 || !is_prime_u64(p)) throw ArgumentError("np_via_characters: " + std::to_string(p) + " is not an odd prime");
    if (mod_signed(k, p) == 0)
        throw DomainError("np_via_characters: p divides k; use np_direct (n_p = 1)");
    const DirichletCharacter chi = quartic_family_character(p);
    const u64 d = chi.order();
    const u64 lambda = chi.group().exponent();
    const u64 j0 = *chi.phase(-k);
    cplx sum{0, 0};
    for (u64 j = 0; j < d; ++j) sum += chi.group().roots()[mulmod(j, j0, lambda)];
    if (std::abs(sum.imag()) > 1e-6)
        throw ConsistencyError("np_via_characters: imaginary part " + std::to_string(sum.imag()) + " at p = " +
                               std::to_string(p));
    const double r = std::round(sum.real());
    if (std::abs(sum.real() - r) > 1e-6 || r < 0)
        throw ConsistencyError("np_via_characters: non-integral character sum at p = " + std::to_string(p));
    return static_cast<unsigned>(r);
}

QuarticTableSet::QuarticTableSet(u64 bound, const SieveTables& sieve) : bound_(bound) {
    if (bound > sieve.limit()) throw ResourceError("QuarticTableSet: bound exceeds sieve limit");
    index_.assign(bound + 1, std::numeric_limits<std::uint32_t>::max());
    for (u64 p = 3; p <= bound; p += 2) {
        if (!sieve.is_prime(p)) continue;
        index_[p] = static_cast<std::uint32_t>(tables_.size());
        tables_.emplace_back(p);
    }
}

QuarticTableSet::QuarticTableSet(u64 bound, std::vector<QuarticTable> tables) : bound_(bound), tables_(std::move(tables)) {
    index_.assign(bound + 1, std::numeric_limits<std::uint32_t>::max());
    for (std::size_t i = 0; i < tables_.size(); ++i) {
        if (tables_[i].p() > bound) throw ArgumentError("QuarticTableSet: table prime beyond bound");
        index_[tables_[i].p()] = static_cast<std::uint32_t>(i);
    }
}

const QuarticTable& QuarticTableSet::at(u64 p) const {
    if (p > bound_ || index_[p] == std::numeric_limits<std::uint32_t>::max())
        throw ResourceError("quartic table for p = " + std::to_string(p) + " not available (bound " +
                            std::to_string(bound_) + ")");
    return tables_[index_[p]];
}

CharacterGroup::CharacterGroup(u64 q) : q_(q) {
    if (q == 0) throw ArgumentError("CharacterGroup: modulus must be positive");
    const Factorization f = factorize(q);

    struct Component {
        u64 modulus;
        std::vector<u64> orders;
        std::vector<std::vector<u64>> log;  // log[i][r] for residue r mod modulus
    };
    std::vector<Component> comps;
    for (const auto& pe : f.factors) {
        primes_.push_back(pe.prime);
        u64 pk = 1;
        for (unsigned i = 0; i < pe.exponent; ++i) pk *= pe.prime;
        Component c{pk, {}, {}};
        if (pe.prime != 2) {
            const u64 phi = pk / pe.prime * (pe.prime - 1);
            const u64 g = primitive_root(pk);
            c.orders = {phi};
            c.log.assign(1, std::vector<u64>(pk, 0));
            u64 v = 1;
            for (u64 j = 0; j < phi; ++j) {
                c.log[0][v] = j;
                v = mulmod(v, g, pk);
            }
        } else if (pk == 4) {
            c.orders = {2};
            c.log.assign(1, std::vector<u64>(4, 0));
            c.log[0][3] = 1;
        } else if (pk >= 8) {
            const u64 half = pk / 4;
            c.orders = {2, half};
            c.log.assign(2, std::vector<u64>(pk, 0));
            u64 v = 1;
            for (u64 b = 0; b < half; ++b) {
                c.log[0][v] = 0;
                c.log[1][v] = b;
                c.log[0][pk - v] = 1;
                c.log[1][pk - v] = b;
                v = mulmod(v, 5, pk);
            }
        }
        comps.push_back(std::move(c));
    }

    for (const auto& c : comps)
        for (u64 o : c.orders) {
            orders_.push_back(o);
            factor_moduli_.push_back(c.modulus);
            phi_ *= o;
            lambda_ = std::lcm(lambda_, o);
        }

    const std::size_t nf = orders_.size();
    unit_.assign(q, 0);
    logs_.assign(q * nf, 0);
    for (u64 n = 0; n < q; ++n) {
        if (std::gcd(n, q) != 1) continue;
        unit_[n] = 1;
        std::size_t i = 0;
        for (const auto& c : comps)
            for (std::size_t j = 0; j < c.orders.size(); ++j) logs_[n * nf + i++] = c.log[j][n % c.modulus];
    }
    if (q == 1) unit_[0] = 1;
    roots_ = roots_table(lambda_);
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<u64> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)), order_(1) {
    const auto& orders = group_->factor_orders();
    if (exponents_.size() != orders.size()) throw ArgumentError("DirichletCharacter: exponent count mismatch");
    const u64 lambda = group_->exponent();
    std::vector<u64> scale(orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        exponents_[i] %= orders[i];
        order_ = std::lcm(order_, orders[i] / std::gcd(exponents_[i], orders[i]));
        scale[i] = mulmod(exponents_[i], lambda / orders[i], lambda);
    }
    const u64 q = group_->modulus();
    table_.assign(q, -1);
    for (u64 n = 0; n < q; ++n) {
        if (!group_->is_unit(n)) continue;
        u64 ph = 0;
        for (std::size_t i = 0; i < orders.size(); ++i) ph = (ph + mulmod(scale[i], group_->log(n, i), lambda)) % lambda;
        table_[n] = static_cast<std::int64_t>(ph);
    }
}

std::optional<u64> DirichletCharacter::phase(i64 n) const {
    const std::int64_t t = table_[mod_signed(n, modulus())];
    if (t < 0) return std::nullopt;
    return static_cast<u64>(t);
}

cplx DirichletCharacter::operator()(i64 n) const {
    const std::int64_t t = table_[mod_signed(n, modulus())];
    if (t < 0) return {0.0, 0.0};
    return group_->roots()[static_cast<std::size_t>(t)];
}

DirichletCharacter DirichletCharacter::pow(u64 j) const {
    std::vector<u64> e(exponents_.size());
    const auto& orders = group_->factor_orders();
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = mulmod(exponents_[i], j % orders[i], orders[i]);
    return DirichletCharacter(group_, std::move(e));
}

bool DirichletCharacter::is_primitive() const {
    const u64 q = modulus();
    if (q == 1) return true;
    // chi is induced from modulus q/p exactly when it is trivial on the
    // kernel of reduction mod q/p.
    for (u64 p : group_->primes()) {
        const u64 sub = q / p;
        bool trivial = true;
        for (u64 t = 0; t < p && trivial; ++t) {
            const u64 n = (1 + t * sub) % q;
            const std::int64_t ph = table_[n];
            if (ph > 0) trivial = false;
        }
        if (trivial) return false;
    }
    return true;
}

std::vector<DirichletCharacter> characters_mod(u64 q) {
    auto group = std::make_shared<const CharacterGroup>(q);
    const auto& orders = group->factor_orders();
    std::vector<DirichletCharacter> out;
    out.reserve(group->size());
    std::vector<u64> e(orders.size(), 0);
    while (true) {
        out.emplace_back(group, e);
        std::size_t i = e.size();
        while (i > 0) {
            --i;
            if (++e[i] < orders[i]) break;
            e[i] = 0;
            if (i == 0) return out;
        }
        if (e.empty()) return out;
    }
}

namespace {

bool scan_fourth_power(u64 r, u64 m) {
    r %= m;
    for (u64 x = 0; x < m; ++x) {
        const u64 sq = mulmod(x, x, m);
        if (mulmod(sq, sq, m) == r) return true;
    }
    return false;
}

}  // namespace

bool is_fourth_power_residue(i64 r, u64 q) {
    if (q == 0) throw ArgumentError("is_fourth_power_residue: modulus must be positive");
    if (q == 1) return true;
    constexpr u64 kDirectScanLimit = 4096;
    if (q <= kDirectScanLimit) return scan_fourth_power(mod_signed(r, q), q);
    // By CRT, r is a fourth power mod q iff it is one mod every prime power.
    for (const auto& pe : factorize(q).factors) {
        u64 pk = 1;
        for (unsigned i = 0; i < pe.exponent; ++i) pk *= pe.prime;
        if (!scan_fourth_power(mod_signed(r, pk), pk)) return false;
    }
    return true;
}

}  // namespace qpl
