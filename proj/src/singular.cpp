// src/singular.cpp

#include "qpl/singular.hpp"

#include <cmath>
#include <string>

namespace qpl {

namespace {

constexpr u64 kLogSpaceCutoff = 100000;

// Multiplies factors in increasing prime order, recording partial products
// at the trace checkpoints. Above kLogSpaceCutoff the product is formed as
// exp of a compensated sum of logarithms.
template <class FactorAt>
SingularValue accumulate(i64 k, u64 P, const std::vector<u64>& primes, std::size_t count, FactorAt factor_at) {
    SingularValue out{k, P, 1.0, {1.0, 1.0, 1.0, 1.0}};
    const auto cps = trace_checkpoints(P);
    const bool log_space = P > kLogSpaceCutoff;
    double prod = 1.0;
    CompensatedSum logs;
    std::size_t next_cp = 0;
    auto current = [&] { return log_space ? std::exp(logs.value()) : prod; };
    for (std::size_t i = 0; i < count; ++i) {
        const u64 p = primes[i];
        while (next_cp < cps.size() && p > cps[next_cp]) out.trace[next_cp++] = current();
        const double f = factor_at(i);
        if (log_space)
            logs.add(std::log(f));
        else
            prod *= f;
    }
    while (next_cp < cps.size()) out.trace[next_cp++] = current();
    out.value = current();
    return out;
}

std::vector<u64> odd_primes_upto(const QuarticTableSet& tables, u64 P) {
    if (P > tables.bound())
        throw ResourceError("singular series cutoff " + std::to_string(P) + " exceeds quartic table bound " +
                            std::to_string(tables.bound()));
    std::vector<u64> ps;
    for (const auto& t : tables.tables()) {
        if (t.p() > P) break;
        ps.push_back(t.p());
    }
    return ps;
}

}  // namespace

std::array<u64, 4> trace_checkpoints(u64 P) { return {P / 10, P / 4, P / 2, P}; }

SingularValue singular_series(i64 k, u64 P, const QuarticTableSet& tables) {
    const auto ps = odd_primes_upto(tables, P);
    return accumulate(k, P, ps, ps.size(), [&](std::size_t i) {
        const u64 p = ps[i];
        return singular_factor(p, np_direct(p, k, tables.at(p)));
    });
}

SingularValue singular_series_via_characters(i64 k, u64 P) {
    std::vector<u64> ps;
    for (u64 p = 3; p <= P; p += 2)
        if (is_prime_u64(p)) ps.push_back(p);
    return accumulate(k, P, ps, ps.size(), [&](std::size_t i) {
        const u64 p = ps[i];
        const unsigned np = mod_signed(k, p) == 0 ? 1u : np_via_characters(p, k);
        return singular_factor(p, np);
    });
}

double truncation_delta(i64 k, u64 P, const QuarticTableSet& tables) {
    return std::abs(singular_series(k, 2 * P, tables).value - singular_series(k, P, tables).value);
}

SingularSeriesSweep::SingularSeriesSweep(u64 P, const QuarticTableSet& tables) : P_(P), primes_(odd_primes_upto(tables, P)) {
    offsets_.reserve(primes_.size());
    for (u64 p : primes_) {
        offsets_.push_back(factors_.size());
        const QuarticTable& t = tables.at(p);
        // Residue r of k gives n_p = count(-r mod p).
        for (u64 r = 0; r < p; ++r) factors_.push_back(singular_factor(p, t.count((p - r) % p)));
    }
}

double SingularSeriesSweep::partial(i64 k, std::size_t count) const {
    if (P_ > kLogSpaceCutoff) {
        return accumulate(k, P_, primes_, count, [&](std::size_t i) { return factor(i, k); }).value;
    }
    double prod = 1.0;
    for (std::size_t i = 0; i < count; ++i) prod *= factor(i, k);
    return prod;
}

PsiValue psi_tail(i64 k, double Q1, double Qmax, const QuarticTableSet& tables) {
    if (Qmax < Q1) throw ArgumentError("psi_tail: Qmax must be >= Q1");
    PsiValue out{k, Q1, Qmax, 0.0, 0};
    const u64 lo = static_cast<u64>(std::floor(std::max(Q1, 0.0))) + 1;
    const u64 hi = static_cast<u64>(std::floor(Qmax));
    if (hi > tables.bound())
        throw ResourceError("psi_tail: Qmax beyond quartic table bound " + std::to_string(tables.bound()));
    CompensatedSum acc;
    for (u64 q = lo; q <= hi; ++q) {
        if (q % 2 == 0) continue;
        const Factorization f = factorize(q);
        if (!is_squarefree(f)) continue;
        double prod = 1.0;
        for (const auto& pe : f.factors) {
            const int np = static_cast<int>(np_direct(pe.prime, k, tables.at(pe.prime)));
            prod *= np - 1;
            if (prod == 0.0) break;
        }
        if (prod == 0.0) continue;
        acc.add(static_cast<double>(mobius(f)) / static_cast<double>(euler_phi(f)) * prod);
        ++out.terms;
    }
    out.value = acc.value();
    return out;
}

bool is_reducible_shift(i64 k) {
    if (k <= 0 || k % 4 != 0) return false;
    const u64 m4 = static_cast<u64>(k / 4);
    const PerfectPower pp = perfect_power(m4);
    return m4 == 1 || pp.exponent % 4 == 0;
}

double main_term_integral(i64 k, u64 x, const MajorArcs& arcs) {
    if (k < 1) throw ArgumentError("main_term_integral: k must be positive");
    const i64 x4 = static_cast<i64>(x * x * x * x);
    const i64 z = x4 + k;
    // t = m - n^4 - k ranges over [1 - x^4 - k, x^4 - 1].
    const i64 tmin = 1 - x4 - k;
    const i64 tmax = x4 - 1;
    std::vector<double> prefix(static_cast<std::size_t>(tmax - tmin + 2));

    CompensatedComplexSum total;
    double last_delta = -1.0;
    for (const auto& arc : arcs.arcs) {
        const Factorization fq = factorize(arc.q);
        const int mu = mobius(fq);
        if (mu == 0) continue;
        const double delta = arc.halfwidth;
        if (delta != last_delta) {
            CompensatedSum acc;
            prefix[0] = 0.0;
            for (i64 t = tmin; t <= tmax; ++t) {
                const double kt = t == 0 ? 2.0 * delta
                                         : std::sin(2.0 * std::numbers::pi * delta * static_cast<double>(t)) /
                                               (std::numbers::pi * static_cast<double>(t));
                acc.add(kt);
                prefix[static_cast<std::size_t>(t - tmin + 1)] = acc.value();
            }
            last_delta = delta;
        }

        const u64 q = arc.q;
        std::vector<cplx> coeff(q + 1, cplx(0, 0));
        std::vector<bool> have(q + 1, false);
        CompensatedComplexSum over_n;
        for (u64 n = 1; n <= x; ++n) {
            const u64 d = std::gcd(n, q);
            if (!have[d]) {
                const u64 qs = q / d;
                const u128 d3 = static_cast<u128>(d) * d * d;
                const u64 g = static_cast<u64>(std::gcd<u128, u128>(d3, qs));
                const u64 q1 = qs / g;
                const u64 dstar = static_cast<u64>((d3 / g) % q1);
                const u64 c = mulmod(arc.a, dstar, q1);
                CompensatedComplexSum ell;
                u64 phi1 = 0;
                for (u64 l = 1; l <= q1; ++l) {
                    if (std::gcd(l, q1) != 1) continue;
                    ++phi1;
                    const u64 l2 = mulmod(l, l, q1);
                    ell.add(root_of_unity(-static_cast<i64>(mulmod(c, mulmod(l2, l2, q1), q1)), q1));
                }
                coeff[d] = ell.value() / static_cast<double>(phi1);
                have[d] = true;
            }
            const i64 n4 = static_cast<i64>(n * n * n * n);
            const i64 lo = 1 - n4 - k;  // m = 1
            const i64 hi = z - n4 - k;  // m = z
            const double kernel = prefix[static_cast<std::size_t>(hi - tmin + 1)] - prefix[static_cast<std::size_t>(lo - tmin)];
            over_n.add(coeff[d] * kernel);
        }
        const double scale = static_cast<double>(mu) / static_cast<double>(euler_phi(fq));
        total.add(scale * root_of_unity(-static_cast<i64>(mulmod(arc.a, mod_signed(k, q), q)), q) * over_n.value());
    }
    return total.value().real();
}

}  // namespace qpl
