// src/expsums.cpp

#include "qpl/expsums.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace qpl {

ArcPoint::ArcPoint(i64 a, u64 q, double beta) : a_(0), q_(q), beta_(beta) {
    if (q == 0) throw ArgumentError("ArcPoint: q must be positive");
    a_ = mod_signed(a, q);
    if (std::gcd(a_, q_) != 1)
        throw ArgumentError("ArcPoint: gcd(a, q) != 1 for a = " + std::to_string(a) + ", q = " + std::to_string(q));
    if (!std::isfinite(beta)) throw ArgumentError("ArcPoint: beta must be finite");
}

namespace {

// n^4 mod q without overflow.
u64 fourth_mod(u64 n, u64 q) {
    const u64 r = n % q;
    const u64 sq = mulmod(r, r, q);
    return mulmod(sq, sq, q);
}

double fourth_power(u64 n) {
    const double d = static_cast<double>(n);
    return (d * d) * (d * d);
}

}  // namespace

cplx S1(const ArcPoint& alpha, u64 z, const SieveTables& t) {
    if (z < 1 || z > t.limit())
        throw RangeError("S1: z = " + std::to_string(z) + " beyond the von Mangoldt table (" + std::to_string(t.limit()) + ")");
    const u64 q = alpha.q();
    const auto roots = roots_table(q);
    const double beta = alpha.beta();
    CompensatedComplexSum acc;
    for (u64 m = 2; m <= z; ++m) {
        const double lam = von_mangoldt(m, t);
        if (lam == 0.0) continue;
        cplx ph = roots[mulmod(alpha.a(), m % q, q)];
        if (beta != 0.0) ph *= e_frac(beta * static_cast<double>(m));
        acc.add(lam * ph);
    }
    return acc.value();
}

cplx S2(const ArcPoint& alpha, u64 x) {
    const u64 q = alpha.q();
    const auto roots = roots_table(q);
    const double beta = alpha.beta();
    CompensatedComplexSum acc;
    for (u64 n = 1; n <= x; ++n) {
        cplx ph = roots[(q - mulmod(alpha.a(), fourth_mod(n, q), q)) % q];
        if (beta != 0.0) ph *= e_frac(-beta * fourth_power(n));
        acc.add(ph);
    }
    return acc.value();
}

cplx gauss_sum(const DirichletCharacter& chi, i64 a) {
    const u64 q = chi.modulus();
    if (std::gcd(mod_signed(a, q), q) != 1)
        throw ArgumentError("gauss_sum: gcd(a, q) != 1 for a = " + std::to_string(a) + ", q = " + std::to_string(q));
    const u64 aa = mod_signed(a, q);
    CompensatedComplexSum acc;
    for (u64 n = 1; n <= q; ++n) {
        const auto ph = chi.phase(static_cast<i64>(n));
        if (!ph) continue;
        acc.add(chi.group().roots()[*ph] * root_of_unity(static_cast<i64>(mulmod(aa, n % q, q)), q));
    }
    return acc.value();
}

i64 ramanujan_sum(u64 q, i64 k) {
    if (q == 0) throw ArgumentError("ramanujan_sum: q must be positive");
    const u64 g = std::gcd(mod_signed(k, q), q);
    const u64 r = q / g;
    const Factorization fr = factorize(r);
    return static_cast<i64>(mobius(fr)) * static_cast<i64>(euler_phi(q) / euler_phi(fr));
}

GaussIdentity::GaussIdentity(u64 q) : q_(q), chars_(characters_mod(q)) {
    tau_conj_.reserve(chars_.size());
    for (const auto& chi : chars_) tau_conj_.push_back(gauss_sum(chi.conj(), 1));
}

double GaussIdentity::residual(i64 a, i64 m) const {
    const u64 am = mulmod(mod_signed(a, q_), mod_signed(m, q_), q_);
    if (std::gcd(am, q_) != 1)
        throw ArgumentError("gauss_identity_check: gcd(am, q) != 1 for q = " + std::to_string(q_));
    const cplx lhs = root_of_unity(static_cast<i64>(am), q_);
    CompensatedComplexSum acc;
    for (std::size_t i = 0; i < chars_.size(); ++i) acc.add(chars_[i](static_cast<i64>(am)) * tau_conj_[i]);
    const cplx rhs = acc.value() / static_cast<double>(chars_.size());
    return std::abs(lhs - rhs);
}

double gauss_identity_check(i64 a, i64 m, u64 q) { return GaussIdentity(q).residual(a, m); }

SigmaEvaluator::SigmaEvaluator(u64 q) : q_(q), roots_(roots_table(q)) {
    if (q == 0) throw ArgumentError("sigma_q: q must be positive");
    std::vector<u64> count(q, 0);
    for (u64 m = 1; m <= q; ++m) ++count[fourth_mod(m, q)];
    std::vector<u64> residues;
    for (u64 r = 0; r < q; ++r)
        if (count[r]) residues.push_back(r);
    for (u64 a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        units_.push_back(a);
        CompensatedComplexSum acc;
        for (u64 r : residues) acc.add(static_cast<double>(count[r]) * roots_[(q - mulmod(a, r, q)) % q]);
        inner_.push_back(acc.value());
    }
}

SigmaValue SigmaEvaluator::operator()(i64 k) const {
    const u64 kk = mod_signed(k, q_);
    CompensatedComplexSum acc;
    for (std::size_t i = 0; i < units_.size(); ++i) acc.add(roots_[(q_ - mulmod(units_[i], kk, q_)) % q_] * inner_[i]);
    const cplx raw = acc.value();
    const double tol = 1e-6 * static_cast<double>(q_) * static_cast<double>(q_);
    const double rounded = std::round(raw.real());
    if (std::abs(raw.imag()) > tol || std::abs(raw.real() - rounded) > tol)
        throw ConsistencyError("sigma_q: sum for q = " + std::to_string(q_) + " is not integral (raw = " +
                               std::to_string(raw.real()) + " + " + std::to_string(raw.imag()) + "i)");
    return {static_cast<i64>(rounded), raw};
}

SigmaValue sigma_q(u64 q, i64 k) { return SigmaEvaluator(q)(k); }

i64 sigma_q_multiplicative(u64 q, i64 k) {
    const Factorization f = factorize(q);
    if (!is_squarefree(f)) throw ArgumentError("sigma_q_multiplicative: q must be square-free");
    i64 r = 1;
    for (const auto& pe : f.factors) {
        const u64 p = pe.prime;
        const i64 np = (p == 2) ? 1 : static_cast<i64>(np_brute(p, k));
        r *= static_cast<i64>(p) * (np - 1);
    }
    return r;
}

i64 sigma_prime_case_formula(u64 p, i64 k) {
    if (p == 2 || p % 4 == 3) return 0;
    const DirichletCharacter chi = quartic_family_character(p);
    cplx s{0, 0};
    for (u64 j = 1; j <= 3; ++j) s += chi.pow(j)(-k);
    return static_cast<i64>(p) * static_cast<i64>(std::llround(s.real()));
}

S1Decomposition decompose_S1(const ArcPoint& alpha, u64 z, const SieveTables& t, u64 max_q) {
    const u64 q = alpha.q();
    if (q > max_q) throw ArgumentError("decompose_S1: q = " + std::to_string(q) + " exceeds character bound");
    if (z < 1 || z > t.limit()) throw RangeError("decompose_S1: z = " + std::to_string(z) + " beyond the von Mangoldt table");

    const auto roots = roots_table(q);
    const double beta = alpha.beta();
    const Factorization fq = factorize(q);
    const double phi = static_cast<double>(euler_phi(fq));

    // Residue-class buckets W[r] = sum_{m = r mod q} Lambda(m) e(beta m).
    std::vector<CompensatedComplexSum> W(q);
    CompensatedComplexSum U, R, direct;
    for (u64 m = 1; m <= z; ++m) {
        const cplx eb = beta == 0.0 ? cplx(1.0, 0.0) : e_frac(beta * static_cast<double>(m));
        U.add(eb);
        const double lam = m == 1 ? 0.0 : von_mangoldt(m, t);
        if (lam == 0.0) continue;
        const cplx term = lam * roots[mulmod(alpha.a(), m % q, q)] * eb;
        direct.add(term);
        if (std::gcd(m, q) != 1)
            R.add(term);
        else
            W[m % q].add(lam * eb);
    }

    S1Decomposition out{};
    out.S1 = direct.value();
    out.R = R.value();
    out.T1 = static_cast<double>(mobius(fq)) / phi * U.value();

    CompensatedComplexSum E1;
    for (const auto& chi : characters_mod(q)) {
        CompensatedComplexSum inner;
        for (u64 r = 0; r < q; ++r) {
            const auto ph = chi.phase(static_cast<i64>(r));
            if (ph) inner.add(chi.group().roots()[*ph] * W[r].value());
        }
        cplx s = inner.value();
        if (chi.is_principal()) s -= U.value();
        E1.add(gauss_sum(chi.conj(), 1) * chi(static_cast<i64>(alpha.a())) * s);
    }
    out.E1 = E1.value() / phi;
    return out;
}

S2Decomposition decompose_S2(const ArcPoint& alpha, u64 x) {
    const u64 q = alpha.q();
    const u64 a = alpha.a();
    const double beta = alpha.beta();
    S2Decomposition out{};
    out.S2 = S2(alpha, x);

    CompensatedComplexSum T2, E2;
    for (u64 d = 1; d <= q; ++d) {
        if (q % d) continue;
        DivisorRecord rec{};
        rec.d = d;
        rec.q_star = q / d;
        const u128 d3 = static_cast<u128>(d) * d * d;
        rec.g = static_cast<u64>(std::gcd<u128, u128>(d3, rec.q_star));
        rec.d_star = static_cast<u64>(d3 / rec.g);
        rec.q1_star = rec.q_star / rec.g;
        if (static_cast<u128>(rec.d) * rec.q_star != q || static_cast<u128>(rec.d_star) * rec.g != d3)
            throw ConsistencyError("decompose_S2: divisor bookkeeping failed");

        const u64 q1 = rec.q1_star;
        // W[r] = sum over n <= x with gcd(n, q) = d and n/d = r mod q1 of e(-beta n^4).
        std::vector<CompensatedComplexSum> W(q1);
        CompensatedComplexSum V;
        for (u64 n = d; n <= x; n += d) {
            if (std::gcd(n, q) != d) continue;
            const cplx eb = beta == 0.0 ? cplx(1.0, 0.0) : e_frac(-beta * fourth_power(n));
            W[(n / d) % q1].add(eb);
            V.add(eb);
        }

        const u64 c = mulmod(a, rec.d_star % q1, q1);  // a d* mod q1*
        const auto chars = characters_mod(q1);
        const double phi1 = static_cast<double>(chars.size());
        const auto roots1 = roots_table(q1);

        CompensatedComplexSum ell;
        for (u64 l = 1; l <= q1; ++l) {
            if (std::gcd(l, q1) != 1) continue;
            ell.add(roots1[(q1 - mulmod(c, fourth_mod(l, q1), q1)) % q1]);
        }
        rec.T2_part = ell.value() * V.value() / phi1;

        CompensatedComplexSum e2;
        for (const auto& chi : chars) {
            const DirichletCharacter chi4 = chi.pow(4);
            if (chi4.is_principal()) continue;
            CompensatedComplexSum inner;
            for (u64 r = 0; r < q1; ++r) inner.add(chi4(static_cast<i64>(r)) * W[r].value());
            e2.add(chi(-static_cast<i64>(c)) * gauss_sum(chi.conj(), 1) * inner.value());
        }
        rec.E2_part = e2.value() / phi1;

        T2.add(rec.T2_part);
        E2.add(rec.E2_part);
        out.divisors.push_back(rec);
    }
    out.T2 = T2.value();
    out.E2 = E2.value();
    return out;
}

bool MajorArcs::contains(double alpha) const {
    const double t = alpha - std::floor(alpha);
    const u64 qmax = static_cast<u64>(std::floor(Q1));
    for (u64 q = 1; q <= std::max<u64>(qmax, 1); ++q) {
        const double qd = static_cast<double>(q);
        const double a = std::round(t * qd);
        const u64 ar = static_cast<u64>(a) % q;
        if (std::gcd(ar, q) != 1) continue;
        if (std::abs(t - a / qd) <= 1.0 / (qd * Q2)) return true;
    }
    return false;
}

MajorArcs build_major_arcs(u64 x, double c1, double eps) {
    if (x < 2) throw ConfigError("build_major_arcs: x must be at least 2");
    if (!(c1 > 0) || !(eps > 0 && eps < 1)) throw ConfigError("build_major_arcs: need c1 > 0 and 0 < eps < 1");
    MajorArcs m{x, c1, eps, std::pow(std::log(static_cast<double>(x)), c1),
                std::pow(static_cast<double>(x), 1.0 - eps), {}};
    if (!(m.Q2 > 2.0 * m.Q1))
        throw ConfigError("build_major_arcs: Q2 = " + std::to_string(m.Q2) + " must exceed 2 Q1 = " +
                          std::to_string(2.0 * m.Q1));
    const u64 qmax = std::max<u64>(1, static_cast<u64>(std::floor(m.Q1)));
    for (u64 q = 1; q <= qmax; ++q)
        for (u64 a = 0; a < q; ++a)
            if (std::gcd(a, q) == 1) m.arcs.push_back({a, q, 1.0 / (static_cast<double>(q) * m.Q2)});

    // Disjointness on the circle: sort centres and compare neighbours,
    // including the wrap from the last arc back to the first.
    std::vector<std::pair<double, double>> iv;
    for (const auto& arc : m.arcs) iv.emplace_back(arc.center(), arc.halfwidth);
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 0; i < iv.size() && iv.size() > 1; ++i) {
        const auto& lo = iv[i];
        const auto& hi = iv[(i + 1) % iv.size()];
        const double gap = (i + 1 == iv.size()) ? hi.first + 1.0 - lo.first : hi.first - lo.first;
        if (gap <= lo.second + hi.second) throw ConsistencyError("build_major_arcs: arcs overlap");
    }
    return m;
}

Rational dirichlet_approx(double alpha, u64 Q) {
    if (Q == 0) throw ArgumentError("dirichlet_approx: Q must be positive");
    const long double target = alpha;
    const long double bound_num = 1.0L / (static_cast<long double>(Q) + 1.0L);
    // Convergents h/k via the standard recurrence.
    long double rem = target;
    i64 h_prev = 1, h = static_cast<i64>(std::floor(rem));
    u64 k_prev = 0, k = 1;
    rem -= std::floor(rem);
    for (int iter = 0; iter < 128; ++iter) {
        if (k <= Q) {
            const long double err = std::fabs(target - static_cast<long double>(h) / static_cast<long double>(k));
            if (err <= bound_num / static_cast<long double>(k)) return {h, k};
        } else {
            break;
        }
        if (rem < 1e-18L) break;
        rem = 1.0L / rem;
        const long double fl = std::floor(rem);
        rem -= fl;
        const i64 c = static_cast<i64>(fl);
        const i64 h_next = c * h + h_prev;
        const u64 k_next = static_cast<u64>(c) * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    // Floating-point breakdown of the expansion: fall back to a direct scan.
    for (u64 qq = 1; qq <= Q; ++qq) {
        const long double a = std::floor(target * static_cast<long double>(qq) + 0.5L);
        if (std::fabs(target - a / static_cast<long double>(qq)) <= bound_num / static_cast<long double>(qq))
            return {static_cast<i64>(a), qq};
    }
    throw ConsistencyError("dirichlet_approx: no approximation found");
}

MinorArcSample minor_arc_sup_S2(u64 x, const MajorArcs& arcs, u64 grid, unsigned threads) {
    if (grid < 1000) throw ArgumentError("minor_arc_sup_S2: grid must be >= 1000");
    const double offset = 1.0 / arcs.Q2;
    struct Best {
        double mag = -1.0;
        u64 j = 0;
        u64 sampled = 0;
        u64 skipped = 0;
    };
    const unsigned nt = resolve_threads(threads);
    std::vector<Best> best(nt);
    parallel_shards(grid, nt, [&](std::size_t b, std::size_t e, unsigned s) {
        Best& bs = best[s];
        for (std::size_t j = b; j < e; ++j) {
            const double alpha = offset + static_cast<double>(j) / static_cast<double>(grid);
            if (arcs.contains(alpha)) {
                ++bs.skipped;
                continue;
            }
            ++bs.sampled;
            const u64 g = std::gcd<u64>(j, grid);
            const ArcPoint pt(static_cast<i64>(j / g), grid / g, offset);
            const double mag = std::abs(S2(pt, x));
            if (mag > bs.mag) {
                bs.mag = mag;
                bs.j = j;
            }
        }
    });
    Best all;
    for (const auto& b : best) {
        all.sampled += b.sampled;
        all.skipped += b.skipped;
        if (b.mag > all.mag) {
            all.mag = b.mag;
            all.j = b.j;
        }
    }
    if (all.mag < 0) return {0.0, 0.0, all.sampled, all.skipped};
    return {offset + static_cast<double>(all.j) / static_cast<double>(grid), all.mag, all.sampled, all.skipped};
}

}  // namespace qpl
