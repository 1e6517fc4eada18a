// src/lemma_lab.cpp

#include "qpl/lemma_lab.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "qpl/arith.hpp"
#include "qpl/phase.hpp"
#include "qpl/residues.hpp"

namespace qpl {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::violated: return "violated";
        case Verdict::measured: return "measured";
    }
    return "?";
}

u64 trial_seed(u64 seed, u64 trial) {
    u64 z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

double safe_ratio(double lhs, double rhs) {
    if (rhs > 0) return lhs / rhs;
    return lhs == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

// Fractional part of a long-double product, returned in [0, 1).
double frac_ld(long double v) {
    const long double f = v - std::floor(v);
    return f >= 1.0L ? 0.0 : static_cast<double>(f);
}

}  // namespace

LemmaReport weyl_check(double alpha, u64 N, std::span<const double> lower, unsigned threads) {
    if (N == 0) throw ArgumentError("weyl_check: N must be positive");
    if (lower.size() > 4) throw ArgumentError("weyl_check: at most four lower-order coefficients");

    CompensatedComplexSum s;
    for (u64 n = 1; n <= N; ++n) {
        const long double nl = static_cast<long double>(n);
        long double phase = static_cast<long double>(alpha) * nl * nl * nl * nl;
        long double pw = 1.0L;
        for (double c : lower) {
            phase += static_cast<long double>(c) * pw;
            pw *= nl;
        }
        s.add(e_frac(frac_ld(phase)));
    }
    const double lhs = std::abs(s.value());

    // Triples with a zero entry contribute min(N, 1/0) = N each; the rest
    // come in 8 sign patterns of one positive triple.
    const double Nd = static_cast<double>(N);
    const double all = std::pow(2.0 * Nd - 1.0, 3);
    const double nonzero = std::pow(2.0 * Nd - 2.0, 3);
    std::vector<double> per_l1(N, 0.0);
    const long double a24 = 24.0L * static_cast<long double>(alpha);
    parallel_for(N > 1 ? N - 1 : 0, threads, [&](std::size_t i) {
        const u64 l1 = i + 1;
        CompensatedSum acc;
        for (u64 l2 = 1; l2 < N; ++l2) {
            const double step = frac_ld(a24 * static_cast<long double>(l1) * static_cast<long double>(l2));
            double t = 0.0;
            for (u64 l3 = 1; l3 < N; ++l3) {
                t += step;
                if (t >= 1.0) t -= 1.0;
                const double dist = std::min(t, 1.0 - t);
                acc.add(dist * Nd <= 1.0 ? Nd : 1.0 / dist);
            }
        }
        per_l1[i] = acc.value();
    });
    CompensatedSum inner;
    inner.add((all - nonzero) * Nd);
    for (double v : per_l1) inner.add(8.0 * v);
    const double rhs = 2.0 * Nd * std::pow(inner.value() / std::pow(Nd, 4), 0.125);

    LemmaReport r{"weyl", {{"alpha", alpha}, {"N", Nd}}, lhs, rhs, safe_ratio(lhs, rhs), Verdict::holds};
    for (std::size_t j = 0; j < lower.size(); ++j) r.params.emplace_back("c" + std::to_string(j), lower[j]);
    r.verdict = lhs <= rhs ? Verdict::holds : Verdict::violated;
    return r;
}

namespace {

double cross(cplx o, cplx a, cplx b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

// Largest pairwise distance, via the convex hull (Andrew's monotone chain).
double diameter(std::vector<cplx> pts) {
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) return 0.0;
    std::vector<cplx> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, std::abs(hull[i] - hull[j]));
    return best;
}

}  // namespace

std::vector<LemmaReport> polya_vinogradov_check(u64 q) {
    if (q < 3) throw ArgumentError("polya_vinogradov_check: q must be >= 3");
    const double qd = static_cast<double>(q);
    const double rhs = std::sqrt(qd) * std::log(qd);
    std::vector<LemmaReport> out;
    const auto chars = characters_mod(q);
    for (std::size_t idx = 0; idx < chars.size(); ++idx) {
        const auto& chi = chars[idx];
        if (chi.is_principal()) continue;
        // Partial sums are q-periodic (full period sums to zero), so every
        // window sum with endpoints in [0, 2q] is a difference of two of
        // P(0), ..., P(q - 1).
        std::vector<cplx> prefix;
        prefix.reserve(q);
        cplx run{0, 0};
        prefix.push_back(run);
        for (u64 n = 1; n < q; ++n) {
            run += chi(static_cast<i64>(n));
            prefix.push_back(run);
        }
        const double lhs = diameter(prefix);
        const bool primitive = chi.is_primitive();
        LemmaReport r{"pv",
                      {{"q", qd}, {"character", static_cast<double>(idx)}, {"order", static_cast<double>(chi.order())},
                       {"primitive", primitive ? 1.0 : 0.0}},
                      lhs,
                      rhs,
                      safe_ratio(lhs, rhs),
                      Verdict::measured};
        if (primitive) r.verdict = lhs <= rhs ? Verdict::holds : Verdict::violated;
        out.push_back(std::move(r));
    }
    return out;
}

Eigen::MatrixXcd random_complex_matrix(int rows, int cols, UniformStream& rng) {
    Eigen::MatrixXcd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = 2.0 * rng.next() - 1.0;
            const double im = 2.0 * rng.next() - 1.0;
            m(i, j) = cplx(re, im);
        }
    return m;
}

LemmaReport duality_check(const Eigen::MatrixXcd& T, u64 seed, int probes) {
    if (T.rows() != T.cols()) throw ArgumentError("duality_check: matrix must be square");
    if (T.rows() == 0) throw ArgumentError("duality_check: empty matrix");
    const Eigen::MatrixXcd row_gram = T.adjoint() * T;
    const Eigen::MatrixXcd Tt = T.transpose();
    const Eigen::MatrixXcd col_gram = Tt.adjoint() * Tt;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> row_es(row_gram, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> col_es(col_gram, Eigen::EigenvaluesOnly);
    const double d_row = row_es.eigenvalues().maxCoeff();
    const double d_col = col_es.eigenvalues().maxCoeff();
    const double scale = std::max(std::abs(d_row), std::abs(d_col));

    bool ok = std::abs(d_row - d_col) <= 1e-8 * scale;
    UniformStream rng(seed);
    const double slack = 1e-10 * scale + 1e-300;
    for (int i = 0; i < probes && ok; ++i) {
        Eigen::VectorXcd a = random_complex_matrix(static_cast<int>(T.cols()), 1, rng).col(0);
        Eigen::VectorXcd b = random_complex_matrix(static_cast<int>(T.rows()), 1, rng).col(0);
        a.normalize();
        b.normalize();
        if ((T * a).squaredNorm() > d_row + slack) ok = false;
        if ((Tt * b).squaredNorm() > d_col + slack) ok = false;
    }
    const double n = static_cast<double>(T.rows());
    return {"duality", {{"dim", n}, {"seed", static_cast<double>(seed)}}, d_row, d_col, safe_ratio(d_row, d_col),
            ok ? Verdict::holds : Verdict::violated};
}

LemmaReport bessel_check(const std::vector<Eigen::VectorXcd>& family, const Eigen::VectorXcd& xi) {
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (family[i].size() != xi.size()) throw ArgumentError("bessel_check: dimension mismatch");
        for (std::size_t j = i; j < family.size(); ++j) {
            const cplx ip = family[j].dot(family[i]);
            const cplx expect = i == j ? cplx(1, 0) : cplx(0, 0);
            if (std::abs(ip - expect) > 1e-10) throw ArgumentError("bessel_check: family is not orthonormal");
        }
    }
    CompensatedSum lhs;
    for (const auto& phi : family) lhs.add(std::norm(phi.dot(xi)));
    const double rhs = xi.squaredNorm();
    LemmaReport r{"bessel",
                  {{"dim", static_cast<double>(xi.size())}, {"R", static_cast<double>(family.size())}},
                  lhs.value(),
                  rhs,
                  safe_ratio(lhs.value(), rhs),
                  Verdict::holds};
    r.verdict = r.lhs <= r.rhs + 1e-9 ? Verdict::holds : Verdict::violated;
    return r;
}

double gallagher_lhs_closed_form(std::span<const cplx> a, double Delta) {
    CompensatedSum acc;
    const long n = static_cast<long>(a.size());
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            const long h = i - j;
            const double kern = h == 0 ? 2.0 / Delta
                                       : std::sin(2.0 * std::numbers::pi * static_cast<double>(h) / Delta) /
                                             (std::numbers::pi * static_cast<double>(h));
            acc.add((a[i] * std::conj(a[j])).real() * kern);
        }
    return acc.value();
}

LemmaReport gallagher_check(std::span<const cplx> a, u64 N, u64 Nprime, double Delta) {
    const double Nd = static_cast<double>(N);
    if (!(Delta > 2.0 && Delta < Nd / 2.0)) throw ArgumentError("gallagher_check: need 2 < Delta < N/2");
    if (!(Nprime > N && Nprime < 2 * N)) throw ArgumentError("gallagher_check: need N < N' < 2N");
    if (a.size() != Nprime - N - 1) throw ArgumentError("gallagher_check: sequence must cover N < n < N'");

    // Phases measured from n = N + 1; the common factor e(beta (N + 1)) has
    // modulus one.
    auto integrand = [&](double beta) {
        cplx s{0, 0};
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * e_frac(beta * static_cast<double>(i));
        return std::norm(s);
    };
    double err = 0.0;
    const double lhs = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, -1.0 / Delta, 1.0 / Delta,
                                                                                     20, 1e-10, &err);

    // prefix[j] = sum of a over N < n <= N + j.
    std::vector<cplx> prefix(a.size() + 1, cplx(0, 0));
    for (std::size_t i = 0; i < a.size(); ++i) prefix[i + 1] = prefix[i] + a[i];
    const double t0 = Nd - Delta / 2.0;
    std::vector<double> cuts{t0, Nd};
    for (u64 n = N + 1; n < Nprime; ++n) {
        const double c = static_cast<double>(n) - Delta / 2.0;
        if (c > t0 && c < Nd) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    CompensatedSum integral;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi);
        const double upper = std::min(mid + Delta / 2.0, static_cast<double>(Nprime));
        // n ranges over N < n < upper.
        const double last = std::ceil(upper) - 1.0;
        const std::size_t count =
            last <= Nd ? 0 : std::min<std::size_t>(a.size(), static_cast<std::size_t>(last - Nd));
        integral.add(std::norm(prefix[count]) * (hi - lo));
    }
    const double rhs = integral.value() / (Delta * Delta);
    return {"gallagher",
            {{"N", Nd}, {"Nprime", static_cast<double>(Nprime)}, {"Delta", Delta}, {"quad_error", err}},
            lhs,
            rhs,
            safe_ratio(lhs, rhs),
            Verdict::measured};
}

namespace {

struct QuarticFamily {
    std::vector<DirichletCharacter> chars;
};

QuarticFamily primitive_quartic_characters(u64 Q) {
    QuarticFamily fam;
    for (u64 q = std::max<u64>(Q, 1); q < 2 * Q; ++q)
        for (auto& chi : characters_mod(q))
            if (chi.order() == 4 && chi.is_primitive()) fam.chars.push_back(std::move(chi));
    return fam;
}

double family_lhs(const QuarticFamily& fam, u64 M, std::span<const cplx> a) {
    CompensatedSum lhs;
    for (const auto& chi : fam.chars) {
        CompensatedComplexSum s;
        for (u64 i = 0; i < a.size(); ++i) s.add(a[i] * chi(static_cast<i64>(M + i)));
        lhs.add(std::norm(s.value()));
    }
    return lhs.value();
}

std::vector<bool> squarefree_mask(u64 M) {
    std::vector<bool> mask(M);
    for (u64 i = 0; i < M; ++i) mask[i] = mobius(M + i) != 0;
    return mask;
}

}  // namespace

double quartic_large_sieve_lhs(u64 Q, u64 M, std::span<const cplx> a) {
    if (a.size() != M) throw ArgumentError("quartic_large_sieve_lhs: need M coefficients");
    const auto mask = squarefree_mask(M);
    std::vector<cplx> b(a.begin(), a.end());
    for (u64 i = 0; i < M; ++i)
        if (!mask[i]) b[i] = 0;
    return family_lhs(primitive_quartic_characters(Q), M, b);
}

LemmaReport quartic_large_sieve_ratio(u64 Q, u64 M, u64 trials, u64 seed, unsigned threads) {
    if (Q == 0 || M == 0 || trials == 0) throw ArgumentError("quartic_large_sieve_ratio: Q, M, trials must be positive");
    const QuarticFamily fam = primitive_quartic_characters(Q);
    const auto mask = squarefree_mask(M);
    const double Qd = static_cast<double>(Q);
    const double scale = std::pow(Qd, 1.25) + std::pow(Qd, 2.0 / 3.0) * static_cast<double>(M);

    struct Trial {
        double lhs, rhs;
    };
    std::vector<Trial> res(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        UniformStream rng(trial_seed(seed, t));
        std::vector<cplx> a(M);
        CompensatedSum mass;
        for (u64 i = 0; i < M; ++i) {
            const double u = rng.next();
            a[i] = mask[i] ? e_frac(u) : cplx(0, 0);
            mass.add(std::norm(a[i]));
        }
        res[t] = {family_lhs(fam, M, a), scale * mass.value()};
    });

    LemmaReport best{"qls",
                     {{"Q", Qd}, {"M", static_cast<double>(M)}, {"trials", static_cast<double>(trials)},
                      {"seed", static_cast<double>(seed)}, {"characters", static_cast<double>(fam.chars.size())}},
                     0.0,
                     0.0,
                     -1.0,
                     Verdict::measured};
    for (const auto& r : res) {
        const double ratio = safe_ratio(r.lhs, r.rhs);
        if (ratio > best.ratio) {
            best.ratio = ratio;
            best.lhs = r.lhs;
            best.rhs = r.rhs;
        }
    }
    return best;
}

std::vector<LemmaReport> weyl_suite(u64 cases, u64 seed, u64 max_N, unsigned threads) {
    std::vector<LemmaReport> out;
    UniformStream rng(seed);
    for (u64 c = 0; c < cases; ++c) {
        const double alpha = rng.next();
        const u64 N = 1 + rng.next_u64() % max_N;
        const double lower[4] = {rng.next(), rng.next(), rng.next(), rng.next()};
        out.push_back(weyl_check(alpha, N, lower, threads));
    }
    return out;
}

std::vector<LemmaReport> bessel_suite(u64 cases, u64 seed, int dim) {
    std::vector<LemmaReport> out;
    UniformStream rng(seed);
    for (u64 c = 0; c < cases; ++c) {
        const int R = 1 + static_cast<int>(rng.next_u64() % static_cast<u64>(dim));
        const Eigen::MatrixXcd A = random_complex_matrix(dim, dim, rng);
        const Eigen::MatrixXcd Qm = Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ();
        std::vector<Eigen::VectorXcd> fam;
        for (int r = 0; r < R; ++r) fam.push_back(Qm.col(r));
        const Eigen::VectorXcd xi = random_complex_matrix(dim, 1, rng).col(0);
        out.push_back(bessel_check(fam, xi));
    }
    return out;
}

std::vector<LemmaReport> duality_suite(u64 cases, u64 seed, int size) {
    std::vector<LemmaReport> out;
    UniformStream rng(seed);
    for (u64 c = 0; c < cases; ++c) {
        const Eigen::MatrixXcd T = random_complex_matrix(size, size, rng);
        out.push_back(duality_check(T, trial_seed(seed, c)));
    }
    return out;
}

std::vector<LemmaReport> pv_suite(u64 q_max) {
    std::vector<LemmaReport> out;
    for (u64 q = 3; q <= q_max; ++q) {
        auto r = polya_vinogradov_check(q);
        out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    return out;
}

LemmaReport gallagher_anchor(u64 seed, u64 N, u64 Nprime, double Delta) {
    UniformStream rng(seed);
    std::vector<cplx> a(Nprime - N - 1);
    for (auto& v : a) v = (rng.next_u64() >> 63) ? cplx(1, 0) : cplx(-1, 0);
    auto r = gallagher_check(a, N, Nprime, Delta);
    r.params.emplace_back("seed", static_cast<double>(seed));
    return r;
}

}  // namespace qpl
