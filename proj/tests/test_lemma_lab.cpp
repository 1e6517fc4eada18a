#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qpl/lemma_lab.hpp"
#include "qpl/residues.hpp"

using namespace qpl;

namespace {

double weyl_rhs_oracle(double alpha, long N) {
    double s = 0;
    for (long a = -N + 1; a < N; ++a)
        for (long b = -N + 1; b < N; ++b)
            for (long c = -N + 1; c < N; ++c) {
                const long double v = 24.0L * alpha * a * b * c;
                const double dist = static_cast<double>(std::fabs(v - std::nearbyint(v)));
                s += dist * N <= 1.0 ? static_cast<double>(N) : 1.0 / dist;
            }
    return 2.0 * N * std::pow(s / std::pow(static_cast<double>(N), 4), 0.125);
}

// max over windows 0 <= M < M' <= 2q of |sum_{M < n <= M'} chi(n)|
double pv_oracle(const DirichletCharacter& chi, u64 q) {
    double best = 0;
    for (u64 M = 0; M < 2 * q; ++M) {
        cplx s = 0;
        for (u64 n = M + 1; n <= 2 * q; ++n) {
            s += chi(static_cast<i64>(n));
            best = std::max(best, std::abs(s));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("Weyl") {
    const auto z = weyl_check(0.0, 10);
    CHECK(z.lhs == doctest::Approx(10.0));
    CHECK(z.rhs == doctest::Approx(20.0 * std::pow(19.0 / 10.0, 0.375)));
    CHECK(z.verdict == Verdict::holds);
    const auto h = weyl_check(0.5, 50);
    CHECK(h.verdict == Verdict::holds);
    for (double alpha : {0.0, 0.5, 0.1234567, 0.7071}) {
        for (long N : {1L, 5L, 12L}) {
            const auto r = weyl_check(alpha, static_cast<u64>(N), {}, 2);
            CHECK(r.rhs == doctest::Approx(weyl_rhs_oracle(alpha, N)).epsilon(1e-9));
            cplx s = 0;
            for (long n = 1; n <= N; ++n) s += oracle::e(alpha * std::pow(static_cast<double>(n), 4));
            CHECK(r.lhs == doctest::Approx(std::abs(s)).epsilon(1e-9));
        }
    }
    const double lower[2] = {0.3, 0.25};
    const auto lw = weyl_check(0.37, 9, lower, 1);
    cplx s = 0;
    for (long n = 1; n <= 9; ++n) s += oracle::e(0.37 * std::pow(n, 4) + 0.3 + 0.25 * n);
    CHECK(lw.lhs == doctest::Approx(std::abs(s)).epsilon(1e-9));
    CHECK_THROWS_AS(weyl_check(0.1, 0), ArgumentError);
}

TEST_CASE("Polya-Vinogradov") {
    const auto r3 = polya_vinogradov_check(3);
    REQUIRE(r3.size() == 1);
    CHECK(r3[0].lhs == doctest::Approx(1.0));
    CHECK(r3[0].rhs == doctest::Approx(std::sqrt(3.0) * std::log(3.0)));
    CHECK(r3[0].verdict == Verdict::holds);
    for (const auto& r : polya_vinogradov_check(5)) {
        bool order4 = false;
        for (const auto& [k, v] : r.params)
            if (k == "order" && v == 4) order4 = true;
        if (order4) CHECK(r.lhs == doctest::Approx(std::sqrt(2.0)));
    }
    const auto r4 = polya_vinogradov_check(4);
    REQUIRE(r4.size() == 1);
    CHECK(r4[0].lhs == doctest::Approx(1.0));
    CHECK(r4[0].verdict == Verdict::holds);
    for (u64 q = 3; q <= 30; ++q) {
        const auto chars = characters_mod(q);
        const auto reps = polya_vinogradov_check(q);
        std::size_t j = 0;
        for (const auto& chi : chars) {
            if (chi.is_principal()) continue;
            REQUIRE(reps[j].lhs == doctest::Approx(pv_oracle(chi, q)).epsilon(1e-9));
            ++j;
        }
    }
}

TEST_CASE("duality") {
    const auto id = duality_check(Eigen::MatrixXcd::Identity(4, 4));
    CHECK(id.lhs == doctest::Approx(1.0));
    CHECK(id.rhs == doctest::Approx(1.0));
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 2;
    d(1, 1) = 3;
    CHECK(duality_check(d).lhs == doctest::Approx(9.0));
    UniformStream rng(5);
    const auto big = duality_check(random_complex_matrix(50, 50, rng));
    CHECK(big.verdict == Verdict::holds);
    CHECK_THROWS_AS(duality_check(Eigen::MatrixXcd::Zero(2, 3)), ArgumentError);
    for (const auto& r : duality_suite(20, 1, 10)) CHECK(r.verdict == Verdict::holds);
}

TEST_CASE("Bessel") {
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(5, 5);
    std::vector<Eigen::VectorXcd> fam{I.col(0), I.col(2)};
    const auto same = bessel_check(fam, I.col(0));
    CHECK(same.lhs == doctest::Approx(1.0));
    CHECK(same.rhs == doctest::Approx(1.0));
    CHECK(same.verdict == Verdict::holds);
    const auto orth = bessel_check(fam, I.col(1));
    CHECK(orth.lhs == 0.0);
    CHECK(orth.verdict == Verdict::holds);
    std::vector<Eigen::VectorXcd> bad{I.col(0), I.col(0)};
    CHECK_THROWS_AS(bessel_check(bad, I.col(1)), ArgumentError);
    for (const auto& r : bessel_suite(20, 3, 30)) CHECK(r.verdict == Verdict::holds);
}

TEST_CASE("Gallagher") {
    std::vector<cplx> zero(49, cplx(0, 0));
    const auto z = gallagher_check(zero, 100, 150, 10.0);
    CHECK(z.lhs == doctest::Approx(0.0));
    CHECK(z.rhs == 0.0);

    std::vector<cplx> spike(49, cplx(0, 0));
    spike[1] = 1;
    const auto s = gallagher_check(spike, 100, 150, 10.0);
    CHECK(s.lhs == doctest::Approx(0.2).epsilon(1e-12));
    // n = 102 lies in N < n < t + Delta/2 for t in (97, 100]
    CHECK(s.rhs == doctest::Approx(3.0 / 100.0).epsilon(1e-12));
    // beyond N + Delta/2 no window reaches the spike
    std::vector<cplx> far(49, cplx(0, 0));
    far[20] = 1;
    CHECK(gallagher_check(far, 100, 150, 10.0).rhs == 0.0);

    UniformStream rng(9);
    std::vector<cplx> a(49);
    for (auto& v : a) v = cplx(2 * rng.next() - 1, 2 * rng.next() - 1);
    const auto r = gallagher_check(a, 100, 150, 10.0);
    CHECK(r.lhs == doctest::Approx(gallagher_lhs_closed_form(a, 10.0)).epsilon(1e-9));
    // rhs by a fine midpoint rule in t
    const int steps = 200000;
    double acc = 0;
    for (int i = 0; i < steps; ++i) {
        const double t = 95.0 + 5.0 * (i + 0.5) / steps;
        cplx w = 0;
        for (int j = 0; j < 49; ++j) {
            const double n = 101 + j;
            if (n > std::max(t, 100.0) && n < std::min(t + 5.0, 150.0)) w += a[j];
        }
        acc += std::norm(w) * 5.0 / steps;
    }
    CHECK(r.rhs == doctest::Approx(acc / 100.0).epsilon(1e-3));

    CHECK_THROWS_AS(gallagher_check(a, 100, 150, 2.0), ArgumentError);
    CHECK_THROWS_AS(gallagher_check(a, 100, 150, 50.0), ArgumentError);
    CHECK_THROWS_AS(gallagher_check(a, 100, 200, 10.0), ArgumentError);
    CHECK_THROWS_AS(gallagher_check(zero, 100, 151, 10.0), ArgumentError);

    const auto g1 = gallagher_anchor();
    const auto g2 = gallagher_anchor();
    CHECK(g1.ratio == g2.ratio);
    CHECK(std::isfinite(g1.ratio));
}

TEST_CASE("quartic large sieve") {
    std::vector<cplx> zero(16, cplx(0, 0));
    CHECK(quartic_large_sieve_lhs(8, 16, zero) == 0.0);
    std::vector<cplx> ones(16, cplx(1, 0));
    CHECK(quartic_large_sieve_lhs(2, 16, ones) == 0.0);  // q in {2, 3}: no order-4 characters

    // Q = 8: q in [8, 16) carries primitive order-4 characters only at 13 and 15.
    const u64 M = 20;
    UniformStream rng(2);
    std::vector<cplx> a(M);
    for (auto& v : a) v = oracle::e(rng.next());
    auto log13 = [](u64 n) {
        u64 v = 1;
        for (u64 j = 0; j < 12; ++j) {
            if (v == n % 13) return j;
            v = v * 2 % 13;
        }
        return u64{99};
    };
    auto log5 = [](u64 n) {
        u64 v = 1;
        for (u64 j = 0; j < 4; ++j) {
            if (v == n % 5) return j;
            v = v * 2 % 5;
        }
        return u64{99};
    };
    double ref = 0;
    for (u64 t : {1ULL, 3ULL}) {
        cplx s13 = 0, s15 = 0;
        for (u64 i = 0; i < M; ++i) {
            const u64 m = M + i;
            if (oracle::mobius(m) == 0) continue;
            if (m % 13) s13 += a[i] * oracle::e_ratio(static_cast<i64>(t * log13(m)), 4);
            if (std::gcd<u64>(m, 15) == 1) {
                const double chi3 = m % 3 == 1 ? 1.0 : -1.0;
                s15 += a[i] * chi3 * oracle::e_ratio(static_cast<i64>(t * log5(m)), 4);
            }
        }
        ref += std::norm(s13) + std::norm(s15);
    }
    CHECK(quartic_large_sieve_lhs(8, M, a) == doctest::Approx(ref).epsilon(1e-12));

    const auto r1 = quartic_large_sieve_ratio(16, 32, 10, 1, 1);
    const auto r3 = quartic_large_sieve_ratio(16, 32, 10, 1, 3);
    CHECK(r1.ratio == r3.ratio);
    CHECK(r1.lhs == r3.lhs);
    CHECK(std::isfinite(r1.ratio));
    CHECK(r1.verdict == Verdict::measured);
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("uniform stream") {
    UniformStream a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        const double v = a.next();
        CHECK(v == b.next());
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    std::mt19937_64 ref(42);
    UniformStream c(42);
    CHECK(c.next() == static_cast<double>(ref() >> 11) * 0x1.0p-53);
}
