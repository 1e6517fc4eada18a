#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "qpl/arith.hpp"
#include "qpl/sieve_cache.hpp"

using namespace qpl;

TEST_CASE("sieve small tables") {
    const auto t = build_sieve(10);
    const std::vector<std::uint32_t> expect{2, 3, 2, 5, 2, 7, 2, 3, 2};
    CHECK(std::vector<std::uint32_t>(t.raw().begin(), t.raw().end()) == expect);
    const auto t2 = build_sieve(2);
    REQUIRE(t2.raw().size() == 1);
    CHECK(t2.spf(2) == 2);
}

TEST_CASE("sieve against trial division") {
    const auto t = build_sieve(1000000);
    CHECK(t.spf(999983) == 999983);
    CHECK(oracle::is_prime(999983));
    for (u64 n = 2; n <= 20000; ++n) CHECK(t.spf(n) == oracle::trial_factor(n).front().first);
    for (u64 n = 999000; n <= 1000000; ++n) CHECK(t.spf(n) == oracle::trial_factor(n).front().first);
}

TEST_CASE("sieve budget") {
    CHECK_THROWS_AS(build_sieve(1000, 100), ResourceError);
    try {
        build_sieve(1000, 100);
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("100") != std::string::npos);
    }
}

TEST_CASE("von Mangoldt") {
    const auto t = build_sieve(100000);
    CHECK(von_mangoldt(8, t) == doctest::Approx(std::log(2.0)));
    CHECK(von_mangoldt(6, t) == 0.0);
    CHECK(von_mangoldt(1, t) == 0.0);
    CHECK_THROWS_AS(von_mangoldt(100001, t), RangeError);
    CHECK(von_mangoldt_large(1024) == doctest::Approx(std::log(2.0)));
    CHECK(von_mangoldt_large(15) == 0.0);
    const u64 n = 1000003;
    CHECK(von_mangoldt_large(n) == (oracle::is_prime(n) ? std::log(static_cast<double>(n)) : 0.0));
    for (u64 m = 1; m <= 100000; ++m) REQUIRE(von_mangoldt(m, t) == von_mangoldt_large(m));
    for (u64 m = 1; m <= 3000; ++m) CHECK(von_mangoldt(m, t) == doctest::Approx(oracle::lambda(m)).epsilon(1e-15));
}

TEST_CASE("sum of Lambda over divisors is log n") {
    const auto t = build_sieve(10000);
    for (u64 n = 1; n <= 10000; ++n) {
        double s = 0;
        for (u64 d = 1; d * d <= n; ++d) {
            if (n % d) continue;
            s += von_mangoldt(d, t);
            if (d * d != n) s += von_mangoldt(n / d, t);
        }
        REQUIRE(std::abs(s - std::log(static_cast<double>(n))) < 1e-9);
    }
}

TEST_CASE("factorization") {
    const auto t = build_sieve(1000);
    auto as_pairs = [](const Factorization& f) {
        std::vector<std::pair<u64, unsigned>> v;
        for (auto pp : f.factors) v.emplace_back(pp.prime, pp.exponent);
        return v;
    };
    CHECK(as_pairs(factorize(12)) == std::vector<std::pair<u64, unsigned>>{{2, 2}, {3, 1}});
    CHECK(factorize(1).factors.empty());
    CHECK(as_pairs(factorize(784, t)) == std::vector<std::pair<u64, unsigned>>{{2, 4}, {7, 2}});
    for (u64 n = 1; n <= 1000; ++n) {
        CHECK(as_pairs(factorize(n, t)) == oracle::trial_factor(n));
        CHECK(as_pairs(factorize(n)) == oracle::trial_factor(n));
    }
}

TEST_CASE("multiplicative functions") {
    CHECK(mobius(10) == 1);
    CHECK(mobius(12) == 0);
    CHECK(mobius(30) == -1);
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(9) == 6);
    CHECK(omega(12) == 2);
    for (u64 n = 1; n <= 500; ++n) {
        CHECK(mobius(n) == oracle::mobius(n));
        CHECK(euler_phi(n) == oracle::phi(n));
    }
    for (u64 m = 1; m <= 300; ++m)
        for (u64 n = 1; n <= 300; ++n) {
            if (std::gcd(m, n) != 1) continue;
            REQUIRE(mobius(m * n) == mobius(m) * mobius(n));
            REQUIRE(euler_phi(m * n) == euler_phi(m) * euler_phi(n));
        }
}

TEST_CASE("square-full part") {
    CHECK(squarefull_part(u64{1}) == 1);
    CHECK(squarefull_part(u64{12}) == 4);
    CHECK(squarefull_part(u64{18}) == 9);
    CHECK(squarefull_part(u64{16}) == 16);
    CHECK(squarefull_part(u64{8}) == 4);
    for (u64 n = 1; n <= 5000; ++n) {
        const u64 k = squarefull_part(n);
        CHECK(k == oracle::kappa(n));
        const u64 l = static_cast<u64>(std::llround(std::sqrt(static_cast<double>(k))));
        CHECK(l * l == k);
        CHECK(is_squarefree(factorize(n / k)));
    }
}

TEST_CASE("primality and perfect powers") {
    for (u64 n = 0; n <= 20000; ++n) REQUIRE(is_prime_u64(n) == oracle::is_prime(n));
    CHECK(is_prime_u64(18446744073709551557ULL));  // largest 64-bit prime
    CHECK_FALSE(is_prime_u64(3215031751ULL));      // strong pseudoprime to 2, 3, 5, 7
    CHECK_FALSE(is_prime_u64(4294967297ULL));      // 641 * 6700417
    const auto pp = perfect_power(u64{1} << 40);
    CHECK(pp.base == 2);
    CHECK(pp.exponent == 40);
    const auto p3 = perfect_power(1000003ULL * 1000003ULL);
    CHECK(p3.base == 1000003);
    CHECK(p3.exponent == 2);
    CHECK(perfect_power(36).exponent == 2);
    CHECK(perfect_power(37).exponent == 1);
}

TEST_CASE("sieve cache round trip and corruption") {
    const auto dir = std::filesystem::temp_directory_path() / "qpl_test_cache";
    std::filesystem::remove_all(dir);
    auto first = load_or_build_sieve(dir, 5000);
    CHECK_FALSE(first.cache_hit);
    auto second = load_or_build_sieve(dir, 5000);
    CHECK(second.cache_hit);
    CHECK(std::equal(first.sieve.raw().begin(), first.sieve.raw().end(), second.sieve.raw().begin()));

    const auto path = sieve_cache_path(dir, 5000);
    {
        std::ifstream in(path, std::ios::binary);
        char magic[4];
        in.read(magic, 4);
        CHECK(std::string(magic, 4) == "QPL1");
        unsigned char lim[8];
        in.read(reinterpret_cast<char*>(lim), 8);
        u64 v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | lim[i];
        CHECK(v == 5000);
    }
    {
        std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
        f.write("XXXX", 4);
    }
    auto third = load_or_build_sieve(dir, 5000);
    CHECK_FALSE(third.cache_hit);
    CHECK(load_or_build_sieve(dir, 5000).cache_hit);

    std::filesystem::resize_file(path, 100);
    CHECK_FALSE(load_sieve(path, 5000).has_value());
    std::filesystem::remove_all(dir);
}
