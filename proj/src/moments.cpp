// src/moments.cpp

#include "qpl/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace qpl {

void MomentConfig::validate() const {
    if (x < 8) throw ConfigError("moment config: x must be >= 8");
    if (x > 50000) throw ConfigError("moment config: x too large for 64-bit n^4 + k");
    const u64 x4 = x * x * x * x;
    if (resolved_y() > x4) throw ConfigError("moment config: y must satisfy y <= x^4");
    if (!(eps_prime > 0.0 && eps_prime < 0.5)) throw ConfigError("moment config: eps' must lie in (0, 1/2)");
    if (P < 3) throw ConfigError("moment config: cutoff P must be >= 3");
}

double MomentConfig::kappa_threshold() const { return std::pow(static_cast<double>(resolved_y()), 0.5 - eps_prime); }

double chebyshev_quartic(u64 x, i64 k, const SieveTables& t) {
    if (k < 1) throw ArgumentError("chebyshev_quartic: k must be positive");
    CompensatedSum acc;
    for (u64 n = 1; n <= x; ++n) {
        const u128 v = static_cast<u128>(n) * n * n * n + static_cast<u64>(k);
        if (v >> 64) throw RangeError("chebyshev_quartic: n^4 + k exceeds 64 bits");
        const u64 m = static_cast<u64>(v);
        acc.add(m <= t.limit() ? von_mangoldt(m, t) : von_mangoldt_large(m));
    }
    return acc.value();
}

MomentResult second_moment(const MomentConfig& cfg, const SieveTables& t, const SingularSeriesSweep& sweep,
                           unsigned threads) {
    cfg.validate();
    const u64 y = cfg.resolved_y();
    if (sweep.cutoff() != cfg.P) throw ArgumentError("second_moment: singular series sweep built for a different cutoff");
    if (y > t.limit()) throw ResourceError("second_moment: sieve too small to factor k <= y");

    const double threshold = cfg.kappa_threshold();
    const double xd = static_cast<double>(cfg.x);
    MomentResult out{cfg, 0.0, 0, std::vector<MomentRow>(y)};
    parallel_for(y, threads, [&](std::size_t i) {
        const i64 k = static_cast<i64>(i + 1);
        MomentRow& r = out.rows[i];
        r.k = k;
        r.kappa = squarefull_part(factorize(static_cast<u64>(k), t));
        r.admissible = static_cast<double>(r.kappa) <= threshold;
        r.count = chebyshev_quartic(cfg.x, k, t);
        r.expected = sweep.value(k) * xd;
        r.error = r.count - r.expected;
        r.reducible = is_reducible_shift(k);
    });

    CompensatedSum acc;
    for (const auto& r : out.rows) {
        if (!r.admissible) continue;
        acc.add(r.error * r.error);
        ++out.admissible;
    }
    out.M2 = out.admissible == 0 ? 0.0 : acc.value() / (static_cast<double>(y) * xd * xd);
    return out;
}

u64 exceptional_count(const std::vector<MomentRow>& rows, u64 x, double B, bool include_reducible) {
    const double threshold = static_cast<double>(x) / std::pow(std::log(static_cast<double>(x)), B);
    u64 c = 0;
    for (const auto& r : rows) {
        if (!r.admissible || (r.reducible && !include_reducible)) continue;
        if (std::abs(r.error) > threshold) ++c;
    }
    return c;
}

double exceedance_fraction(const std::vector<MomentRow>& rows, double threshold) {
    u64 n = 0, hit = 0;
    for (const auto& r : rows) {
        if (!r.admissible || r.reducible) continue;
        ++n;
        if (std::abs(r.error) > threshold) ++hit;
    }
    return n == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(n);
}

std::vector<std::pair<u64, double>> decay_trend(const std::vector<u64>& xs, const MomentConfig& cfg, unsigned threads) {
    if (xs.empty()) return {};
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] < xs[i - 1]) throw ConfigError("decay_trend: xs must be non-decreasing");
    MomentConfig top = cfg;
    top.x = xs.back();
    top.y = 0;
    top.validate();
    const SieveTables sieve = build_sieve(std::max(top.lambda_limit(), cfg.P));
    const QuarticTableSet tables(cfg.P, sieve);
    const SingularSeriesSweep sweep(cfg.P, tables);
    std::vector<std::pair<u64, double>> out;
    for (u64 x : xs) {
        MomentConfig c = cfg;
        c.x = x;
        c.y = 0;
        out.emplace_back(x, second_moment(c, sieve, sweep, threads).M2);
    }
    return out;
}

Percentiles percentiles(std::vector<double> v) {
    Percentiles p;
    if (v.empty()) return p;
    std::sort(v.begin(), v.end());
    auto rank = [&](double f) {
        const auto idx = static_cast<std::size_t>(std::ceil(f * static_cast<double>(v.size())));
        return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
    };
    p.p50 = rank(0.50);
    p.p90 = rank(0.90);
    p.p99 = rank(0.99);
    p.max = v.back();
    return p;
}

std::vector<double> truncation_deltas(const std::vector<MomentRow>& rows, const SingularSeriesSweep& narrow,
                                      const SingularSeriesSweep& wide, unsigned threads) {
    if (wide.cutoff() < narrow.cutoff()) throw ArgumentError("truncation_deltas: wide cutoff below narrow cutoff");
    std::vector<double> out(rows.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const i64 k = rows[i].k;
        out[i] = std::abs(wide.value(k) - narrow.value(k));
    });
    return out;
}

u64 row_checksum(const std::vector<MomentRow>& rows) {
    u64 h = 0xcbf29ce484222325ULL;
    auto mix = [&](u64 v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& r : rows) {
        mix(static_cast<u64>(r.k));
        mix(r.kappa);
        mix((r.admissible ? 1u : 0u) | (r.reducible ? 2u : 0u));
        mix(std::bit_cast<u64>(r.count));
        mix(std::bit_cast<u64>(r.expected));
        mix(std::bit_cast<u64>(r.error));
    }
    return h;
}

}  // namespace qpl
