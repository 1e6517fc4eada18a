// moments.hpp
// Per-k errors E(k) = sum_{n<=x} Lambda(n^4 + k) - S_P(k) x, their
// normalised second moment over k <= y with kappa(k) <= y^(1/2 - eps'),
// exceptional counts and the decay of the moment in x.

#pragma once

#include <utility>
#include <vector>

#include "qpl/arith.hpp"
#include "qpl/singular.hpp"

namespace qpl {

struct MomentConfig {
    u64 x = 16;
    u64 y = 0;  // 0 means x^4
    double eps_prime = 0.1;
    u64 P = 10000;
    double B = 1.0;

    u64 resolved_y() const { return y == 0 ? x * x * x * x : y; }
    // Throws ConfigError on x < 8, y > x^4, eps' outside (0, 1/2) or P < 3.
    void validate() const;
    // Largest integer fed to Lambda: x^4 + y.
    u64 lambda_limit() const { return x * x * x * x + resolved_y(); }
    double kappa_threshold() const;
};

struct MomentRow {
    i64 k;
    u64 kappa;
    bool admissible;
    double count;     // sum_{n<=x} Lambda(n^4 + k)
    double expected;  // S_P(k) x
    double error;     // count - expected
    bool reducible;   // k = 4 m^4
};

struct MomentResult {
    MomentConfig config;
    double M2;  // (1/(y x^2)) sum over admissible k of E(k)^2
    u64 admissible;
    std::vector<MomentRow> rows;
};

// Sieve lookup when n^4 + k fits the table, the perfect-power/primality
// path otherwise.
double chebyshev_quartic(u64 x, i64 k, const SieveTables& t);

MomentResult second_moment(const MomentConfig& cfg, const SieveTables& t, const SingularSeriesSweep& sweep,
                           unsigned threads = 0);

// #{admissible k : |E(k)| > x / (log x)^B}, reducible k skipped unless asked.
u64 exceptional_count(const std::vector<MomentRow>& rows, u64 x, double B, bool include_reducible = false);

// Fraction of admissible non-reducible k with |E(k)| > threshold.
double exceedance_fraction(const std::vector<MomentRow>& rows, double threshold);

// Runs second_moment with y = x^4 for each x, sharing one sieve sized for the
// largest x. cfg.x and cfg.y are ignored.
std::vector<std::pair<u64, double>> decay_trend(const std::vector<u64>& xs, const MomentConfig& cfg,
                                                unsigned threads = 0);

struct Percentiles {
    double p50 = 0, p90 = 0, p99 = 0, max = 0;
};
// Nearest-rank percentiles; zeros for an empty sample.
Percentiles percentiles(std::vector<double> v);

// |S_2P(k) - S_P(k)| per row, with `wide` built for cutoff 2P and `narrow`
// for P.
std::vector<double> truncation_deltas(const std::vector<MomentRow>& rows, const SingularSeriesSweep& narrow,
                                      const SingularSeriesSweep& wide, unsigned threads = 0);

// FNV-1a over the row stream (k, kappa, flags and the bit patterns of the
// three reals), in row order.
u64 row_checksum(const std::vector<MomentRow>& rows);

}  // namespace qpl
