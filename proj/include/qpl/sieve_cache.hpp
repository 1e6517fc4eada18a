// sieve_cache.hpp
// Binary cache for the smallest-prime-factor table, with an optional
// trailing section holding quartic-residue bitmaps.
//
// Layout (little-endian):
//   "QPL1" | u64 limit | u32 spf[n] for n = 2..limit
//   optional: "QRT4" | u64 bound | for each odd prime p <= bound in
//             increasing order, ceil(p / 8) bytes of fourth-power bitmap
//
// A missing, truncated or mismatched file is treated as a miss.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "qpl/arith.hpp"
#include "qpl/residues.hpp"

namespace qpl {

std::filesystem::path sieve_cache_path(const std::filesystem::path& dir, u64 limit);

void save_sieve(const std::filesystem::path& file, const SieveTables& t, const QuarticTableSet* quartic = nullptr);

struct CachedSieve {
    SieveTables sieve;
    std::optional<QuarticTableSet> quartic;
};

// nullopt unless the file exists and its header names exactly `limit`.
std::optional<CachedSieve> load_sieve(const std::filesystem::path& file, u64 limit);

struct SieveLoad {
    SieveTables sieve;
    bool cache_hit;
};

// Loads the cached table for `limit` from `dir`, or builds and stores it.
// An empty dir disables caching.
SieveLoad load_or_build_sieve(const std::filesystem::path& dir, u64 limit, u64 budget = kDefaultSieveBudget);

}  // namespace qpl
