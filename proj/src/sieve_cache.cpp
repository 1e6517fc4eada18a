// src/sieve_cache.cpp

#include "qpl/sieve_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace qpl {

namespace {

constexpr std::array<char, 4> kMagic = {'Q', 'P', 'L', '1'};
constexpr std::array<char, 4> kQuarticTag = {'Q', 'R', 'T', '4'};

void put_u64(std::ostream& os, u64 v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

bool get_u64(std::istream& is, u64& v) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
    v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
    return true;
}

}  // namespace

std::filesystem::path sieve_cache_path(const std::filesystem::path& dir, u64 limit) {
    return dir / ("spf_" + std::to_string(limit) + ".qpl");
}

void save_sieve(const std::filesystem::path& file, const SieveTables& t, const QuarticTableSet* quartic) {
    const auto tmp = std::filesystem::path(file.string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ResourceError("cannot write sieve cache " + tmp.string());
        os.write(kMagic.data(), 4);
        put_u64(os, t.limit());
        std::vector<unsigned char> buf;
        buf.reserve(t.raw().size() * 4);
        for (std::uint32_t v : t.raw())
            for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
        os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (quartic) {
            os.write(kQuarticTag.data(), 4);
            put_u64(os, quartic->bound());
            for (const auto& qt : quartic->tables())
                os.write(reinterpret_cast<const char*>(qt.bits().data()), static_cast<std::streamsize>(qt.bits().size()));
        }
        if (!os) throw ResourceError("short write on sieve cache " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

std::optional<CachedSieve> load_sieve(const std::filesystem::path& file, u64 limit) {
    std::ifstream is(file, std::ios::binary);
    if (!is) return std::nullopt;
    std::array<char, 4> magic{};
    u64 stored = 0;
    if (!is.read(magic.data(), 4) || magic != kMagic || !get_u64(is, stored) || stored != limit || limit < 2)
        return std::nullopt;

    std::vector<unsigned char> buf((limit - 1) * 4);
    if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) return std::nullopt;
    std::vector<std::uint32_t> spf(limit - 1);
    for (std::size_t i = 0; i < spf.size(); ++i) {
        spf[i] = static_cast<std::uint32_t>(buf[4 * i]) | static_cast<std::uint32_t>(buf[4 * i + 1]) << 8 |
                 static_cast<std::uint32_t>(buf[4 * i + 2]) << 16 | static_cast<std::uint32_t>(buf[4 * i + 3]) << 24;
        // Cheap structural validation: spf[n] is in [2, n] and divides n.
        const u64 n = i + 2;
        if (spf[i] < 2 || spf[i] > n || n % spf[i] != 0) return std::nullopt;
    }
    CachedSieve out{SieveTables(limit, std::move(spf)), std::nullopt};

    std::array<char, 4> tag{};
    u64 bound = 0;
    if (is.read(tag.data(), 4) && tag == kQuarticTag && get_u64(is, bound) && bound <= limit) {
        std::vector<QuarticTable> tables;
        bool ok = true;
        for (u64 p = 3; p <= bound && ok; p += 2) {
            if (!out.sieve.is_prime(p)) continue;
            std::vector<std::uint8_t> bits((p + 7) / 8);
            ok = static_cast<bool>(is.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size())));
            if (ok) tables.emplace_back(p, std::move(bits));
        }
        if (ok) out.quartic.emplace(bound, std::move(tables));
    }
    return out;
}

SieveLoad load_or_build_sieve(const std::filesystem::path& dir, u64 limit, u64 budget) {
    if (limit - 1 > budget)
        throw ResourceError("sieve limit " + std::to_string(limit) + " exceeds the memory budget of " +
                            std::to_string(budget) + " entries");
    if (!dir.empty()) {
        const auto path = sieve_cache_path(dir, limit);
        if (auto cached = load_sieve(path, limit)) return {std::move(cached->sieve), true};
    }
    SieveTables t = build_sieve(limit, budget);
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        save_sieve(sieve_cache_path(dir, limit), t);
    }
    return {std::move(t), false};
}

}  // namespace qpl
