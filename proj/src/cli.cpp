// src/cli.cpp

#include "qpl/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "qpl/arith.hpp"
#include "qpl/expsums.hpp"
#include "qpl/lemma_lab.hpp"
#include "qpl/moments.hpp"
#include "qpl/residues.hpp"
#include "qpl/sieve_cache.hpp"
#include "qpl/singular.hpp"

namespace qpl::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct KRange {
    i64 lo = 1;
    i64 hi = 1;
};

KRange parse_range(const std::string& s, const char* what) {
    KRange r;
    const auto colon = s.find(':');
    try {
        std::size_t used = 0;
        if (colon == std::string::npos) {
            r.lo = r.hi = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
        } else {
            const std::string a = s.substr(0, colon), b = s.substr(colon + 1);
            r.lo = std::stoll(a, &used);
            if (used != a.size()) throw std::invalid_argument(s);
            r.hi = std::stoll(b, &used);
            if (used != b.size()) throw std::invalid_argument(s);
        }
    } catch (const std::logic_error&) {
        throw ConfigError(std::string(what) + ": expected LO:HI, got '" + s + "'");
    }
    if (r.lo > r.hi) throw ConfigError(std::string(what) + ": empty range " + s);
    return r;
}

struct Common {
    unsigned threads = 0;
    std::string cache_dir = ".qpl-cache";
    std::string out;
    u64 seed = 1;
};

// Data goes to --out (written whole, via a temporary and a rename) or to the
// output stream.
void emit(const Common& c, const std::string& data, std::ostream& out) {
    if (c.out.empty()) {
        out << data;
        return;
    }
    const fs::path target(c.out);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ResourceError("cannot open " + tmp.string() + " for writing");
        f << data;
        if (!f) throw ResourceError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string csv_header(const ordered_json& config) { return "# config " + config.dump() + "\n"; }

SieveTables obtain_sieve(const Common& c, u64 limit, std::ostream& err) {
    auto load = load_or_build_sieve(c.cache_dir, limit);
    if (!c.cache_dir.empty()) err << (load.cache_hit ? "cache hit: " : "cache miss, built: ")
                                  << sieve_cache_path(c.cache_dir, limit).string() << "\n";
    return std::move(load.sieve);
}

// ---- subcommands -------------------------------------------------------

struct SieveBuildOpts {
    u64 limit = 0;
};

std::string cmd_sieve_build(const Common& c, const SieveBuildOpts& o, std::ostream& err) {
    if (o.limit < 2) throw ConfigError("--limit must be >= 2");
    ordered_json cfg{{"subcommand", "sieve-build"}, {"limit", o.limit}, {"cache_dir", c.cache_dir}};
    const SieveTables t = obtain_sieve(c, o.limit, err);
    std::string s = csv_header(cfg) + "limit,prime_count\n";
    s += std::to_string(o.limit) + "," + std::to_string(primes_in(t, 2, o.limit).size()) + "\n";
    return s;
}

struct NpOpts {
    u64 p_max = 100;
    std::string k_range = "1:20";
};

std::string cmd_np_table(const NpOpts& o) {
    const KRange kr = parse_range(o.k_range, "--k-range");
    if (o.p_max < 3) throw ConfigError("--p-max must be >= 3");
    if (o.p_max > 1000000) throw ConfigError("--p-max must be <= 1000000");
    ordered_json cfg{{"subcommand", "np-table"}, {"p_max", o.p_max}, {"k_range", {kr.lo, kr.hi}}};
    std::string s = csv_header(cfg) + "p,k,np_direct,np_characters,agree\n";
    const SieveTables t = build_sieve(o.p_max);
    for (u64 p : primes_in(t, 3, o.p_max)) {
        const QuarticTable table = build_quartic_table(p);
        for (i64 k = kr.lo; k <= kr.hi; ++k) {
            const unsigned direct = np_direct(p, k, table);
            s += std::to_string(p) + "," + std::to_string(k) + "," + std::to_string(direct) + ",";
            if (mod_signed(k, p) == 0) {
                s += ",\n";
                continue;
            }
            const unsigned via = np_via_characters(p, k);
            s += std::to_string(via) + "," + (via == direct ? "true" : "false") + "\n";
        }
    }
    return s;
}

struct SingularOpts {
    std::string k_range = "1:20";
    u64 cutoff = 10000;
    bool trace = false;
};

std::string cmd_singular_series(const Common& c, const SingularOpts& o, std::ostream& err) {
    const KRange kr = parse_range(o.k_range, "--k-range");
    if (o.cutoff < 3) throw ConfigError("--cutoff must be >= 3");
    if (kr.lo < 1) throw ConfigError("--k-range must start at k >= 1");
    ordered_json cfg{{"subcommand", "singular-series"},
                     {"k_range", {kr.lo, kr.hi}},
                     {"cutoff", o.cutoff},
                     {"trace", o.trace}};
    const SieveTables t = obtain_sieve(c, 2 * o.cutoff, err);
    const QuarticTableSet tables(2 * o.cutoff, t);
    std::string s = csv_header(cfg) + "k,kappa,S_trunc,trace_P10,trace_P4,trace_P2,delta,reducible_flag\n";
    for (i64 k = kr.lo; k <= kr.hi; ++k) {
        const SingularValue v = singular_series(k, o.cutoff, tables);
        const SingularValue w = singular_series(k, 2 * o.cutoff, tables);
        s += std::to_string(k) + "," + std::to_string(squarefull_part(static_cast<u64>(k))) + "," + g17(v.value) + ",";
        if (o.trace)
            s += g17(v.trace[0]) + "," + g17(v.trace[1]) + "," + g17(v.trace[2]) + ",";
        else
            s += ",,,";
        s += g17(std::abs(w.value - v.value)) + "," + (is_reducible_shift(k) ? "true" : "false") + "\n";
    }
    return s;
}

struct SigmaOpts {
    u64 q_max = 50;
    std::string k_range = "1:10";
};

std::string cmd_sigma_table(const SigmaOpts& o, std::ostream& err) {
    const KRange kr = parse_range(o.k_range, "--k-range");
    if (o.q_max < 3) throw ConfigError("--q-max must be >= 3");
    if (o.q_max > 5000) throw ConfigError("--q-max must be <= 5000");
    ordered_json cfg{{"subcommand", "sigma-table"}, {"q_max", o.q_max}, {"k_range", {kr.lo, kr.hi}}};
    std::string s = csv_header(cfg) + "q,k,sigma,p_np_product,match\n";
    u64 nonzero_3mod4 = 0, rows_3mod4 = 0;
    for (u64 q = 3; q <= o.q_max; q += 2) {
        if (mobius(q) == 0) continue;
        const SigmaEvaluator ev(q);
        for (i64 k = kr.lo; k <= kr.hi; ++k) {
            const SigmaValue v = ev(k);
            const i64 prod = sigma_q_multiplicative(q, k);
            s += std::to_string(q) + "," + std::to_string(k) + "," + std::to_string(v.value) + "," +
                 std::to_string(prod) + "," + (v.value == prod ? "true" : "false") + "\n";
            if (q % 4 == 3 && is_prime_u64(q)) {
                ++rows_3mod4;
                if (v.value != sigma_prime_case_formula(q, k)) ++nonzero_3mod4;
            }
        }
    }
    if (rows_3mod4 > 0)
        err << "note: sigma(p) != 0 in " << nonzero_3mod4 << " of " << rows_3mod4
            << " rows with prime p = 3 mod 4; the vanishing claim for such p does not hold\n";
    return s;
}

struct CountOpts {
    u64 x = 0;
    i64 k = 0;
};

std::string cmd_count(const Common& c, const CountOpts& o, std::ostream& err) {
    if (o.x < 1) throw ConfigError("--x must be >= 1");
    if (o.x > 50000) throw ConfigError("--x must be <= 50000");
    if (o.k < 1) throw ConfigError("--k must be >= 1");
    const u64 x4 = o.x * o.x * o.x * o.x;
    const u64 limit = std::min<u64>(x4 + static_cast<u64>(o.k), kDefaultSieveBudget);
    const SieveTables t = obtain_sieve(c, std::max<u64>(limit, 2), err);
    return g6(chebyshev_quartic(o.x, o.k, t)) + "\n";
}

struct MomentOpts {
    u64 x = 16;
    u64 y = 0;
    double eps_prime = 0.1;
    u64 cutoff = 10000;
    u64 wide_cutoff = 0;
    double B = 1.0;
    bool exclude_reducible = false;
    bool include_reducible = false;
    std::string format;
};

std::string resolve_format(const std::string& flag, const std::string& out) {
    if (!flag.empty()) return flag;
    if (out.size() >= 4 && out.compare(out.size() - 4, 4, ".csv") == 0) return "csv";
    return "json";
}

std::string cmd_moment_sweep(const Common& c, const MomentOpts& o, std::ostream& err) {
    MomentConfig mc;
    mc.x = o.x;
    mc.y = o.y;
    mc.eps_prime = o.eps_prime;
    mc.P = o.cutoff;
    mc.B = o.B;
    mc.validate();
    if (o.exclude_reducible && o.include_reducible)
        throw ConfigError("--exclude-reducible and --include-reducible are exclusive");
    const bool include_reducible = o.include_reducible;
    const u64 wide = o.wide_cutoff == 0 ? 2 * o.cutoff : o.wide_cutoff;
    if (wide < o.cutoff) throw ConfigError("--wide-cutoff must be >= --cutoff");
    const std::string format = resolve_format(o.format, c.out);
    const unsigned threads = resolve_threads(c.threads);

    ordered_json cfg{{"subcommand", "moment-sweep"},
                     {"x", mc.x},
                     {"y", mc.resolved_y()},
                     {"eps_prime", mc.eps_prime},
                     {"cutoff", mc.P},
                     {"wide_cutoff", wide},
                     {"B", mc.B},
                     {"exclude_reducible", !include_reducible},
                     {"seed", c.seed},
                     {"threads", threads},
                     {"format", format}};

    const auto t0 = std::chrono::steady_clock::now();
    const SieveTables sieve = obtain_sieve(c, std::max(mc.lambda_limit(), wide), err);
    const QuarticTableSet tables(wide, sieve);
    const SingularSeriesSweep narrow(mc.P, tables);
    const SingularSeriesSweep broad(wide, tables);
    err << "sweeping " << mc.resolved_y() << " shifts at x = " << mc.x << "\n";
    const MomentResult res = second_moment(mc, sieve, narrow, threads);

    std::vector<MomentRow> kept;
    for (const auto& r : res.rows)
        if (r.admissible && (include_reducible || !r.reducible)) kept.push_back(r);
    std::vector<double> abs_err;
    abs_err.reserve(kept.size());
    for (const auto& r : kept) abs_err.push_back(std::abs(r.error));
    const Percentiles pe = percentiles(abs_err);
    const Percentiles pd = percentiles(truncation_deltas(kept, narrow, broad, threads));
    const u64 checksum = row_checksum(res.rows);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (format == "csv") {
        std::string s = csv_header(cfg) + "k,kappa,admissible,count,expected,error,reducible\n";
        for (const auto& r : res.rows) {
            s += std::to_string(r.k) + "," + std::to_string(r.kappa) + "," + (r.admissible ? "true" : "false") + "," +
                 g17(r.count) + "," + g17(r.expected) + "," + g17(r.error) + "," + (r.reducible ? "true" : "false") +
                 "\n";
        }
        err << "M2 = " << g17(res.M2) << "\n";
        return s;
    }
    if (format != "json") throw ConfigError("--format must be csv or json");

    char hex[20];
    std::snprintf(hex, sizeof hex, "%016" PRIx64, checksum);
    auto pct = [](const Percentiles& p) {
        return ordered_json{{"p50", p.p50}, {"p90", p.p90}, {"p99", p.p99}, {"max", p.max}};
    };
    ordered_json report{{"schema", "qpl-1"},
                        {"config", cfg},
                        {"M2", res.M2},
                        {"admissible", res.admissible},
                        {"exceptional_count", exceptional_count(res.rows, mc.x, mc.B, include_reducible)},
                        {"abs_error_percentiles", pct(pe)},
                        {"truncation_delta_percentiles", pct(pd)},
                        {"checksum", hex},
                        {"metadata", {{"runtime_seconds", runtime}}}};
    return report.dump(2) + "\n";
}

struct ArcOpts {
    u64 x = 32;
    double c1 = 2.0;
    double eps = 0.05;
    u64 grid = 4096;
};

std::string cmd_arcs(const ArcOpts& o) {
    const MajorArcs arcs = build_major_arcs(o.x, o.c1, o.eps);
    ordered_json cfg{{"subcommand", "arcs"}, {"x", o.x}, {"c1", o.c1}, {"eps", o.eps},
                     {"Q1", arcs.Q1},        {"Q2", arcs.Q2}};
    std::string s = csv_header(cfg) + "a,q,center,halfwidth\n";
    for (const auto& a : arcs.arcs)
        s += std::to_string(a.a) + "," + std::to_string(a.q) + "," + g17(a.center()) + "," + g17(a.halfwidth) + "\n";
    return s;
}

std::string cmd_minor_scan(const Common& c, const ArcOpts& o) {
    if (o.grid < 1000) throw ConfigError("--grid must be >= 1000");
    if (o.x > 1000000) throw ConfigError("--x must be <= 1000000");
    const MajorArcs arcs = build_major_arcs(o.x, o.c1, o.eps);
    const unsigned threads = resolve_threads(c.threads);
    ordered_json cfg{{"subcommand", "minor-scan"}, {"x", o.x},   {"c1", o.c1},         {"eps", o.eps},
                     {"grid", o.grid},              {"Q1", arcs.Q1}, {"Q2", arcs.Q2}, {"threads", threads}};
    const MinorArcSample m = minor_arc_sup_S2(o.x, arcs, o.grid, threads);
    std::string s = csv_header(cfg) + "alpha,magnitude,ratio_to_x,sampled,skipped\n";
    s += g17(m.alpha) + "," + g17(m.magnitude) + "," + g17(m.magnitude / static_cast<double>(o.x)) + "," +
         std::to_string(m.sampled) + "," + std::to_string(m.skipped) + "\n";
    return s;
}

struct LemmaOpts {
    std::string lemma = "weyl";
    u64 trials = 100;
    u64 max_n = 200;
    u64 q_max = 300;
    int size = 10;
    int dim = 30;
    u64 Q = 64;
    u64 M = 256;
    u64 N = 100;
    u64 Nprime = 150;
    double Delta = 10.0;
};

std::string format_params(const LemmaReport& r) {
    std::string s;
    for (const auto& [k, v] : r.params) {
        if (!s.empty()) s += ";";
        s += k + "=" + g17(v);
    }
    return s;
}

std::string cmd_lemma_lab(const Common& c, const LemmaOpts& o, std::ostream& err) {
    const unsigned threads = resolve_threads(c.threads);
    ordered_json cfg{{"subcommand", "lemma-lab"}, {"lemma", o.lemma}, {"seed", c.seed}, {"trials", o.trials},
                     {"threads", threads}};
    std::vector<LemmaReport> reports;
    if (o.lemma == "weyl") {
        if (o.max_n < 1 || o.max_n > 2000) throw ConfigError("--max-n must be in [1, 2000]");
        cfg["max_n"] = o.max_n;
        reports = weyl_suite(o.trials, c.seed, o.max_n, threads);
    } else if (o.lemma == "pv") {
        if (o.q_max < 3 || o.q_max > 5000) throw ConfigError("--q-max must be in [3, 5000]");
        cfg["q_max"] = o.q_max;
        reports = pv_suite(o.q_max);
    } else if (o.lemma == "duality") {
        if (o.size < 1 || o.size > 500) throw ConfigError("--size must be in [1, 500]");
        cfg["size"] = o.size;
        reports = duality_suite(o.trials, c.seed, o.size);
    } else if (o.lemma == "bessel") {
        if (o.dim < 1 || o.dim > 500) throw ConfigError("--dim must be in [1, 500]");
        cfg["dim"] = o.dim;
        reports = bessel_suite(o.trials, c.seed, o.dim);
    } else if (o.lemma == "gallagher") {
        cfg["N"] = o.N;
        cfg["Nprime"] = o.Nprime;
        cfg["Delta"] = o.Delta;
        reports.push_back(gallagher_anchor(c.seed, o.N, o.Nprime, o.Delta));
    } else if (o.lemma == "qls") {
        if (o.Q < 1 || o.Q > 2000 || o.M < 1 || o.M > 100000) throw ConfigError("--Q or --M out of range");
        cfg["Q"] = o.Q;
        cfg["M"] = o.M;
        reports.push_back(quartic_large_sieve_ratio(o.Q, o.M, o.trials, c.seed, threads));
    } else {
        throw ConfigError("--lemma must be one of weyl, pv, duality, bessel, gallagher, qls");
    }
    std::string s = csv_header(cfg) + "lemma_id,params,lhs,rhs,ratio,verdict\n";
    u64 violated = 0;
    for (const auto& r : reports) {
        if (r.verdict == Verdict::violated) ++violated;
        s += r.lemma_id + "," + format_params(r) + "," + g17(r.lhs) + "," + g17(r.rhs) + "," + g17(r.ratio) + "," +
             to_string(r.verdict) + "\n";
    }
    err << reports.size() << " reports, " << violated << " violated\n";
    return s;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical toolkit for primes of the form n^4 + k", "qpl"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--threads", common.threads, "Worker threads (0 = available parallelism)");
    app.add_option("--cache-dir", common.cache_dir, "Sieve cache directory (empty disables caching)");
    app.add_option("--out", common.out, "Write data to this file instead of standard output");
    app.add_option("--seed", common.seed, "Base seed for randomised suites");

    SieveBuildOpts sb;
    auto* c_sieve = app.add_subcommand("sieve-build", "Build or load the smallest-prime-factor table");
    c_sieve->add_option("--limit", sb.limit, "Upper bound of the table")->required();

    NpOpts np;
    auto* c_np = app.add_subcommand("np-table", "Solution counts of n^4 + k = 0 mod p by two methods");
    c_np->add_option("--p-max", np.p_max, "Largest prime");
    c_np->add_option("--k-range", np.k_range, "Shift range LO:HI");

    SingularOpts ss;
    auto* c_ss = app.add_subcommand("singular-series", "Truncated singular series per shift");
    c_ss->add_option("--k-range", ss.k_range, "Shift range LO:HI");
    c_ss->add_option("--cutoff,-P", ss.cutoff, "Prime cutoff P");
    c_ss->add_flag("--trace", ss.trace, "Emit partial products at P/10, P/4, P/2");

    SigmaOpts sg;
    auto* c_sg = app.add_subcommand("sigma-table", "Complete double sums against the prime-product formula");
    c_sg->add_option("--q-max", sg.q_max, "Largest odd square-free modulus");
    c_sg->add_option("--k-range", sg.k_range, "Shift range LO:HI");

    CountOpts ct;
    auto* c_ct = app.add_subcommand("count", "Sum of Lambda(n^4 + k) over n <= x");
    c_ct->add_option("--x", ct.x, "Range of n")->required();
    c_ct->add_option("--k", ct.k, "Shift")->required();

    MomentOpts mo;
    auto* c_mo = app.add_subcommand("moment-sweep", "Second moment of the error over shifts k <= y");
    c_mo->add_option("--x", mo.x, "Range of n");
    c_mo->add_option("--y", mo.y, "Largest shift (default x^4)");
    c_mo->add_option("--eps-prime", mo.eps_prime, "Admissibility exponent");
    c_mo->add_option("--cutoff,-P", mo.cutoff, "Singular-series prime cutoff");
    c_mo->add_option("--wide-cutoff", mo.wide_cutoff, "Second cutoff for truncation deltas (default 2P)");
    c_mo->add_option("--B", mo.B, "Log power in the exceptional threshold");
    c_mo->add_flag("--exclude-reducible", mo.exclude_reducible, "Drop k = 4m^4 from the summaries (default)");
    c_mo->add_flag("--include-reducible", mo.include_reducible, "Keep k = 4m^4 in the summaries");
    c_mo->add_option("--format", mo.format, "csv or json (default from --out extension, else json)")
        ->check(CLI::IsMember({"csv", "json"}));

    ArcOpts ar;
    auto* c_ar = app.add_subcommand("arcs", "List the major arcs");
    c_ar->add_option("--x", ar.x, "Range of n");
    c_ar->add_option("--c1", ar.c1, "Q1 = (log x)^c1");
    c_ar->add_option("--eps", ar.eps, "Q2 = x^(1 - eps)");

    ArcOpts ms;
    auto* c_ms = app.add_subcommand("minor-scan", "Largest |S2| on a grid over the minor arcs");
    c_ms->add_option("--x", ms.x, "Range of n");
    c_ms->add_option("--c1", ms.c1, "Q1 = (log x)^c1");
    c_ms->add_option("--eps", ms.eps, "Q2 = x^(1 - eps)");
    c_ms->add_option("--grid", ms.grid, "Grid points");

    LemmaOpts lo;
    auto* c_lo = app.add_subcommand("lemma-lab", "Numerical checks of the auxiliary inequalities");
    c_lo->add_option("--lemma", lo.lemma, "weyl, pv, duality, bessel, gallagher or qls")
        ->check(CLI::IsMember({"weyl", "pv", "duality", "bessel", "gallagher", "qls"}));
    c_lo->add_option("--trials", lo.trials, "Cases or trials");
    c_lo->add_option("--max-n", lo.max_n, "weyl: largest N");
    c_lo->add_option("--q-max", lo.q_max, "pv: largest modulus");
    c_lo->add_option("--size", lo.size, "duality: matrix size");
    c_lo->add_option("--dim", lo.dim, "bessel: ambient dimension");
    c_lo->add_option("--Q", lo.Q, "qls: modulus scale");
    c_lo->add_option("--M", lo.M, "qls: sequence scale");
    c_lo->add_option("--N", lo.N, "gallagher: N");
    c_lo->add_option("--Nprime", lo.Nprime, "gallagher: N'");
    c_lo->add_option("--Delta", lo.Delta, "gallagher: Delta");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        std::string data;
        if (*c_sieve)
            data = cmd_sieve_build(common, sb, err);
        else if (*c_np)
            data = cmd_np_table(np);
        else if (*c_ss)
            data = cmd_singular_series(common, ss, err);
        else if (*c_sg)
            data = cmd_sigma_table(sg, err);
        else if (*c_ct)
            data = cmd_count(common, ct, err);
        else if (*c_mo)
            data = cmd_moment_sweep(common, mo, err);
        else if (*c_ar)
            data = cmd_arcs(ar);
        else if (*c_ms)
            data = cmd_minor_scan(common, ms);
        else if (*c_lo)
            data = cmd_lemma_lab(common, lo, err);
        emit(common, data, out);
        return 0;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 2;
    }
}

int run(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace qpl::cli
