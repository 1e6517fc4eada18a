// singular.hpp
// The singular series S(k) = prod_{p > 2} (1 - (n_p - 1)/(p - 1)), its
// truncations, the tail Psi(k) and the major-arc main term.

#pragma once

#include <array>
#include <vector>

#include "qpl/expsums.hpp"
#include "qpl/residues.hpp"

namespace qpl {

struct SingularValue {
    i64 k;
    u64 cutoff;
    double value;
    // Partial products over odd p <= P/10, P/4, P/2, P.
    std::array<double, 4> trace;
};

// Checkpoints P/10, P/4, P/2, P in that order.
std::array<u64, 4> trace_checkpoints(u64 P);

// Single factor 1 - (n_p - 1)/(p - 1).
inline double singular_factor(u64 p, unsigned np) {
    return 1.0 - (static_cast<double>(np) - 1.0) / (static_cast<double>(p) - 1.0);
}

SingularValue singular_series(i64 k, u64 P, const QuarticTableSet& tables);

// The same product with n_p taken from np_via_characters (n_p = 1 when p | k).
SingularValue singular_series_via_characters(i64 k, u64 P);

double truncation_delta(i64 k, u64 P, const QuarticTableSet& tables);

// Per-residue factor tables for fast sweeps over many k. The product order
// matches singular_series, so values agree bit for bit.
class SingularSeriesSweep {
public:
    SingularSeriesSweep(u64 P, const QuarticTableSet& tables);

    u64 cutoff() const { return P_; }
    const std::vector<u64>& primes() const { return primes_; }
    double value(i64 k) const { return partial(k, primes_.size()); }
    // Product over the first `count` odd primes.
    double partial(i64 k, std::size_t count) const;
    // Factor of the prime_index-th odd prime at k.
    double factor(std::size_t prime_index, i64 k) const {
        return factors_[offsets_[prime_index] + mod_signed(k, primes_[prime_index])];
    }

private:
    u64 P_;
    std::vector<u64> primes_;
    std::vector<std::size_t> offsets_;
    std::vector<double> factors_;
};

struct PsiValue {
    i64 k;
    double Q1;
    double Qmax;
    double value;
    u64 terms;  // nonzero terms summed
};

// sum over square-free odd q in (Q1, Qmax] of mu(q)/phi(q) prod_{p|q} (n_p - 1).
PsiValue psi_tail(i64 k, double Q1, double Qmax, const QuarticTableSet& tables);

// k = 4 m^4: the only k > 0 with n^4 + k reducible over the rationals.
bool is_reducible_shift(i64 k);

// Sum over arcs (a, q) of the T1 T2 e(-k alpha) integral in kernel form:
//   mu(q)/phi(q) e(-ak/q) sum_{n<=x} c_{q,d(n)} sum_{m<=z} sin(2 pi delta t)/(pi t),
// t = m - n^4 - k, delta = 1/(q Q2), c_{q,d} = (1/phi(q1*)) sum_l e(-a d* l^4/q1*).
// Returns the real part.
double main_term_integral(i64 k, u64 x, const MajorArcs& arcs);

}  // namespace qpl
