// expsums.hpp
// Exponential sums of the circle-method setup for n^4 + k:
//   S1(alpha) = sum_{m <= z} Lambda(m) e(alpha m)
//   S2(alpha) = sum_{n <= x} e(-alpha n^4)
// with alpha = a/q + beta kept as an exact (a, q) pair plus a real offset,
// the complete sums Sigma(q), and the major-arc decompositions
// S1 = T1 + E1 + R and S2 = T2 + E2.

#pragma once

#include <memory>
#include <vector>

#include "qpl/arith.hpp"
#include "qpl/common.hpp"
#include "qpl/phase.hpp"
#include "qpl/residues.hpp"

namespace qpl {

// alpha = a/q + beta, 0 <= a < q, gcd(a, q) = 1. The constructor reduces a
// mod q, so (a + q, q, beta) and (a, q, beta) are the same point.
class ArcPoint {
public:
    ArcPoint(i64 a, u64 q, double beta = 0.0);

    u64 a() const { return a_; }
    u64 q() const { return q_; }
    double beta() const { return beta_; }
    double alpha() const { return static_cast<double>(a_) / static_cast<double>(q_) + beta_; }

private:
    u64 a_;
    u64 q_;
    double beta_;
};

cplx S1(const ArcPoint& alpha, u64 z, const SieveTables& t);
cplx S2(const ArcPoint& alpha, u64 x);

// tau(chi) = sum_{n=1}^{q} chi(n) e(a n / q), with the ambient a explicit.
cplx gauss_sum(const DirichletCharacter& chi, i64 a);

// c_q(k) via mu(q/g) phi(q) / phi(q/g), g = gcd(k, q).
i64 ramanujan_sum(u64 q, i64 k);

// |e(am/q) - (1/phi(q)) sum_chi chi(am) tau(conj chi)|, tau taken at a = 1.
double gauss_identity_check(i64 a, i64 m, u64 q);

// Same check with the characters and Gauss sums of one modulus cached.
class GaussIdentity {
public:
    explicit GaussIdentity(u64 q);
    double residual(i64 a, i64 m) const;
    u64 modulus() const { return q_; }

private:
    u64 q_;
    std::vector<DirichletCharacter> chars_;
    std::vector<cplx> tau_conj_;
};

struct SigmaValue {
    i64 value;  // nearest integer
    cplx raw;   // the double sum before rounding
    double residual() const { return std::abs(raw - cplx(static_cast<double>(value), 0.0)); }
};

// Sigma(q) = sum_{(a,q)=1} e(-ak/q) sum_{m=1}^{q} e(-a m^4 / q). The inner sum
// does not depend on k and is computed once per modulus.
class SigmaEvaluator {
public:
    explicit SigmaEvaluator(u64 q);
    SigmaValue operator()(i64 k) const;
    u64 modulus() const { return q_; }

private:
    u64 q_;
    std::vector<u64> units_;
    std::vector<cplx> inner_;  // inner_[i] pairs with units_[i]
    std::vector<cplx> roots_;
};

SigmaValue sigma_q(u64 q, i64 k);

// prod_{p | q} p (n_p - 1) for square-free q (n_2 = 1); the multiplicative route.
i64 sigma_q_multiplicative(u64 q, i64 k);

// The closed form p (chi + chi^2 + chi^3)(-k) for p = 1 mod 4 and 0 for p = 2
// or p = 3 mod 4, as stated for the prime case. Kept for discrepancy reports:
// it disagrees with sigma_q whenever p = 3 mod 4 and n_p != 1.
i64 sigma_prime_case_formula(u64 p, i64 k);

struct S1Decomposition {
    cplx T1;
    cplx E1;
    cplx R;   // sum over m <= z with gcd(m, q) > 1
    cplx S1;  // direct evaluation
    double residual() const { return std::abs(S1 - (T1 + E1 + R)); }
};

inline constexpr u64 kDefaultCharacterBound = 10000;

// T1 = mu(q)/phi(q) sum_{m<=z} e(beta m);
// E1 = (1/phi(q)) sum_chi tau(conj chi) chi(a) sum#_{m<=z} chi(m) Lambda(m) e(beta m),
// where # replaces chi_0(m) Lambda(m) by chi_0(m) Lambda(m) - 1.
S1Decomposition decompose_S1(const ArcPoint& alpha, u64 z, const SieveTables& t,
                             u64 max_q = kDefaultCharacterBound);

struct DivisorRecord {
    u64 d;
    u64 q_star;   // q / d
    u64 g;        // gcd(d^3, q_star)
    u64 d_star;   // d^3 / g
    u64 q1_star;  // q_star / g
    cplx T2_part;
    cplx E2_part;
};

struct S2Decomposition {
    std::vector<DivisorRecord> divisors;
    cplx T2;
    cplx E2;
    cplx S2;  // direct evaluation
    double residual() const { return std::abs(S2 - (T2 + E2)); }
};

S2Decomposition decompose_S2(const ArcPoint& alpha, u64 x);

struct MajorArc {
    u64 a;
    u64 q;
    double halfwidth;  // 1 / (q Q2)
    double center() const { return static_cast<double>(a) / static_cast<double>(q); }
};

// Arcs |alpha - a/q| <= 1/(q Q2) for q <= Q1 = (log x)^c1, Q2 = x^(1 - eps),
// ordered by q then a. For q = 1 the arc is centred at a = 0 (equivalently 1).
struct MajorArcs {
    u64 x;
    double c1;
    double eps;
    double Q1;
    double Q2;
    std::vector<MajorArc> arcs;

    // Membership of alpha (taken mod 1) in the union of closed arcs.
    bool contains(double alpha) const;
};

MajorArcs build_major_arcs(u64 x, double c1, double eps);

struct Rational {
    i64 a;
    u64 q;
};

// First continued-fraction convergent a/q with q <= Q and
// |alpha - a/q| <= 1/(q (Q + 1)).
Rational dirichlet_approx(double alpha, u64 Q);

struct MinorArcSample {
    double alpha;
    double magnitude;
    u64 sampled;  // grid points evaluated
    u64 skipped;  // grid points inside the major arcs
};

// Grid alpha_j = 1/Q2 + j/grid, j < grid, over [1/Q2, 1 + 1/Q2) minus the
// major arcs; returns the sample maximising |S2|. Ties go to the smallest j.
MinorArcSample minor_arc_sup_S2(u64 x, const MajorArcs& arcs, u64 grid, unsigned threads = 0);

}  // namespace qpl
