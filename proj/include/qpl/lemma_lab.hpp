// lemma_lab.hpp
// Numerical exercisers for the auxiliary inequalities: Weyl differencing,
// Polya-Vinogradov, duality, Bessel, Gallagher and the quartic large sieve.
//
// Inequalities with explicit constants report "holds" or "violated";
// those with implicit constants only report a measured ratio.

#pragma once

#include <Eigen/Dense>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpl/common.hpp"

namespace qpl {

enum class Verdict { holds, violated, measured };

const char* to_string(Verdict v);

struct LemmaReport {
    std::string lemma_id;
    std::vector<std::pair<std::string, double>> params;
    double lhs = 0;
    double rhs = 0;
    double ratio = 0;  // lhs / rhs, or 0 when both vanish
    Verdict verdict = Verdict::measured;
};

// Reproducible uniform doubles in [0, 1) from the standard mt19937_64 stream.
class UniformStream {
public:
    explicit UniformStream(u64 seed) : gen_(seed) {}
    double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    u64 next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Seed for trial i derived from a base seed (splitmix64 finaliser), so a
// trial's stream does not depend on which worker runs it.
u64 trial_seed(u64 seed, u64 trial);

// f(n) = alpha n^4 + sum_j lower[j] n^j (lower[j] multiplies n^j, j <= 3).
// lhs = |sum_{n<=N} e(f(n))|,
// rhs = 2N {N^-4 sum_{-N<l1,l2,l3<N} min(N, 1/||24 alpha l1 l2 l3||)}^(1/8).
LemmaReport weyl_check(double alpha, u64 N, std::span<const double> lower = {}, unsigned threads = 0);

// One report per non-principal character mod q: lhs = max over windows
// (M, M'] with M' <= 2q of |sum chi(n)|, rhs = sqrt(q) log q. Primitive
// characters are judged (holds / violated), the rest are measured.
std::vector<LemmaReport> polya_vinogradov_check(u64 q);

// D_row = sup |T a|^2 / |a|^2 and D_col = sup |T^t b|^2 / |b|^2, each as the
// top eigenvalue of its own Gram matrix; random unit probes confirm both
// inequalities. lhs = D_row, rhs = D_col.
LemmaReport duality_check(const Eigen::MatrixXcd& T, u64 seed = 1, int probes = 8);

// lhs = sum_r |(xi, phi_r)|^2, rhs = (xi, xi).
LemmaReport bessel_check(const std::vector<Eigen::VectorXcd>& family, const Eigen::VectorXcd& xi);

// a[i] is the coefficient of n = N + 1 + i for N < n < N'.
// lhs = int_{|beta| < 1/Delta} |sum a_n e(beta n)|^2 (adaptive Gauss-Kronrod),
// rhs = Delta^-2 int_{N - Delta/2}^{N} |window sum|^2 dt (exact, piecewise constant).
LemmaReport gallagher_check(std::span<const cplx> a, u64 N, u64 Nprime, double Delta);

// Closed form of the Gallagher lhs: sum_{n,n'} a_n conj(a_n') K(n - n'),
// K(0) = 2/Delta, K(h) = sin(2 pi h / Delta) / (pi h).
double gallagher_lhs_closed_form(std::span<const cplx> a, double Delta);

// Sup over `trials` random unit-modulus sequences (zeroed off square-free m)
// of lhs / rhs0 with
//   lhs  = sum_{Q <= q < 2Q} sum over primitive chi of order 4 mod q of
//          |sum_{M <= m < 2M} a_m chi(m)|^2,
//   rhs0 = (Q^(5/4) + Q^(2/3) M) sum |a_m|^2.
LemmaReport quartic_large_sieve_ratio(u64 Q, u64 M, u64 trials, u64 seed = 1, unsigned threads = 0);

// Same lhs for one explicit sequence a[i] = a_{M + i}, i < M.
double quartic_large_sieve_lhs(u64 Q, u64 M, std::span<const cplx> a);

// Seeded suites used by the CLI and the acceptance run.
std::vector<LemmaReport> weyl_suite(u64 cases, u64 seed, u64 max_N = 200, unsigned threads = 0);
std::vector<LemmaReport> bessel_suite(u64 cases, u64 seed, int dim = 30);
std::vector<LemmaReport> duality_suite(u64 cases, u64 seed, int size);
std::vector<LemmaReport> pv_suite(u64 q_max);
LemmaReport gallagher_anchor(u64 seed = 1, u64 N = 100, u64 Nprime = 150, double Delta = 10.0);

Eigen::MatrixXcd random_complex_matrix(int rows, int cols, UniformStream& rng);

}  // namespace qpl
