#pragma once

#include "qpl/contour/contour.hpp"
#include "qpl/numerics/complex.hpp"
#include "qpl/numerics/precision.hpp"
#include "qpl/numerics/quadrature.hpp"

#include <vector>

namespace qpl {

/// <p, q> = sum over pieces of weight * int p(z) q(z) e^{-N V_t(z)} dz.
struct BilinearFormSpec {
    Real t;
    int N = 1;
    Complex alpha;
    Complex beta;
    ContourPath contour;
    QuadratureRule rule;
};

/// Rays for t < 0, the real line for t >= 0 (where alpha and beta play no role).
BilinearFormSpec make_spec(const Real& t, int N, const Complex& alpha, const Complex& beta);

struct MomentTable {
    std::vector<Complex> m;  // m_k = <z^k, 1>, k = 0..k_max
    std::vector<Real> errors;
    int k_max = 0;
    Real truncation_radius;
};

MomentTable compute_moments(const BilinearFormSpec& spec, int k_max, const PrecisionContext& ctx,
                            Execution exec = Execution::parallel);

/// Per-piece moments (unweighted, orientation applied), for affinity checks.
std::vector<std::vector<Complex>> compute_piece_moments(const BilinearFormSpec& spec, int k_max,
                                                        const PrecisionContext& ctx,
                                                        Execution exec = Execution::parallel);

struct RecurrenceTable {
    std::vector<Complex> a;  // a[0] = 0 by convention, a[n] = h_n / h_{n-1}
    std::vector<Complex> b;  // b[n], n = 0..n_max
    std::vector<Complex> h;  // h[n] = <pi_n, pi_n>
    std::vector<bool> exists;  // exists[n]: pi_n exists (h_0..h_{n-1} nonzero)
    int n_max = 0;
    int first_degenerate = -1;  // smallest n with h_n below threshold, or -1

    /// Throws DegenerateForm when pi_n or the coefficients at n are not available.
    void require(int n) const;
};

/// Gram-Schmidt on monic coefficient vectors. Needs moments up to 2 n_max + 2;
/// produces b_0..b_{n_max}, h_0..h_{n_max+1} and a_1..a_{n_max+1}.
RecurrenceTable stieltjes_recurrence(const MomentTable& moments, int n_max, const PrecisionContext& ctx);

struct FreudResidual {
    Real max;
    std::vector<Real> per_n;  // index n = 1..n_last; per_n[0] unused
};

/// |a_n + t a_n (a_{n-1} + a_n + a_{n+1}) - n/N| for n = 1 .. (last index with a_{n+1}), a_0 = 0.
FreudResidual freud_residual(const std::vector<Complex>& a, const Real& t, int N, int n_last = -1);

struct FreudLattice {
    std::vector<Complex> a;          // a[0] = 0, a[1], a[2] seeds, then iterates
    std::vector<double> condition;   // log10 growth of a unit perturbation of (a_1, a_2) up to n
};

/// a_{n+1} = n / (N t a_n) - 1/t - a_{n-1} - a_n from (a_1, a_2). Throws LatticeBlowup
/// when some |a_n| falls below 10^-(digits/2).
FreudLattice freud_lattice(const Real& t, int N, const Complex& a1, const Complex& a2, int n_max,
                           const PrecisionContext& ctx);

/// Default working precision for a recurrence run up to n_max.
int default_orthopoly_digits(int n_max);

}  // namespace qpl

#include "qpl/io/json.hpp"

namespace qpl {

/// Everything a recurrence run produces, as stored on disk.
struct RecurrenceRecord {
    Real t;
    int N = 1;
    Complex alpha;
    Complex beta;
    int digits = 0;
    MomentTable moments;
    RecurrenceTable table;
};

Json to_json(const RecurrenceRecord& rec);
RecurrenceRecord recurrence_from_json(const Json& j);
/// Columns n, Re a_n, Im a_n, Re b_n, Im b_n for every n with exists_n.
std::string recurrence_csv(const RecurrenceTable& table);

}  // namespace qpl
