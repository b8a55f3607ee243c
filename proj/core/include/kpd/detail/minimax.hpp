#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kpd::detail {

struct MinimaxResult {
  double value;
  std::vector<double> w;
};

// Exact min over w of max_i (|x_i - w| - r_i).
//
// Candidate enumeration: the minimizer either coincides with some x_i or has
// an active set T with 0 in conv{(w-x_i)/|w-x_i| : i in T}; Caratheodory
// applied inside the affine hull of {x_i : i in T} shows a minimal such T is
// affinely independent with |T| <= d+1 and w in conv{x_i : i in T}. For every
// affinely independent subset the equalities |x_i - w| = t + r_i reduce to a
// linear solve plus one quadratic in t. Each candidate w is scored by the true
// objective, so candidates are self-verifying upper bounds and the minimum
// over all of them is the global optimum up to roundoff.
//
// pts is row-major n*d. Throws std::invalid_argument for n > 20.
MinimaxResult weighted_ball_minimax(int d, std::span<const double> pts,
                                    std::span<const double> r);

// Exact min over w of max_i |x_i - w| / a_i, a_i > 0. Same enumeration with
// the quadratic taken in u = t^2.
MinimaxResult scaled_ball_minimax(int d, std::span<const double> pts,
                                  std::span<const double> a);

// One linear generator row of a polyhedral gauge: value (g.(w - x))/a.
struct GaugeRow {
  std::vector<double> g;
  double a;
  double gx;  // g . x for the row's point
};

// Exact min over w of a polyhedral max: min t s.t. g.w - a t <= g.x for all
// rows, solved by enumerating (d+1)-subsets of rows (every vertex of the
// pointed feasible region is such an intersection) and scoring candidates with
// the supplied true objective.
MinimaxResult polyhedral_minimax(
    int d, std::span<const GaugeRow> rows, std::span<const double> pts,
    const std::function<double(std::span<const double>)>& objective);

struct Piece {
  std::function<double(std::span<const double>)> value;
  // Writes one subgradient at w into out (size d).
  std::function<void(std::span<const double>, std::span<double>)> grad;
};

// Subgradient descent on f(w) = max_i g_i(w) with a Polyak-type step against
// the moving target f_best - delta; delta halves whenever 50 iterations pass
// without improvement and the search stops once improvement stays below
// kEpsOpt at the smallest delta, or after max_iter iterations.
MinimaxResult minimize_minimax(int d, std::span<const double> start,
                               std::span<const Piece> pieces,
                               int max_iter = 10000);

// Solves the k x k system A x = b in place (A row-major, b becomes x) by
// Gaussian elimination with partial pivoting; false when numerically singular.
bool solve_small(int k, double* A, double* b);

}  // namespace kpd::detail
