#include "kpd/detail/minimax.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>

#include "kpd/geometry.hpp"

namespace kpd::detail {

bool solve_small(int k, double* A, double* b) {
  double scale = 0.0;
  for (int i = 0; i < k * k; ++i) scale = std::max(scale, std::fabs(A[i]));
  if (scale == 0.0) return false;
  const double tol = 1e-13 * scale;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int row = col + 1; row < k; ++row)
      if (std::fabs(A[row * k + col]) > std::fabs(A[piv * k + col])) piv = row;
    if (std::fabs(A[piv * k + col]) <= tol) return false;
    if (piv != col) {
      for (int j = 0; j < k; ++j) std::swap(A[piv * k + j], A[col * k + j]);
      std::swap(b[piv], b[col]);
    }
    const double inv = 1.0 / A[col * k + col];
    for (int row = col + 1; row < k; ++row) {
      const double f = A[row * k + col] * inv;
      if (f == 0.0) continue;
      for (int j = col; j < k; ++j) A[row * k + j] -= f * A[col * k + j];
      b[row] -= f * b[col];
    }
  }
  for (int col = k - 1; col >= 0; --col) {
    double s = b[col];
    for (int j = col + 1; j < k; ++j) s -= A[col * k + j] * b[j];
    b[col] = s / A[col * k + col];
  }
  return true;
}

namespace {

constexpr int kMaxPts = 20;

struct Recentered {
  int n;
  int d;
  std::vector<double> pts;      // shifted copies
  std::vector<double> center;   // subtracted shift
};

Recentered recenter(int d, std::span<const double> pts) {
  const int n = static_cast<int>(pts.size()) / d;
  if (n > kMaxPts) throw std::invalid_argument("minimax: too many points");
  Recentered rc{n, d, std::vector<double>(pts.begin(), pts.end()),
                std::vector<double>(d, 0.0)};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) rc.center[k] += pts[i * d + k];
  for (int k = 0; k < d; ++k) rc.center[k] /= n;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) rc.pts[i * d + k] -= rc.center[k];
  return rc;
}

std::span<const double> pt(const Recentered& rc, int i) {
  return {rc.pts.data() + static_cast<std::size_t>(i) * rc.d,
          static_cast<std::size_t>(rc.d)};
}

// Shared enumeration skeleton: score every candidate w with the exact
// objective and keep the best.
struct Best {
  double value = kInf;
  std::vector<double> w;

  void consider(std::span<const double> cand, double val) {
    if (val < value) {
      value = val;
      w.assign(cand.begin(), cand.end());
    }
  }
};

template <typename Obj>
void try_subset_roots(const Recentered& rc, const int* idx, int m, bool scaled,
                      std::span<const double> weights, Best& best,
                      const Obj& objective) {
  // m >= 2 subset. Base point idx[0]; k = m-1 difference vectors.
  const int d = rc.d, k = m - 1;
  double V[8 * 8];  // k x d, k <= d <= 8
  auto base = pt(rc, idx[0]);
  for (int j = 0; j < k; ++j) {
    auto xj = pt(rc, idx[j + 1]);
    for (int t = 0; t < d; ++t) V[j * 8 + t] = xj[t] - base[t];
  }
  double G[64], c[8], e[8];
  const double w0 = weights[idx[0]];
  for (int i = 0; i < k; ++i) {
    double nn = 0.0;
    for (int t = 0; t < d; ++t) nn += V[i * 8 + t] * V[i * 8 + t];
    const double wi = weights[idx[i + 1]];
    if (!scaled) {
      c[i] = 0.5 * (nn - wi * wi + w0 * w0);
      e[i] = wi - w0;
    } else {
      c[i] = 0.5 * nn;
      e[i] = 0.5 * (wi * wi - w0 * w0);
    }
    for (int j = 0; j < k; ++j) {
      double g = 0.0;
      for (int t = 0; t < d; ++t) g += V[i * 8 + t] * V[j * 8 + t];
      G[i * k + j] = g;
    }
  }
  double Gp[64], Gq[64], p[8], q[8];
  std::memcpy(Gp, G, sizeof(double) * k * k);
  std::memcpy(Gq, G, sizeof(double) * k * k);
  std::memcpy(p, c, sizeof(double) * k);
  std::memcpy(q, e, sizeof(double) * k);
  if (!solve_small(k, Gp, p)) return;  // affinely dependent subset: skip
  if (!solve_small(k, Gq, q)) return;

  // alpha(s) = p - s q; base equality alpha' G alpha = (s + w0)^2 (additive)
  // or = s * w0^2 with s = t^2 (scaled). Both reduce to A s^2 + B s + C = 0.
  double cp = 0.0, cq = 0.0, eq = 0.0;
  for (int i = 0; i < k; ++i) {
    cp += c[i] * p[i];
    cq += c[i] * q[i];
    eq += e[i] * q[i];
  }
  double A, B, C;
  if (!scaled) {
    A = eq - 1.0;
    B = -2.0 * (cq + w0);
    C = cp - w0 * w0;
  } else {
    A = eq;
    B = -(2.0 * cq + w0 * w0);
    C = cp;
  }
  double roots[2];
  int nroots = 0;
  const double scaleABC = std::max({std::fabs(A), std::fabs(B), std::fabs(C)});
  if (std::fabs(A) <= 1e-14 * std::max(1.0, scaleABC)) {
    if (std::fabs(B) > 0.0) roots[nroots++] = -C / B;
  } else {
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double sd = std::sqrt(disc);
      // Numerically stable pair of roots.
      const double q2 = -0.5 * (B + (B >= 0.0 ? sd : -sd));
      roots[nroots++] = q2 / A;
      if (q2 != 0.0) roots[nroots++] = C / q2;
      else roots[nroots++] = 0.0;
    }
  }
  double wcand[8];
  for (int rix = 0; rix < nroots; ++rix) {
    const double s = roots[rix];
    if (scaled && s < 0.0) continue;
    for (int t = 0; t < d; ++t) wcand[t] = base[t];
    for (int j = 0; j < k; ++j) {
      const double aj = p[j] - s * q[j];
      for (int t = 0; t < d; ++t) wcand[t] += aj * V[j * 8 + t];
    }
    std::span<const double> wc(wcand, static_cast<std::size_t>(d));
    best.consider(wc, objective(wc));
  }
}

template <typename Obj>
MinimaxResult enumerate_ball_candidates(int d, std::span<const double> pts,
                                        std::span<const double> weights,
                                        bool scaled, const Obj& objective_at) {
  if (d < 1 || d > 8) throw std::invalid_argument("minimax: dimension out of range");
  if (pts.empty()) throw std::invalid_argument("minimax: empty point set");
  Recentered rc = recenter(d, pts);
  const int n = rc.n;

  auto obj = [&](std::span<const double> w) { return objective_at(rc, w); };

  Best best;
  for (int i = 0; i < n; ++i) best.consider(pt(rc, i), obj(pt(rc, i)));

  const int max_m = std::min(n, d + 1);
  int idx[kMaxPts];
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const int m = std::popcount(mask);
    if (m < 2 || m > max_m) continue;
    int t = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx[t++] = i;
    try_subset_roots(rc, idx, m, scaled, weights, best, obj);
  }

  // Undo the recentring shift.
  for (int k = 0; k < d; ++k) best.w[k] += rc.center[k];
  return {best.value, std::move(best.w)};
}

}  // namespace

MinimaxResult weighted_ball_minimax(int d, std::span<const double> pts,
                                    std::span<const double> r) {
  return enumerate_ball_candidates(
      d, pts, r, /*scaled=*/false,
      [&](const Recentered& rc, std::span<const double> w) {
        double v = -kInf;
        for (int i = 0; i < rc.n; ++i)
          v = std::max(v, dist(pt(rc, i), w) - r[i]);
        return v;
      });
}

MinimaxResult scaled_ball_minimax(int d, std::span<const double> pts,
                                  std::span<const double> a) {
  return enumerate_ball_candidates(
      d, pts, a, /*scaled=*/true,
      [&](const Recentered& rc, std::span<const double> w) {
        double v = 0.0;
        for (int i = 0; i < rc.n; ++i)
          v = std::max(v, dist(pt(rc, i), w) / a[i]);
        return v;
      });
}

MinimaxResult polyhedral_minimax(
    int d, std::span<const GaugeRow> rows, std::span<const double> pts,
    const std::function<double(std::span<const double>)>& objective) {
  const int nrows = static_cast<int>(rows.size());
  const int n = static_cast<int>(pts.size()) / d;
  const int k = d + 1;
  if (d < 1 || d > 3 || nrows > 64)
    throw std::invalid_argument("polyhedral minimax: unsupported size");

  Best best;
  for (int i = 0; i < n; ++i) {
    std::span<const double> w(pts.data() + static_cast<std::size_t>(i) * d,
                              static_cast<std::size_t>(d));
    best.consider(w, objective(w));
  }

  double A[16], b[4];
  // Enumerate all (d+1)-subsets of rows; each nonsingular system is a vertex
  // candidate of {(w,t) : g.w - a t <= g.x}.
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
  if (nrows < k) return {best.value, std::move(best.w)};
  while (true) {
    for (int r = 0; r < k; ++r) {
      const GaugeRow& row = rows[comb[r]];
      for (int c = 0; c < d; ++c) A[r * k + c] = row.g[c];
      A[r * k + d] = -row.a;
      b[r] = row.gx;
    }
    if (solve_small(k, A, b)) {
      std::span<const double> w(b, static_cast<std::size_t>(d));
      best.consider(w, objective(w));
    }
    int pos = k - 1;
    while (pos >= 0 && comb[pos] == nrows - k + pos) --pos;
    if (pos < 0) break;
    ++comb[pos];
    for (int j = pos + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
  return {best.value, std::move(best.w)};
}

MinimaxResult minimize_minimax(int d, std::span<const double> start,
                               std::span<const Piece> pieces, int max_iter) {
  std::vector<double> w(start.begin(), start.end());
  std::vector<double> g(d, 0.0);

  auto eval = [&](std::span<const double> at, int* arg) {
    double f = -kInf;
    int a = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const double v = pieces[i].value(at);
      if (v > f) {
        f = v;
        a = static_cast<int>(i);
      }
    }
    if (arg) *arg = a;
    return f;
  };

  int arg = 0;
  double f = eval(w, &arg);
  double f_best = f;
  std::vector<double> w_best = w;
  double delta = 0.1 * std::max(1.0, std::fabs(f_best));
  double window_best = f_best;
  int since_check = 0;

  for (int iter = 0; iter < max_iter; ++iter) {
    pieces[arg].grad(w, g);
    double gn2 = 0.0;
    for (double v : g) gn2 += v * v;
    if (gn2 < 1e-30) break;
    const double step = (f - (f_best - delta)) / gn2;
    for (int kk = 0; kk < d; ++kk) w[kk] -= step * g[kk];
    f = eval(w, &arg);
    if (f < f_best) {
      f_best = f;
      w_best = w;
    }
    if (++since_check >= 50) {
      if (window_best - f_best < kEpsOpt) {
        if (delta <= kEpsOpt) break;
        delta *= 0.5;
        // Restart from the incumbent so the shrunken target stays reachable.
        w = w_best;
        f = f_best;
      }
      window_best = f_best;
      since_check = 0;
    }
  }
  return {f_best, std::move(w_best)};
}

}  // namespace kpd::detail
