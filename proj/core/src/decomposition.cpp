#include "kpd/decomposition.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>

#include "kpd/detail/format.hpp"
#include "kpd/geometry.hpp"

namespace kpd {

namespace {

// Volume of the window shrunk by h from its boundary (deflated body).
double shrunk_volume(const Window& a, double h) {
  switch (a.kind()) {
    case Window::Kind::Cube:
      return std::pow(std::max(a.side() - 2.0 * h, 0.0), a.dim());
    case Window::Kind::Ball:
      return unit_ball_volume(a.dim()) *
             std::pow(std::max(a.radius() - h, 0.0), a.dim());
    case Window::Kind::Box: {
      double v = 1.0;
      for (int k = 0; k < a.dim(); ++k)
        v *= std::max(a.hi()[k] - a.lo()[k] - 2.0 * h, 0.0);
      return v;
    }
  }
  return 0.0;
}

double grown_volume(const Window& a, double h) { return a.padded(h).volume(); }

}  // namespace

double WindowDecomposition::inner_volume() const {
  return static_cast<double>(inner_count()) * std::pow(M, dim);
}

double WindowDecomposition::outer_volume() const {
  return static_cast<double>(outer_count()) * std::pow(M, dim);
}

WindowDecomposition decompose_window(const Window& a, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("decompose: M must be > 0");
  const int d = a.dim();

  std::vector<double> lo, hi;
  a.bounding_box(lo, hi);

  std::vector<std::int64_t> kmin(d), kmax(d);
  double ncells = 1.0;
  for (int k = 0; k < d; ++k) {
    // Cells with center z = m*i can meet A only if z in [lo - m/2, hi + m/2].
    kmin[k] = static_cast<std::int64_t>(std::floor((lo[k] - 0.5 * m) / m)) - 1;
    kmax[k] = static_cast<std::int64_t>(std::ceil((hi[k] + 0.5 * m) / m)) + 1;
    ncells *= static_cast<double>(kmax[k] - kmin[k] + 1);
  }
  if (ncells > 5e7)
    throw std::invalid_argument("decompose: cell enumeration too large");

  WindowDecomposition out;
  out.dim = d;
  out.M = m;

  const double half = 0.5 * m;
  std::vector<std::int64_t> idx(kmin);
  std::vector<double> z(d);
  for (;;) {
    for (int k = 0; k < d; ++k) z[k] = static_cast<double>(idx[k]) * m;

    bool inner = true, meets = true;
    switch (a.kind()) {
      case Window::Kind::Cube:
      case Window::Kind::Box: {
        for (int k = 0; k < d && meets; ++k) {
          const double clo = z[k] - half, chi = z[k] + half;
          inner = inner && clo >= lo[k] && chi <= hi[k];
          meets = clo < hi[k] && chi > lo[k];
        }
        inner = inner && meets;
        break;
      }
      case Window::Kind::Ball: {
        double far2 = 0.0, near2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const double clo = z[k] - half, chi = z[k] + half;
          const double fa = std::max(std::fabs(clo), std::fabs(chi));
          far2 += fa * fa;
          const double ne = clo > 0.0 ? clo : (chi < 0.0 ? -chi : 0.0);
          near2 += ne * ne;
        }
        const double r2 = a.radius() * a.radius();
        inner = far2 <= r2;
        meets = near2 <= r2;
        break;
      }
    }

    if (meets) {
      out.outer_centers.insert(out.outer_centers.end(), z.begin(), z.end());
      if (inner)
        out.inner_centers.insert(out.inner_centers.end(), z.begin(), z.end());
    }

    int k = 0;
    while (k < d && idx[k] == kmax[k]) idx[k] = kmin[k], ++k;
    if (k == d) break;
    ++idx[k];
  }
  return out;
}

double boundary_shell_volume(const Window& a, double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("shell: h must be >= 0");
  return grown_volume(a, h) - shrunk_volume(a, h);
}

RatioTable verify_window_asymptotics(const AveragingNet& net, double m,
                                     double h) {
  if (!(m > 0.0)) throw std::invalid_argument("asymptotics: M must be > 0");
  if (!(h >= 0.0)) throw std::invalid_argument("asymptotics: h must be >= 0");

  RatioTable table;
  for (const Window& w : net.windows()) {
    const WindowDecomposition dec = decompose_window(w, m);
    const double vol = w.volume();
    RatioRow row;
    row.label = w.label();
    row.volume = vol;
    row.inner_ratio = dec.inner_volume() / vol;
    row.annulus_ratio = (dec.outer_volume() - dec.inner_volume()) / vol;
    row.shell_ratio = (vol - shrunk_volume(w, h)) / vol;
    table.rows.push_back(std::move(row));
  }

  table.inner_monotone = table.annulus_monotone = table.shell_monotone = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    table.inner_monotone &= table.rows[i].inner_ratio >= table.rows[i - 1].inner_ratio;
    table.annulus_monotone &=
        table.rows[i].annulus_ratio <= table.rows[i - 1].annulus_ratio;
    table.shell_monotone &= table.rows[i].shell_ratio <= table.rows[i - 1].shell_ratio;
  }
  return table;
}

void write_ratio_table_csv(const RatioTable& table, std::ostream& out) {
  out << "label,volume,inner_ratio,annulus_ratio,shell_ratio\n";
  for (const RatioRow& r : table.rows)
    out << r.label << ',' << detail::fmt_double(r.volume) << ','
        << detail::fmt_double(r.inner_ratio) << ','
        << detail::fmt_double(r.annulus_ratio) << ','
        << detail::fmt_double(r.shell_ratio) << '\n';
}

}  // namespace kpd
