#include "kpd/point_set.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "kpd/detail/format.hpp"
#include "kpd/errors.hpp"

namespace kpd {

MarkedPointSet::MarkedPointSet(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("point set: dimension must be >= 1");
}

MarkedPointSet::MarkedPointSet(int dim, std::vector<double> coords,
                               std::vector<Mark> marks)
    : dim_(dim), coords_(std::move(coords)), marks_(std::move(marks)) {
  if (dim < 1) throw std::invalid_argument("point set: dimension must be >= 1");
  if (coords_.size() != marks_.size() * static_cast<std::size_t>(dim))
    throw std::invalid_argument("point set: coords/marks size mismatch");
  check_simplicity();
}

void MarkedPointSet::add(std::span<const double> pos, Mark mark) {
  if (static_cast<int>(pos.size()) != dim_)
    throw std::invalid_argument("point set: position dimension mismatch");
  coords_.insert(coords_.end(), pos.begin(), pos.end());
  marks_.push_back(std::move(mark));
}

void MarkedPointSet::check_simplicity() const {
  const int n = size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    auto pa = position(a), pb = position(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });
  for (int k = 0; k + 1 < n; ++k) {
    auto pa = position(order[k]), pb = position(order[k + 1]);
    if (std::equal(pa.begin(), pa.end(), pb.begin())) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "simplicity violated: points %d and %d share a position",
                    order[k], order[k + 1]);
      throw simplicity_error(buf);
    }
  }
}

void write_points_csv(const MarkedPointSet& set, std::ostream& out) {
  for (int k = 1; k <= set.dim(); ++k) out << "x" << k << ",";
  out << "mark_kind,mark_value\n";
  for (int i = 0; i < set.size(); ++i) {
    auto p = set.position(i);
    for (double c : p) out << detail::fmt_double(c) << ",";
    const Mark& m = set.mark(i);
    out << mark_kind_name(mark_kind(m)) << "," << detail::fmt_double(mark_value(m))
        << "\n";
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void fail_line(std::size_t lineno, const std::string& what) {
  std::ostringstream os;
  os << "points csv: line " << lineno << ": " << what;
  throw std::runtime_error(os.str());
}

}  // namespace

MarkedPointSet read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("points csv: empty input");
  auto header = split_csv_line(line);
  if (header.size() < 3 || header[header.size() - 2] != "mark_kind" ||
      header.back() != "mark_value")
    fail_line(1, "expected header x1,...,xd,mark_kind,mark_value");
  const int dim = static_cast<int>(header.size()) - 2;
  for (int k = 0; k < dim; ++k)
    if (header[k] != "x" + std::to_string(k + 1))
      fail_line(1, "expected coordinate column x" + std::to_string(k + 1));

  MarkedPointSet set(dim);
  std::vector<double> pos(dim);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (static_cast<int>(f.size()) != dim + 2)
      fail_line(lineno, "expected " + std::to_string(dim + 2) + " fields, got " +
                            std::to_string(f.size()));
    for (int k = 0; k < dim; ++k) {
      try {
        std::size_t used = 0;
        pos[k] = std::stod(f[k], &used);
        if (used != f[k].size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        fail_line(lineno, "bad coordinate '" + f[k] + "'");
      }
    }
    MarkKind kind;
    const std::string& kn = f[dim];
    if (kn == "radius")
      kind = MarkKind::Radius;
    else if (kn == "growth")
      kind = MarkKind::Growth;
    else if (kn == "shape")
      kind = MarkKind::Shape;
    else if (kn == "binary")
      kind = MarkKind::Binary;
    else
      fail_line(lineno, "unknown mark_kind '" + kn + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(f[dim + 1], &used);
      if (used != f[dim + 1].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      fail_line(lineno, "bad mark_value '" + f[dim + 1] + "'");
    }
    Mark m;
    try {
      m = make_mark(kind, value);
    } catch (const std::exception& e) {
      fail_line(lineno, e.what());
    }
    set.add(pos, m);
  }
  set.check_simplicity();
  return set;
}

}  // namespace kpd
