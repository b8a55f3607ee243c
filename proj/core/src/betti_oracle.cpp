#include "kpd/betti_oracle.hpp"

#include <stdexcept>
#include <vector>

namespace kpd {

namespace {

struct Bits {
  std::vector<std::uint64_t> w;

  explicit Bits(int nbits) : w((nbits + 63) / 64, 0) {}
  void set(int i) { w[i >> 6] |= 1ull << (i & 63); }
  bool any() const {
    for (std::uint64_t x : w)
      if (x) return true;
    return false;
  }
  int top() const {  // highest set bit, -1 if none
    for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i)
      if (w[i]) return i * 64 + 63 - __builtin_clzll(w[i]);
    return -1;
  }
  void operator^=(const Bits& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
  }
};

// In-place elimination; returns rank. Pivot on the highest set bit.
std::int64_t gf2_rank(std::vector<Bits>& cols, int nrows) {
  std::vector<int> owner(nrows, -1);
  std::int64_t rank = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    int t;
    while ((t = cols[j].top()) >= 0 && owner[t] >= 0) cols[j] ^= cols[owner[t]];
    if (t >= 0) {
      owner[t] = static_cast<int>(j);
      ++rank;
    }
  }
  return rank;
}

}  // namespace

std::int64_t persistent_betti_oracle(const FilteredComplex& cx, int q, double r,
                                     double s) {
  if (cx.size() > 5000)
    throw std::invalid_argument("oracle: refuses complexes above 5000 simplices");
  if (q < 0 || q > cx.q_max())
    throw std::invalid_argument("oracle: q outside [0, q_max]");
  if (!(r >= 0.0) || !(r <= s) || !(s <= cx.t_max()))
    throw std::invalid_argument("oracle: needs 0 <= r <= s <= t_max");

  const auto& simp = cx.simplices();

  // Rows of C_q at level s; the level-r simplices form a prefix.
  std::vector<std::int32_t> q_rows;
  std::vector<std::int32_t> row_of(simp.size(), -1);
  int n_r = 0;
  for (std::size_t j = 0; j < simp.size(); ++j) {
    if (simp[j].dim() != q || simp[j].birth > s) continue;
    row_of[j] = static_cast<std::int32_t>(q_rows.size());
    q_rows.push_back(static_cast<std::int32_t>(j));
    if (simp[j].birth <= r) ++n_r;
  }
  const int nrows = static_cast<int>(q_rows.size());
  if (nrows == 0) return 0;

  // Cycle basis of Z_q at level r via kernel of the boundary map.
  std::vector<Bits> Z;
  if (q == 0) {
    Z.reserve(n_r);
    for (int i = 0; i < n_r; ++i) {
      Bits b(nrows);
      b.set(i);
      Z.push_back(std::move(b));
    }
  } else {
    std::vector<std::int32_t> f_rows;  // (q-1)-simplices at level r
    std::vector<std::int32_t> f_row_of(simp.size(), -1);
    for (std::size_t j = 0; j < simp.size(); ++j) {
      if (simp[j].dim() != q - 1 || simp[j].birth > r) continue;
      f_row_of[j] = static_cast<std::int32_t>(f_rows.size());
      f_rows.push_back(static_cast<std::int32_t>(j));
    }
    const int fnrows = static_cast<int>(f_rows.size());

    // Facet lookup by vertex list within the (q-1)-row set.
    auto find_facet = [&](const std::vector<std::int32_t>& verts) {
      for (std::int32_t fj : f_rows)
        if (simp[fj].vertices == verts) return f_row_of[fj];
      return std::int32_t(-1);
    };

    std::vector<Bits> cols;
    std::vector<Bits> combos;
    std::vector<int> owner(fnrows, -1);
    std::vector<std::int32_t> facet;
    for (int c = 0; c < n_r; ++c) {
      const Simplex& sx = simp[q_rows[c]];
      Bits col(fnrows > 0 ? fnrows : 1);
      facet.resize(sx.vertices.size() - 1);
      for (std::size_t drop = 0; drop < sx.vertices.size(); ++drop) {
        std::size_t w = 0;
        for (std::size_t a = 0; a < sx.vertices.size(); ++a)
          if (a != drop) facet[w++] = sx.vertices[a];
        const std::int32_t fr = find_facet(facet);
        if (fr < 0) throw std::logic_error("oracle: face closure violated");
        col.set(fr);
      }
      Bits combo(nrows);
      combo.set(c);
      int t;
      while ((t = col.top()) >= 0 && owner[t] >= 0) {
        col ^= cols[owner[t]];
        combo ^= combos[owner[t]];
      }
      if (t >= 0) {
        owner[t] = static_cast<int>(cols.size());
        cols.push_back(std::move(col));
        combos.push_back(std::move(combo));
      } else {
        Z.push_back(std::move(combo));
      }
    }
  }

  // Boundary columns of (q+1)-simplices at level s.
  std::vector<Bits> B;
  std::vector<std::int32_t> facet;
  for (std::size_t j = 0; j < simp.size(); ++j) {
    if (simp[j].dim() != q + 1 || simp[j].birth > s) continue;
    const Simplex& sx = simp[j];
    Bits col(nrows);
    facet.resize(sx.vertices.size() - 1);
    for (std::size_t drop = 0; drop < sx.vertices.size(); ++drop) {
      std::size_t w = 0;
      for (std::size_t a = 0; a < sx.vertices.size(); ++a)
        if (a != drop) facet[w++] = sx.vertices[a];
      std::int32_t fr = -1;
      for (std::int32_t qi : q_rows)
        if (simp[qi].vertices == facet) {
          fr = row_of[qi];
          break;
        }
      if (fr < 0) throw std::logic_error("oracle: face closure violated");
      col.set(fr);
    }
    B.push_back(std::move(col));
  }

  std::vector<Bits> zb = Z;
  for (const Bits& b : B) zb.push_back(b);
  const std::int64_t rank_zb = gf2_rank(zb, nrows);
  const std::int64_t rank_b = gf2_rank(B, nrows);
  return rank_zb - rank_b;
}

}  // namespace kpd
