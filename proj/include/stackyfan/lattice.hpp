#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "stackyfan/integer.hpp"

// Exact integer linear algebra on subgroups of Z^d.
//
// Every Sublattice carries its basis in row-style Hermite normal form: rows are
// ordered by pivot column, pivots are positive, and the entries above each
// pivot are reduced into [0, pivot). Two sublattices are equal iff their bases
// are identical.

namespace stackyfan {

class Sublattice;

Sublattice hnf(const IntMatrix& rows, std::size_t ambient_dim);

class Sublattice {
 public:
  Sublattice() = default;

  static Sublattice zero(std::size_t d) {
    Sublattice l;
    l.ambient_dim_ = d;
    return l;
  }

  static Sublattice full(std::size_t d) {
    IntMatrix rows(d, zero_vector(d));
    for (std::size_t i = 0; i < d; ++i) rows[i][i] = 1;
    return hnf(rows, d);
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t rank() const { return basis_.size(); }
  const IntMatrix& basis() const { return basis_; }

  friend bool operator==(const Sublattice& a, const Sublattice& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Sublattice& a, const Sublattice& b) { return !(a == b); }
  friend bool operator<(const Sublattice& a, const Sublattice& b) {
    if (a.ambient_dim_ != b.ambient_dim_) return a.ambient_dim_ < b.ambient_dim_;
    return a.basis_ < b.basis_;
  }

 private:
  friend Sublattice hnf(const IntMatrix& rows, std::size_t ambient_dim);

  std::size_t ambient_dim_ = 0;
  IntMatrix basis_;
};

namespace detail {

struct ExtendedGcd {
  Integer g, s, t;  // s*a + t*b = g >= 0
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  // Keep x untouched up to sign when it already divides y, so elimination
  // never reintroduces entries in a cleared column.
  if (a != 0 && b % a == 0) return {abs(a), Integer(a < 0 ? -1 : 1), Integer(0)};
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - q * s;
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t - q * t;
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

// Replaces (x, y) by (s*x + t*y, (a/g)*y - (b/g)*x) where a, b are the entries
// of x, y at `col`. The 2x2 transform is unimodular and clears y[col].
inline void gcd_rows(IntVector& x, IntVector& y, std::size_t col) {
  const Integer a = x[col];
  const Integer b = y[col];
  auto [g, s, t] = extended_gcd(a, b);
  const Integer ag = a / g, bg = b / g;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Integer nx = s * x[i] + t * y[i];
    Integer ny = ag * y[i] - bg * x[i];
    x[i] = std::move(nx);
    y[i] = std::move(ny);
  }
}

inline std::size_t pivot_column(const IntVector& row) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] != 0) return j;
  }
  return row.size();
}

// Floor division for Integer; boost truncates toward zero.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

// In-place row HNF; returns the number of nonzero rows, which come first.
inline std::size_t echelonize(IntMatrix& m, std::size_t d) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < d && r < m.size(); ++col) {
    std::size_t first = r;
    while (first < m.size() && m[first][col] == 0) ++first;
    if (first == m.size()) continue;
    std::swap(m[r], m[first]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][col] != 0) gcd_rows(m[r], m[i], col);
    }
    if (m[r][col] < 0) {
      for (auto& x : m[r]) x = -x;
    }
    for (std::size_t j = 0; j < r; ++j) {
      if (m[j][col] == 0) continue;
      Integer q = floor_div(m[j][col], m[r][col]);
      if (q != 0) combine_into(m[j], Integer(1), m[r], q);
    }
    ++r;
  }
  return r;
}

// Smith normal form U*M*V = D of a rows x cols matrix. Only the diagonal and
// V^{-1} are kept; row transforms are not tracked.
struct SmithForm {
  std::vector<Integer> diagonal;  // min(rows, cols) entries, d_1 | d_2 | ...
  IntMatrix v_inverse;            // cols x cols, unimodular
};

inline SmithForm smith_form(IntMatrix m, std::size_t cols) {
  const std::size_t rows = m.size();
  SmithForm out;
  out.v_inverse.assign(cols, zero_vector(cols));
  for (std::size_t i = 0; i < cols; ++i) out.v_inverse[i][i] = 1;
  auto& vinv = out.v_inverse;

  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (auto& row : m) std::swap(row[a], row[b]);
    std::swap(vinv[a], vinv[b]);
  };
  // Column analogue of gcd_rows, with the inverse transform applied to vinv.
  auto gcd_cols = [&](std::size_t t, std::size_t j) {
    const Integer a = m[t][t];
    const Integer b = m[t][j];
    auto [g, s, u] = extended_gcd(a, b);
    const Integer ag = a / g, bg = b / g;
    for (auto& row : m) {
      Integer nt = s * row[t] + u * row[j];
      Integer nj = ag * row[j] - bg * row[t];
      row[t] = std::move(nt);
      row[j] = std::move(nj);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      Integer nt = ag * vinv[t][c] + bg * vinv[j][c];
      Integer nj = s * vinv[j][c] - u * vinv[t][c];
      vinv[t][c] = std::move(nt);
      vinv[j][c] = std::move(nj);
    }
  };

  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    bool empty = false;
    for (;;) {
      std::size_t bi = rows, bj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (m[i][j] == 0) continue;
          if (bi == rows || abs(m[i][j]) < abs(m[bi][bj])) {
            bi = i;
            bj = j;
          }
        }
      }
      if (bi == rows) {
        empty = true;
        break;
      }
      std::swap(m[t], m[bi]);
      swap_cols(t, bj);
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] != 0) gcd_rows(m[t], m[i], t);
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] != 0) gcd_cols(t, j);
      }
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows && !dirty; ++i) dirty = m[i][t] != 0;
      if (dirty) continue;
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (m[i][j] % m[t][t] != 0) {
            bad = i;
            break;
          }
        }
      }
      if (bad == rows) break;
      combine_into(m[t], Integer(1), m[bad], Integer(-1));
    }
    if (empty) {
      out.diagonal.resize(n, Integer(0));
      return out;
    }
    if (m[t][t] < 0) {
      for (auto& x : m[t]) x = -x;
    }
    out.diagonal.push_back(m[t][t]);
  }
  return out;
}

}  // namespace detail

// Sublattice generated by `rows`, in canonical HNF.
inline Sublattice hnf(const IntMatrix& rows, std::size_t ambient_dim) {
  IntMatrix m;
  m.reserve(rows.size());
  for (const auto& r : rows) {
    require_dim(r.size(), ambient_dim, "hnf");
    if (!is_zero(r)) m.push_back(r);
  }
  const std::size_t r = detail::echelonize(m, ambient_dim);
  m.resize(r);
  Sublattice out;
  out.ambient_dim_ = ambient_dim;
  out.basis_ = std::move(m);
  return out;
}

inline Sublattice hnf(const IntMatrix& rows) {
  if (rows.empty()) throw DimensionMismatch("hnf: ambient dimension of an empty row set is unknown");
  return hnf(rows, rows.front().size());
}

// Integer coefficients of v in the HNF basis of l, if v is in l.
inline std::optional<IntVector> coordinates(IntVector v, const Sublattice& l) {
  require_dim(v.size(), l.ambient_dim(), "coordinates");
  IntVector coeff(l.rank(), Integer(0));
  for (std::size_t i = 0; i < l.rank(); ++i) {
    const IntVector& row = l.basis()[i];
    const std::size_t p = detail::pivot_column(row);
    for (std::size_t j = 0; j < p; ++j) {
      if (v[j] != 0) return std::nullopt;
    }
    if (v[p] % row[p] != 0) return std::nullopt;
    coeff[i] = v[p] / row[p];
    if (coeff[i] != 0) combine_into(v, Integer(1), row, coeff[i]);
  }
  if (!is_zero(v)) return std::nullopt;
  return coeff;
}

inline bool member(const IntVector& v, const Sublattice& l) { return coordinates(v, l).has_value(); }

inline bool is_subset(const Sublattice& sub, const Sublattice& sup) {
  require_dim(sub.ambient_dim(), sup.ambient_dim(), "is_subset");
  for (const auto& b : sub.basis()) {
    if (!member(b, sup)) return false;
  }
  return true;
}

// [sup : sub]. Requires sub to be a subgroup of sup of the same rank.
inline Integer index(const Sublattice& sub, const Sublattice& sup) {
  require_dim(sub.ambient_dim(), sup.ambient_dim(), "index");
  if (sub.rank() != sup.rank()) throw PreconditionError("index: ranks differ, index is infinite");
  IntMatrix change;
  change.reserve(sub.rank());
  for (const auto& b : sub.basis()) {
    auto c = coordinates(b, sup);
    if (!c) throw PreconditionError("index: " + to_string(b) + " is not in the larger lattice");
    change.push_back(std::move(*c));
  }
  if (change.empty()) return 1;
  const auto smith = detail::smith_form(std::move(change), sup.rank());
  Integer det = 1;
  for (const auto& x : smith.diagonal) det *= x;
  return det;
}

inline Sublattice intersect(const Sublattice& a, const Sublattice& b) {
  require_dim(a.ambient_dim(), b.ambient_dim(), "intersect");
  const std::size_t d = a.ambient_dim();
  // Rows (x, x) for x in a and (y, 0) for y in b; the elements with vanishing
  // first half are exactly (0, z) with z in a and b.
  IntMatrix m;
  for (const auto& x : a.basis()) {
    IntVector row = x;
    row.insert(row.end(), x.begin(), x.end());
    m.push_back(std::move(row));
  }
  for (const auto& y : b.basis()) {
    IntVector row = y;
    row.resize(2 * d, Integer(0));
    m.push_back(std::move(row));
  }
  const std::size_t r = detail::echelonize(m, 2 * d);
  IntMatrix tail;
  for (std::size_t i = 0; i < r; ++i) {
    if (detail::pivot_column(m[i]) >= d) tail.emplace_back(m[i].begin() + d, m[i].end());
  }
  return hnf(tail, d);
}

// {x in Z^d : <row, x> = 0 for every row}.
inline Sublattice integer_kernel(const IntMatrix& rows, std::size_t d) {
  const std::size_t k = rows.size();
  IntMatrix m(d, zero_vector(k + d));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      require_dim(rows[i].size(), d, "integer_kernel");
      m[j][i] = rows[i][j];
    }
    m[j][k + j] = 1;
  }
  const std::size_t r = detail::echelonize(m, k + d);
  IntMatrix tail;
  for (std::size_t i = 0; i < r; ++i) {
    if (detail::pivot_column(m[i]) >= k) tail.emplace_back(m[i].begin() + k, m[i].end());
  }
  return hnf(tail, d);
}

// Z^d intersected with the rational span of `vectors`.
inline Sublattice saturation(const IntMatrix& vectors, std::size_t d) {
  return integer_kernel(integer_kernel(vectors, d).basis(), d);
}

// l intersected with Span_Q(s).
inline Sublattice saturate(const Sublattice& l, const IntMatrix& s) {
  for (const auto& v : s) require_dim(v.size(), l.ambient_dim(), "saturate");
  return intersect(l, saturation(s, l.ambient_dim()));
}

// Points of l in the half-open parallelepiped {sum t_i rho_i : 0 <= t_i < 1},
// sorted lexicographically. One point per coset of span(rho) in
// saturate(l, rho), enumerated from the Smith diagonal.
inline std::vector<IntVector> parallelepiped_points(const IntMatrix& rho, const Sublattice& l) {
  const std::size_t d = l.ambient_dim();
  for (const auto& v : rho) {
    require_dim(v.size(), d, "parallelepiped_points");
    if (!member(v, l)) throw PreconditionError("parallelepiped_points: " + to_string(v) + " is not in the lattice");
  }
  const std::size_t k = rho.size();
  if (rank(rho) != k) throw PreconditionError("parallelepiped_points: generators are linearly dependent");
  if (k == 0) return {zero_vector(d)};

  const Sublattice sat = saturate(l, rho);
  IntMatrix change;  // rho = change * sat.basis()
  for (const auto& v : rho) change.push_back(*coordinates(v, sat));
  const auto smith = detail::smith_form(change, k);

  std::vector<IntVector> out;
  IntVector z(k, Integer(0));
  for (;;) {
    // y = z * V^{-1} represents one coset of the row lattice of `change`.
    RatVector y(k, Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
      if (z[i] == 0) continue;
      for (std::size_t c = 0; c < k; ++c) y[c] += Rational(z[i] * smith.v_inverse[i][c]);
    }
    RatVector t = *solve_coordinates(change, y);
    for (auto& ti : t) ti -= floor_of(ti);
    IntVector x = zero_vector(d);
    RatVector acc(d, Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
      if (t[i] == 0) continue;
      for (std::size_t c = 0; c < d; ++c) acc[c] += t[i] * Rational(rho[i][c]);
    }
    for (std::size_t c = 0; c < d; ++c) {
      if (boost::multiprecision::denominator(acc[c]) != 1) {
        throw InternalError("parallelepiped_points: non-integral coset representative");
      }
      x[c] = boost::multiprecision::numerator(acc[c]);
    }
    out.push_back(std::move(x));

    std::size_t i = 0;
    for (; i < k; ++i) {
      z[i] += 1;
      if (z[i] < smith.diagonal[i]) break;
      z[i] = 0;
    }
    if (i == k) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace stackyfan
