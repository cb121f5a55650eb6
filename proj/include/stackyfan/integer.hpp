#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace stackyfan {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Lattice points and integral directions in Z^d.
using IntVector = std::vector<Integer>;
// Points of N_R with exact rational coordinates.
using RatVector = std::vector<Rational>;
using IntMatrix = std::vector<IntVector>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A loop guard fired; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << got << " vs " << want << ")";
    throw DimensionMismatch(os.str());
  }
}

inline IntVector make_vector(std::initializer_list<long long> xs) {
  IntVector v;
  v.reserve(xs.size());
  for (long long x : xs) v.emplace_back(x);
  return v;
}

inline IntVector zero_vector(std::size_t d) { return IntVector(d, Integer(0)); }

inline bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

inline Integer gcd(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Integer content(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) {
    g = gcd(g, x);
    if (g == 1) break;
  }
  return g;
}

// Divides out the content; the zero vector is returned unchanged.
inline IntVector primitive(IntVector v) {
  Integer g = content(v);
  if (g > 1) {
    for (auto& x : v) x /= g;
  }
  return v;
}

// Clears denominators and divides out the content, keeping the direction.
inline IntVector primitive(const RatVector& v) {
  Integer l = 1;
  for (const auto& x : v) {
    Integer den = boost::multiprecision::denominator(x);
    l = l / gcd(l, den) * den;
  }
  IntVector out;
  out.reserve(v.size());
  for (const auto& x : v) {
    out.push_back(boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x)));
  }
  return primitive(std::move(out));
}

inline RatVector to_rational(const IntVector& v) {
  return RatVector(v.begin(), v.end());
}

inline Integer dot(const IntVector& a, const IntVector& b) {
  require_dim(a.size(), b.size(), "dot");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const IntVector& a, const RatVector& b) {
  require_dim(a.size(), b.size(), "dot");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
  return s;
}

inline IntVector operator+(IntVector a, const IntVector& b) {
  require_dim(a.size(), b.size(), "vector sum");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline IntVector operator-(IntVector a, const IntVector& b) {
  require_dim(a.size(), b.size(), "vector difference");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline IntVector operator-(IntVector a) {
  for (auto& x : a) x = -x;
  return a;
}

inline IntVector operator*(const Integer& s, IntVector a) {
  for (auto& x : a) x *= s;
  return a;
}

// `a*x - b*y` computed in place on x; the workhorse of every elimination below.
inline void combine_into(IntVector& x, const Integer& a, const IntVector& y, const Integer& b) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = a * x[i] - b * y[i];
}

inline std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ')';
  return os.str();
}

inline std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) os << ',';
    os << to_string(m[i]);
  }
  os << ']';
  return os.str();
}

// Rank over Q by fraction-free elimination.
inline std::size_t rank(IntMatrix rows) {
  std::size_t r = 0;
  const std::size_t d = rows.empty() ? 0 : rows.front().size();
  for (std::size_t col = 0; col < d && r < rows.size(); ++col) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      Integer g = gcd(rows[r][col], rows[i][col]);
      Integer a = rows[r][col] / g, b = rows[i][col] / g;
      combine_into(rows[i], a, rows[r], b);
      rows[i] = primitive(std::move(rows[i]));
    }
    ++r;
  }
  return r;
}

// Solves sum_i t_i * basis[i] = x over Q. Rows of `basis` must be linearly
// independent. Returns nullopt when x is outside their span.
inline std::optional<RatVector> solve_coordinates(const IntMatrix& basis, const RatVector& x) {
  const std::size_t k = basis.size();
  const std::size_t d = x.size();
  // Augmented system: columns are coordinates, unknowns are t_i.
  std::vector<std::vector<Rational>> m(d, std::vector<Rational>(k + 1));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      require_dim(basis[i].size(), d, "solve_coordinates");
      m[j][i] = basis[i][j];
    }
    m[j][k] = x[j];
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < k && row < d; ++col) {
    std::size_t piv = row;
    while (piv < d && m[piv][col] == 0) ++piv;
    if (piv == d) continue;
    std::swap(m[row], m[piv]);
    Rational inv = 1 / m[row][col];
    for (auto& e : m[row]) e *= inv;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == row || m[i][col] == 0) continue;
      Rational f = m[i][col];
      for (std::size_t c = col; c <= k; ++c) m[i][c] -= f * m[row][c];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < d; ++i) {
    if (m[i][k] != 0) return std::nullopt;
  }
  RatVector t(k, Rational(0));
  for (std::size_t i = 0; i < pivot_col.size(); ++i) t[pivot_col[i]] = m[i][k];
  return t;
}

// Outcome of a validation: empty means ok, otherwise one line per violation.
struct Report {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string v) { violations.push_back(std::move(v)); }
  void merge(const Report& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
};

inline Integer floor_of(const Rational& q) {
  Integer n = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);
  Integer f = n / den;
  if (n % den != 0 && n < 0) f -= 1;
  return f;
}

}  // namespace stackyfan
