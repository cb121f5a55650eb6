#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "stackyfan/integer.hpp"
#include "stackyfan/lattice.hpp"

namespace stackyfan {

namespace detail {

struct DoubleDescription {
  IntMatrix rays;       // extreme rays modulo the lineality space
  IntMatrix lineality;  // basis of the lineality space
};

// Incremental double description of {x in Q^d : <a, x> >= 0 for a in ineqs}.
// Starts from Q^d (lineality = standard basis, no rays) and inserts one
// halfspace at a time. Adjacency of rays is decided combinatorially.
inline DoubleDescription double_description(const IntMatrix& ineqs, std::size_t d) {
  DoubleDescription dd;
  for (std::size_t i = 0; i < d; ++i) {
    IntVector e = zero_vector(d);
    e[i] = 1;
    dd.lineality.push_back(std::move(e));
  }
  IntMatrix inserted;

  for (const auto& a : ineqs) {
    require_dim(a.size(), d, "double_description");
    if (is_zero(a)) continue;

    std::size_t li = dd.lineality.size();
    for (std::size_t i = 0; i < dd.lineality.size(); ++i) {
      if (dot(a, dd.lineality[i]) != 0) {
        li = i;
        break;
      }
    }

    if (li != dd.lineality.size()) {
      // The halfspace cuts the lineality space: one lineality direction turns
      // into a ray and everything else is projected into a^perp.
      IntVector l = dd.lineality[li];
      Integer s = dot(a, l);
      if (s < 0) {
        l = -l;
        s = -s;
      }
      IntMatrix lin;
      for (std::size_t i = 0; i < dd.lineality.size(); ++i) {
        if (i == li) continue;
        IntVector v = dd.lineality[i];
        combine_into(v, s, l, dot(a, v));
        lin.push_back(primitive(std::move(v)));
      }
      for (auto& r : dd.rays) {
        Integer ar = dot(a, r);
        if (ar != 0) {
          combine_into(r, s, l, ar);
          r = primitive(std::move(r));
        }
      }
      dd.rays.push_back(primitive(std::move(l)));
      dd.lineality = std::move(lin);
      inserted.push_back(a);
      continue;
    }

    const std::size_t n = dd.rays.size();
    std::vector<Integer> val(n);
    for (std::size_t i = 0; i < n; ++i) val[i] = dot(a, dd.rays[i]);
    std::vector<std::vector<bool>> tight(n, std::vector<bool>(inserted.size()));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < inserted.size(); ++j) tight[i][j] = dot(inserted[j], dd.rays[i]) == 0;
    }

    IntMatrix next;
    for (std::size_t i = 0; i < n; ++i) {
      if (val[i] >= 0) next.push_back(dd.rays[i]);
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (val[p] <= 0) continue;
      for (std::size_t q = 0; q < n; ++q) {
        if (val[q] >= 0) continue;
        std::vector<bool> common(inserted.size());
        for (std::size_t j = 0; j < inserted.size(); ++j) common[j] = tight[p][j] && tight[q][j];
        bool adjacent = true;
        for (std::size_t r = 0; r < n && adjacent; ++r) {
          if (r == p || r == q) continue;
          bool covers = true;
          for (std::size_t j = 0; j < inserted.size(); ++j) {
            if (common[j] && !tight[r][j]) {
              covers = false;
              break;
            }
          }
          if (covers) adjacent = false;
        }
        if (!adjacent) continue;
        IntVector v = dd.rays[q];
        combine_into(v, val[p], dd.rays[p], val[q]);
        next.push_back(primitive(std::move(v)));
      }
    }
    dd.rays = std::move(next);
    inserted.push_back(a);
  }
  std::sort(dd.rays.begin(), dd.rays.end());
  dd.rays.erase(std::unique(dd.rays.begin(), dd.rays.end()), dd.rays.end());
  return dd;
}

// Orthogonal projection of n onto Span_Q(basis), scaled to a primitive vector.
inline IntVector project_primitive(const IntVector& n, const IntMatrix& basis) {
  const std::size_t k = basis.size();
  // Normal equations (B B^T) c = B n.
  IntMatrix gram(k, zero_vector(k));
  RatVector rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram[i][j] = dot(basis[i], basis[j]);
    rhs[i] = Rational(dot(basis[i], n));
  }
  RatVector c = *solve_coordinates(gram, rhs);  // gram is symmetric
  RatVector p(n.size(), Rational(0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n.size(); ++j) p[j] += c[i] * Rational(basis[i][j]);
  }
  return primitive(p);
}

}  // namespace detail

// A pointed rational polyhedral cone in Q^d, kept in canonical form:
// primitive extreme rays and inward primitive facet normals, each sorted
// lexicographically. Facet normals of a lower-dimensional cone are taken
// inside its linear span; `equations` cut out that span.
class Cone {
 public:
  Cone() = default;

  static Cone zero(std::size_t d) {
    Cone c;
    c.ambient_dim_ = d;
    c.equations_ = Sublattice::full(d).basis();
    return c;
  }

  static Cone from_generators(const IntMatrix& gens, std::size_t d);

  static Cone from_generators(const IntMatrix& gens) {
    if (gens.empty()) throw PreconditionError("cone_from_generators: empty generator list");
    return from_generators(gens, gens.front().size());
  }

  // {x : <a, x> >= 0 for every a}. Throws if the result contains a line.
  static Cone from_inequalities(const IntMatrix& ineqs, std::size_t d) {
    auto dd = detail::double_description(ineqs, d);
    if (!dd.lineality.empty()) throw PreconditionError("cone contains a line (not pointed)");
    if (dd.rays.empty()) return zero(d);
    return from_generators(dd.rays, d);
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return dim_; }
  const IntMatrix& rays() const { return rays_; }
  const IntMatrix& facets() const { return facets_; }
  const IntMatrix& equations() const { return equations_; }
  bool is_full_dimensional() const { return dim_ == ambient_dim_; }

  // Halfspace description including both signs of each equation.
  IntMatrix inequalities() const {
    IntMatrix out = facets_;
    for (const auto& e : equations_) {
      out.push_back(e);
      out.push_back(-e);
    }
    return out;
  }

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.rays_ == b.rays_;
  }
  friend bool operator!=(const Cone& a, const Cone& b) { return !(a == b); }
  friend bool operator<(const Cone& a, const Cone& b) {
    if (a.ambient_dim_ != b.ambient_dim_) return a.ambient_dim_ < b.ambient_dim_;
    return a.rays_ < b.rays_;
  }

 private:
  std::size_t ambient_dim_ = 0;
  std::size_t dim_ = 0;
  IntMatrix rays_;
  IntMatrix facets_;
  IntMatrix equations_;
};

inline Cone Cone::from_generators(const IntMatrix& gens, std::size_t d) {
  std::set<IntVector> uniq;
  for (const auto& g : gens) {
    require_dim(g.size(), d, "cone_from_generators");
    if (!is_zero(g)) uniq.insert(primitive(g));
  }
  if (uniq.empty()) return zero(d);
  IntMatrix prim(uniq.begin(), uniq.end());

  Cone c;
  c.ambient_dim_ = d;
  c.equations_ = integer_kernel(prim, d).basis();
  c.dim_ = d - c.equations_.size();

  // Facets of the cone are the extreme rays of its dual, projected into the span.
  auto dual = detail::double_description(prim, d);
  const IntMatrix span_basis = c.dim_ == d ? IntMatrix{} : saturation(prim, d).basis();
  std::set<IntVector> facets;
  for (const auto& n : dual.rays) {
    facets.insert(c.dim_ == d ? primitive(n) : detail::project_primitive(n, span_basis));
  }
  c.facets_.assign(facets.begin(), facets.end());

  IntMatrix all = c.facets_;
  all.insert(all.end(), c.equations_.begin(), c.equations_.end());
  if (rank(all) != d) throw PreconditionError("cone contains a line (not pointed)");

  for (const auto& g : prim) {
    IntMatrix tight = c.equations_;
    for (const auto& n : c.facets_) {
      if (dot(n, g) == 0) tight.push_back(n);
    }
    if (rank(tight) == d - 1) c.rays_.push_back(g);
  }
  return c;
}

inline Cone cone_from_generators(const IntMatrix& gens) { return Cone::from_generators(gens); }

inline IntVector primitive_generator(const Cone& ray) {
  if (ray.dim() != 1) throw PreconditionError("primitive_generator: cone is not a ray");
  return ray.rays().front();
}

inline bool contains(const Cone& c, const RatVector& x) {
  require_dim(x.size(), c.ambient_dim(), "contains");
  for (const auto& e : c.equations()) {
    if (dot(e, x) != 0) return false;
  }
  for (const auto& n : c.facets()) {
    if (dot(n, x) < 0) return false;
  }
  return true;
}

inline bool contains(const Cone& c, const IntVector& x) {
  require_dim(x.size(), c.ambient_dim(), "contains");
  for (const auto& e : c.equations()) {
    if (dot(e, x) != 0) return false;
  }
  for (const auto& n : c.facets()) {
    if (dot(n, x) < 0) return false;
  }
  return true;
}

inline bool contains_cone(const Cone& c, const Cone& inner) {
  require_dim(inner.ambient_dim(), c.ambient_dim(), "contains_cone");
  return std::all_of(inner.rays().begin(), inner.rays().end(),
                     [&](const IntVector& r) { return contains(c, r); });
}

inline Cone intersect_cones(const Cone& a, const Cone& b) {
  require_dim(a.ambient_dim(), b.ambient_dim(), "intersect_cones");
  IntMatrix ineqs = a.inequalities();
  IntMatrix more = b.inequalities();
  ineqs.insert(ineqs.end(), more.begin(), more.end());
  return Cone::from_inequalities(ineqs, a.ambient_dim());
}

// c intersected with {x : <normal, x> >= 0}.
inline Cone intersect_halfspace(const Cone& c, const IntVector& normal) {
  require_dim(normal.size(), c.ambient_dim(), "intersect_halfspace");
  IntMatrix ineqs = c.inequalities();
  ineqs.push_back(normal);
  return Cone::from_inequalities(ineqs, c.ambient_dim());
}

inline bool interiors_overlap(const Cone& a, const Cone& b) {
  require_dim(a.ambient_dim(), b.ambient_dim(), "interiors_overlap");
  if (!a.is_full_dimensional() || !b.is_full_dimensional()) {
    throw PreconditionError("interiors_overlap: cones must be full-dimensional");
  }
  return intersect_cones(a, b).is_full_dimensional();
}

inline bool is_simplicial(const Cone& c) { return c.rays().size() == c.dim(); }

// The face of c cut out by the facets tight at every point of `on`.
inline Cone face_through(const Cone& c, const IntMatrix& on) {
  IntMatrix rays;
  std::vector<const IntVector*> tight;
  for (const auto& n : c.facets()) {
    bool all = std::all_of(on.begin(), on.end(), [&](const IntVector& x) { return dot(n, x) == 0; });
    if (all) tight.push_back(&n);
  }
  for (const auto& r : c.rays()) {
    bool all = std::all_of(tight.begin(), tight.end(), [&](const IntVector* n) { return dot(*n, r) == 0; });
    if (all) rays.push_back(r);
  }
  return Cone::from_generators(rays, c.ambient_dim());
}

// Smallest face of c containing x; x must lie in c.
inline Cone minimal_face(const Cone& c, const RatVector& x) {
  if (!contains(c, x)) throw PreconditionError("minimal_face: point is not in the cone");
  IntMatrix rays;
  std::vector<const IntVector*> tight;
  for (const auto& n : c.facets()) {
    if (dot(n, x) == 0) tight.push_back(&n);
  }
  for (const auto& r : c.rays()) {
    bool all = std::all_of(tight.begin(), tight.end(), [&](const IntVector* n) { return dot(*n, r) == 0; });
    if (all) rays.push_back(r);
  }
  return Cone::from_generators(rays, c.ambient_dim());
}

inline bool is_face(const Cone& f, const Cone& c) {
  if (!contains_cone(c, f)) return false;
  return face_through(c, f.rays()) == f;
}

// Every face of c, including {0} and c itself, ordered by (dim, rays).
inline std::vector<Cone> faces(const Cone& c) {
  const std::size_t n = c.rays().size();
  using Mask = std::vector<bool>;
  std::set<Mask> masks;
  masks.insert(Mask(n, true));
  std::vector<Mask> facet_masks;
  for (const auto& f : c.facets()) {
    Mask m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = dot(f, c.rays()[i]) == 0;
    facet_masks.push_back(m);
  }
  std::vector<Mask> frontier(masks.begin(), masks.end());
  while (!frontier.empty()) {
    std::vector<Mask> next;
    for (const auto& m : frontier) {
      for (const auto& fm : facet_masks) {
        Mask x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = m[i] && fm[i];
        if (masks.insert(x).second) next.push_back(x);
      }
    }
    frontier = std::move(next);
  }
  std::vector<Cone> out;
  for (const auto& m : masks) {
    IntMatrix rays;
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i]) rays.push_back(c.rays()[i]);
    }
    out.push_back(Cone::from_generators(rays, c.ambient_dim()));
  }
  std::sort(out.begin(), out.end(), [](const Cone& a, const Cone& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a < b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Codimension-one faces of c.
inline std::vector<Cone> facet_cones(const Cone& c) {
  std::vector<Cone> out;
  for (const auto& n : c.facets()) {
    IntMatrix rays;
    for (const auto& r : c.rays()) {
      if (dot(n, r) == 0) rays.push_back(r);
    }
    out.push_back(Cone::from_generators(rays, c.ambient_dim()));
  }
  return out;
}

}  // namespace stackyfan
