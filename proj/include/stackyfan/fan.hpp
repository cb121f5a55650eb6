#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "stackyfan/cone.hpp"
#include "stackyfan/integer.hpp"
#include "stackyfan/lattice.hpp"

namespace stackyfan {

// A fan stored by its maximal cones, all full-dimensional. Faces are derived
// on demand.
class Fan {
 public:
  Fan() = default;

  Fan(std::size_t d, std::vector<Cone> max_cones) : ambient_dim_(d), max_cones_(std::move(max_cones)) {
    for (const auto& c : max_cones_) {
      require_dim(c.ambient_dim(), d, "Fan");
      if (!c.is_full_dimensional()) {
        throw PreconditionError("Fan: maximal cone " + to_string(c.rays()) + " is not full-dimensional");
      }
    }
    std::sort(max_cones_.begin(), max_cones_.end());
    max_cones_.erase(std::unique(max_cones_.begin(), max_cones_.end()), max_cones_.end());
    std::set<IntVector> rays;
    for (const auto& c : max_cones_) rays.insert(c.rays().begin(), c.rays().end());
    rays_.assign(rays.begin(), rays.end());
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  const std::vector<Cone>& max_cones() const { return max_cones_; }
  // Primitive generators of the one-dimensional cones, sorted.
  const IntMatrix& rays() const { return rays_; }

  std::size_t index_of(const Cone& c) const {
    auto it = std::lower_bound(max_cones_.begin(), max_cones_.end(), c);
    if (it == max_cones_.end() || *it != c) return max_cones_.size();
    return static_cast<std::size_t>(it - max_cones_.begin());
  }

  // Every cone of the fan, ordered by (dim, rays).
  std::vector<Cone> all_cones() const {
    std::set<Cone> seen;
    for (const auto& c : max_cones_) {
      for (auto& f : faces(c)) seen.insert(std::move(f));
    }
    std::vector<Cone> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(), [](const Cone& a, const Cone& b) { return a.dim() < b.dim(); });
    return out;
  }

  bool has_cone(const Cone& c) const {
    return std::any_of(max_cones_.begin(), max_cones_.end(), [&](const Cone& m) { return is_face(c, m); });
  }

  bool is_simplicial() const {
    return std::all_of(max_cones_.begin(), max_cones_.end(), [](const Cone& c) { return stackyfan::is_simplicial(c); });
  }

  friend bool operator==(const Fan& a, const Fan& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.max_cones_ == b.max_cones_;
  }
  friend bool operator!=(const Fan& a, const Fan& b) { return !(a == b); }

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<Cone> max_cones_;
  IntMatrix rays_;
};

inline Report validate_fan(const Fan& f) {
  Report report;
  const auto& cones = f.max_cones();
  for (std::size_t i = 0; i < cones.size(); ++i) {
    for (std::size_t j = i + 1; j < cones.size(); ++j) {
      Cone meet = intersect_cones(cones[i], cones[j]);
      if (!is_face(meet, cones[i]) || !is_face(meet, cones[j])) {
        std::ostringstream os;
        os << "cones " << to_string(cones[i].rays()) << " and " << to_string(cones[j].rays())
           << " meet in " << to_string(meet.rays()) << ", which is not a common face";
        report.add(os.str());
      }
    }
  }
  return report;
}

// Ridge pairing: a valid fan of full-dimensional pointed cones is complete iff
// every facet of a maximal cone is a facet of exactly two maximal cones.
inline bool is_complete(const Fan& f) {
  if (f.max_cones().empty()) return false;
  std::map<IntMatrix, int> ridges;
  for (const auto& c : f.max_cones()) {
    for (const auto& r : facet_cones(c)) ++ridges[r.rays()];
  }
  return std::all_of(ridges.begin(), ridges.end(), [](const auto& kv) { return kv.second == 2; });
}

struct Refinement {
  bool ok = false;
  // cone_map[i] = index in the coarse fan of the maximal cone containing fine cone i.
  std::vector<std::size_t> cone_map;
};

inline Refinement refines(const Fan& fine, const Fan& coarse) {
  require_dim(fine.ambient_dim(), coarse.ambient_dim(), "refines");
  Refinement out;
  for (const auto& c : fine.max_cones()) {
    std::size_t hit = coarse.max_cones().size();
    for (std::size_t j = 0; j < coarse.max_cones().size(); ++j) {
      if (contains_cone(coarse.max_cones()[j], c)) {
        hit = j;
        break;
      }
    }
    if (hit == coarse.max_cones().size()) {
      out.cone_map.clear();
      return out;
    }
    out.cone_map.push_back(hit);
  }
  out.ok = true;
  return out;
}

// The cone of f whose relative interior contains x.
inline Cone minimal_containing_cone(const Fan& f, const RatVector& x) {
  require_dim(x.size(), f.ambient_dim(), "minimal_containing_cone");
  for (const auto& c : f.max_cones()) {
    if (contains(c, x)) return minimal_face(c, x);
  }
  throw PreconditionError("minimal_containing_cone: point is outside the support of the fan");
}

inline Cone minimal_containing_cone(const Fan& f, const IntVector& x) {
  return minimal_containing_cone(f, to_rational(x));
}

// Star subdivision at the ray through p: every maximal cone containing the
// minimal cone pi of p is replaced by the cones over its facets that do not
// contain pi, joined with p.
inline Fan star_subdivide(const Fan& f, const IntVector& p) {
  require_dim(p.size(), f.ambient_dim(), "star_subdivide");
  if (is_zero(p)) throw PreconditionError("star_subdivide: center is the origin");
  const Cone pi = minimal_containing_cone(f, p);
  if (pi.dim() == 1) return f;
  const IntVector center = primitive(p);
  std::vector<Cone> out;
  for (const auto& c : f.max_cones()) {
    if (!contains_cone(c, pi)) {
      out.push_back(c);
      continue;
    }
    for (const auto& facet : facet_cones(c)) {
      if (contains_cone(facet, pi)) continue;
      IntMatrix gens = facet.rays();
      gens.push_back(center);
      out.push_back(Cone::from_generators(gens, f.ambient_dim()));
    }
  }
  return Fan(f.ambient_dim(), std::move(out));
}

namespace detail {

// Placing triangulation of a pointed cone using its rays in lexicographic
// order. No new rays are introduced.
inline std::vector<Cone> placing_triangulation(const Cone& c) {
  if (is_simplicial(c)) return {c};
  const IntMatrix& rays = c.rays();
  const std::size_t d = c.ambient_dim();
  using Simplex = std::vector<std::size_t>;
  std::vector<Simplex> cells;
  std::size_t current_rank = 0;
  IntMatrix placed;

  for (std::size_t i = 0; i < rays.size(); ++i) {
    placed.push_back(rays[i]);
    const std::size_t r = rank(placed);
    if (cells.empty()) {
      cells.push_back({i});
      current_rank = r;
      continue;
    }
    if (r > current_rank) {
      for (auto& s : cells) s.push_back(i);
      current_rank = r;
      continue;
    }
    // Boundary facets are those that belong to exactly one cell.
    std::map<Simplex, std::pair<int, std::size_t>> boundary;  // facet -> (count, opposite ray)
    for (const auto& s : cells) {
      for (std::size_t k = 0; k < s.size(); ++k) {
        Simplex g;
        for (std::size_t m = 0; m < s.size(); ++m) {
          if (m != k) g.push_back(s[m]);
        }
        auto& entry = boundary[g];
        entry.first += 1;
        entry.second = s[k];
      }
    }
    std::vector<Simplex> added;
    for (const auto& [g, entry] : boundary) {
      if (entry.first != 1) continue;
      IntMatrix grows;
      for (std::size_t idx : g) grows.push_back(rays[idx]);
      const IntVector& opposite = rays[entry.second];
      // Any functional vanishing on g and not on the opposite ray separates
      // the two sides of g within the current span.
      const Sublattice ker = integer_kernel(grows, d);
      const IntVector* normal = nullptr;
      for (const auto& b : ker.basis()) {
        if (dot(b, opposite) != 0) {
          normal = &b;
          break;
        }
      }
      if (normal == nullptr) throw InternalError("placing_triangulation: degenerate boundary facet");
      const Integer inside = dot(*normal, opposite);
      const Integer here = dot(*normal, rays[i]);
      if ((inside > 0 && here < 0) || (inside < 0 && here > 0)) {
        Simplex s = g;
        s.push_back(i);
        std::sort(s.begin(), s.end());
        added.push_back(std::move(s));
      }
    }
    if (added.empty()) throw InternalError("placing_triangulation: ray sees no boundary facet");
    cells.insert(cells.end(), added.begin(), added.end());
  }

  std::vector<Cone> out;
  for (const auto& s : cells) {
    IntMatrix gens;
    for (std::size_t idx : s) gens.push_back(rays[idx]);
    out.push_back(Cone::from_generators(gens, d));
  }
  return out;
}

}  // namespace detail

inline Fan triangulate(const Fan& f) {
  if (f.is_simplicial()) return f;
  std::vector<Cone> out;
  for (const auto& c : f.max_cones()) {
    auto cells = detail::placing_triangulation(c);
    out.insert(out.end(), cells.begin(), cells.end());
  }
  return Fan(f.ambient_dim(), std::move(out));
}

// Common refinement: the full-dimensional pairwise intersections.
inline Fan overlay(const Fan& a, const Fan& b) {
  require_dim(a.ambient_dim(), b.ambient_dim(), "overlay");
  std::vector<Cone> out;
  for (const auto& x : a.max_cones()) {
    for (const auto& y : b.max_cones()) {
      Cone meet = intersect_cones(x, y);
      if (meet.is_full_dimensional()) out.push_back(std::move(meet));
    }
  }
  return Fan(a.ambient_dim(), std::move(out));
}

}  // namespace stackyfan
