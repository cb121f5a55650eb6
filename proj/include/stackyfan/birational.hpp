#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <utility>
#include <variant>
#include <vector>

#include "stackyfan/cone.hpp"
#include "stackyfan/fan.hpp"
#include "stackyfan/integer.hpp"
#include "stackyfan/km_fan.hpp"
#include "stackyfan/lattice.hpp"
#include "stackyfan/stacky_fan.hpp"

namespace stackyfan {

// The identity of the torus extends to a morphism source -> target iff the
// source fan refines the target fan and every chosen generator of the source
// lies in the lattice of the minimal target cone containing its ray. Larger
// containing cones have larger lattices, so the minimal one is the only test.
inline Report check_morphism(const StackyFan& source, const StackyFan& target) {
  require_dim(source.ambient_dim(), target.ambient_dim(), "check_morphism");
  Report report;
  if (!refines(source.fan(), target.fan()).ok) {
    report.add("source fan does not refine the target fan");
    return report;
  }
  for (const auto& [ray, g] : source.ray_generators()) {
    const Cone pi = minimal_containing_cone(target.fan(), ray);
    const Sublattice l = cone_sublattice(target, pi);
    if (!member(g, l)) {
      report.add("generator " + to_string(g) + " is not in the lattice " + to_string(l.basis()) + " of cone " +
                 to_string(pi.rays()));
    }
  }
  return report;
}

struct ConeCertificate {
  std::size_t source_cone = 0;  // index into source.fan().max_cones()
  std::size_t target_cone = 0;  // index into target.fan().max_cones()
  Sublattice source_lattice;
  Sublattice target_lattice;
};

struct RepresentabilityCertificate {
  bool refines = false;
  std::vector<ConeCertificate> cones;
  Report report;

  bool ok() const { return refines && report.ok(); }
};

// Representable morphism: refinement plus equal lattices on maximal cones.
inline RepresentabilityCertificate check_representable(const StackyFan& source, const StackyFan& target) {
  require_dim(source.ambient_dim(), target.ambient_dim(), "check_representable");
  RepresentabilityCertificate cert;
  const Refinement ref = refines(source.fan(), target.fan());
  if (!ref.ok) {
    cert.report.add("source fan does not refine the target fan");
    return cert;
  }
  cert.refines = true;
  for (std::size_t i = 0; i < ref.cone_map.size(); ++i) {
    ConeCertificate c;
    c.source_cone = i;
    c.target_cone = ref.cone_map[i];
    c.source_lattice = cone_sublattice(source, source.fan().max_cones()[i]);
    c.target_lattice = cone_sublattice(target, target.fan().max_cones()[c.target_cone]);
    if (c.source_lattice != c.target_lattice) {
      cert.report.add("cone " + to_string(source.fan().max_cones()[i].rays()) + " has lattice " +
                      to_string(c.source_lattice.basis()) + " but maps to " +
                      to_string(target.fan().max_cones()[c.target_cone].rays()) + " with lattice " +
                      to_string(c.target_lattice.basis()));
    }
    cert.cones.push_back(std::move(c));
  }
  return cert;
}

// Re-derives every claim of a certificate from the two fans.
inline bool verify(const RepresentabilityCertificate& cert, const StackyFan& source, const StackyFan& target) {
  if (!cert.ok()) return false;
  const auto& src = source.fan().max_cones();
  const auto& dst = target.fan().max_cones();
  if (cert.cones.size() != src.size()) return false;
  for (std::size_t i = 0; i < cert.cones.size(); ++i) {
    const auto& c = cert.cones[i];
    if (c.source_cone != i || c.target_cone >= dst.size()) return false;
    if (!contains_cone(dst[c.target_cone], src[i])) return false;
    if (c.source_lattice != cone_sublattice(source, src[i])) return false;
    if (c.target_lattice != cone_sublattice(target, dst[c.target_cone])) return false;
    if (c.source_lattice != c.target_lattice) return false;
  }
  return true;
}

struct Conflict {
  Cone a_cone;
  Cone b_cone;
  Sublattice a_lattice;
  Sublattice b_lattice;
};

struct EquivalenceReport {
  bool verdict = true;
  std::vector<Conflict> conflicts;  // ordered by (a_cone, b_cone)
};

// Birational equivalence: maximal cones with overlapping interiors carry the
// same lattice.
inline EquivalenceReport equivalent(const StackyFan& a, const StackyFan& b) {
  require_dim(a.ambient_dim(), b.ambient_dim(), "equivalent");
  EquivalenceReport report;
  const auto& ca = a.fan().max_cones();
  const auto& cb = b.fan().max_cones();
  std::vector<Sublattice> lb;
  for (const auto& y : cb) lb.push_back(cone_sublattice(b, y));
  for (const auto& x : ca) {
    const Sublattice lx = cone_sublattice(a, x);
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (lx == lb[j] || !interiors_overlap(x, cb[j])) continue;
      report.conflicts.push_back({x, cb[j], lx, lb[j]});
    }
  }
  report.verdict = report.conflicts.empty();
  return report;
}

struct ColorClass {
  Sublattice lattice;
  std::vector<Cone> region;
};

// A conical partition of R^d labelled by finite-index sublattices. Classes are
// kept sorted by lattice and each region sorted by cone; equality of
// colorings is semantic (see colorings_equal), not structural.
class Coloring {
 public:
  Coloring() = default;

  Coloring(std::size_t d, std::vector<ColorClass> classes) : ambient_dim_(d), classes_(std::move(classes)) {
    for (auto& c : classes_) {
      require_dim(c.lattice.ambient_dim(), d, "Coloring lattice");
      for (const auto& cone : c.region) require_dim(cone.ambient_dim(), d, "Coloring cone");
      std::sort(c.region.begin(), c.region.end());
    }
    std::stable_sort(classes_.begin(), classes_.end(),
                     [](const ColorClass& x, const ColorClass& y) { return x.lattice < y.lattice; });
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  const std::vector<ColorClass>& classes() const { return classes_; }

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<ColorClass> classes_;
};

// Fan cut out by the hyperplanes normal to `normals`. The normals must span
// Q^d, otherwise the cells would contain lines.
inline Fan arrangement_fan(std::size_t d, const IntMatrix& normals) {
  std::set<IntVector> planes;
  for (const auto& n : normals) {
    require_dim(n.size(), d, "arrangement_fan");
    if (is_zero(n)) continue;
    IntVector p = primitive(n);
    if (p[detail::pivot_column(p)] < 0) p = -p;
    planes.insert(std::move(p));
  }
  IntMatrix basis, rest;
  for (const auto& p : planes) {
    IntMatrix trial = basis;
    trial.push_back(p);
    if (basis.size() < d && rank(trial) == trial.size()) {
      basis = std::move(trial);
    } else {
      rest.push_back(p);
    }
  }
  if (basis.size() != d) throw PreconditionError("arrangement_fan: hyperplane normals do not span");

  std::vector<Cone> cells;
  for (std::size_t signs = 0; signs < (std::size_t{1} << d); ++signs) {
    IntMatrix ineqs;
    for (std::size_t i = 0; i < d; ++i) ineqs.push_back((signs >> i) & 1 ? -basis[i] : basis[i]);
    cells.push_back(Cone::from_inequalities(ineqs, d));
  }
  for (const auto& h : rest) {
    std::vector<Cone> next;
    for (const auto& c : cells) {
      bool pos = false, neg = false;
      for (const auto& r : c.rays()) {
        Integer v = dot(h, r);
        pos = pos || v > 0;
        neg = neg || v < 0;
      }
      if (pos && neg) {
        next.push_back(intersect_halfspace(c, h));
        next.push_back(intersect_halfspace(c, -h));
      } else {
        next.push_back(c);
      }
    }
    cells = std::move(next);
  }
  return Fan(d, std::move(cells));
}

inline IntMatrix coloring_normals(const Coloring& c) {
  IntMatrix normals;
  for (const auto& cls : c.classes()) {
    for (const auto& cone : cls.region) normals.insert(normals.end(), cone.facets().begin(), cone.facets().end());
  }
  return normals;
}

// Index of the class whose region contains the full-dimensional cell, or
// classes().size() if none. `second` receives a second containing class, if any.
inline std::size_t class_containing(const Coloring& c, const Cone& cell, std::size_t* second = nullptr) {
  std::size_t found = c.classes().size();
  for (std::size_t k = 0; k < c.classes().size(); ++k) {
    const auto& region = c.classes()[k].region;
    bool in = std::any_of(region.begin(), region.end(), [&](const Cone& x) { return contains_cone(x, cell); });
    if (!in) continue;
    if (found == c.classes().size()) {
      found = k;
      if (second == nullptr) return found;
    } else {
      *second = k;
      return found;
    }
  }
  return found;
}

// Checks the partition and compatibility conditions. Coverage and disjointness
// are decided on the cells of the hyperplane arrangement of all facets. The
// lattice-point condition on C' cap C'' is checked as equality of
// saturations on each pairwise cone intersection: for a rational cone pi the
// group generated by L cap pi is L cap Span(pi).
inline Report validate_coloring(const Coloring& c) {
  Report report;
  const std::size_t d = c.ambient_dim();
  if (d == 0) {
    report.add("dimension must be positive");
    return report;
  }
  if (c.classes().empty()) report.add("coloring has no classes");
  for (std::size_t k = 0; k < c.classes().size(); ++k) {
    const auto& cls = c.classes()[k];
    const std::string name = "class " + to_string(cls.lattice.basis());
    if (cls.region.empty()) report.add(name + " has an empty region");
    for (const auto& cone : cls.region) {
      if (!cone.is_full_dimensional()) report.add(name + ": cone " + to_string(cone.rays()) + " is not full-dimensional");
    }
    if (cls.lattice.rank() != d) report.add(name + " does not have finite index in Z^d");
    if (k > 0 && c.classes()[k - 1].lattice == cls.lattice) report.add(name + " appears twice");
  }
  if (!report.ok()) return report;

  const Fan cells = arrangement_fan(d, coloring_normals(c));
  for (const auto& cell : cells.max_cones()) {
    std::size_t second = c.classes().size();
    const std::size_t first = class_containing(c, cell, &second);
    if (first == c.classes().size()) {
      report.add("cell " + to_string(cell.rays()) + " is not covered");
    } else if (second != c.classes().size()) {
      report.add("classes " + to_string(c.classes()[first].lattice.basis()) + " and " +
                 to_string(c.classes()[second].lattice.basis()) + " overlap on cell " + to_string(cell.rays()));
    }
  }

  for (std::size_t i = 0; i < c.classes().size(); ++i) {
    for (std::size_t j = i + 1; j < c.classes().size(); ++j) {
      const auto& ci = c.classes()[i];
      const auto& cj = c.classes()[j];
      for (const auto& x : ci.region) {
        for (const auto& y : cj.region) {
          const Cone shared = intersect_cones(x, y);
          if (shared.dim() == 0) continue;
          const Sublattice a = saturate(ci.lattice, shared.rays());
          const Sublattice b = saturate(cj.lattice, shared.rays());
          if (a != b) {
            report.add("classes " + to_string(ci.lattice.basis()) + " and " + to_string(cj.lattice.basis()) +
                       " disagree on " + to_string(shared.rays()) + ": " + to_string(a.basis()) + " vs " +
                       to_string(b.basis()));
          }
        }
      }
    }
  }
  return report;
}

inline Coloring coloring_of(const StackyFan& s) {
  std::map<Sublattice, std::vector<Cone>> groups;
  for (const auto& c : s.fan().max_cones()) groups[cone_sublattice(s, c)].push_back(c);
  std::vector<ColorClass> classes;
  for (auto& [l, cones] : groups) classes.push_back({l, std::move(cones)});
  return Coloring(s.ambient_dim(), std::move(classes));
}

// Semantic equality: every pair of cones with overlapping interiors carries
// the same lattice in both colorings.
inline bool colorings_equal(const Coloring& a, const Coloring& b) {
  require_dim(a.ambient_dim(), b.ambient_dim(), "colorings_equal");
  for (const Coloring* c : {&a, &b}) {
    Report r = validate_coloring(*c);
    if (!r.ok()) throw PreconditionError("colorings_equal: invalid coloring: " + r.violations.front());
  }
  for (const auto& ca : a.classes()) {
    for (const auto& cb : b.classes()) {
      if (ca.lattice == cb.lattice) continue;
      for (const auto& x : ca.region) {
        for (const auto& y : cb.region) {
          if (interiors_overlap(x, y)) return false;
        }
      }
    }
  }
  return true;
}

// KM fan on the arrangement fan of a valid coloring (triangulated), each cell
// carrying the lattice of its class.
inline KMFan coloring_km_fan(const Coloring& c) {
  Report r = validate_coloring(c);
  if (!r.ok()) throw PreconditionError("invalid coloring: " + r.violations.front());
  Fan fan = triangulate(arrangement_fan(c.ambient_dim(), coloring_normals(c)));
  std::vector<Sublattice> lattices;
  for (const auto& cell : fan.max_cones()) lattices.push_back(c.classes()[class_containing(c, cell)].lattice);
  return KMFan(std::move(fan), std::move(lattices));
}

inline Resolution realize_coloring_traced(const Coloring& c) { return resolve(coloring_km_fan(c)); }

// A smooth proper stacky fan whose coloring is c.
inline StackyFan realize_coloring(const Coloring& c) { return realize_coloring_traced(c).result; }

struct Witness {
  StackyFan roof;
  RepresentabilityCertificate to_a;
  RepresentabilityCertificate to_b;
  std::vector<ResolveStep> trace;
};

// A common roof of two equivalent stacky fans: resolve the KM fan on their
// overlay. Returns the equivalence report when they are not equivalent.
inline std::variant<Witness, EquivalenceReport> witness(const StackyFan& a, const StackyFan& b) {
  EquivalenceReport report = equivalent(a, b);
  if (!report.verdict) return report;
  Resolution res = resolve(overlay_km(a, b));
  Witness w;
  w.roof = std::move(res.result);
  w.trace = std::move(res.trace);
  w.to_a = check_representable(w.roof, a);
  w.to_b = check_representable(w.roof, b);
  if (!w.to_a.ok() || !w.to_b.ok()) throw InternalError("witness: resolved overlay is not representable over both fans");
  return w;
}

}  // namespace stackyfan
