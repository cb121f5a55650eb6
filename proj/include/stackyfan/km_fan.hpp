#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stackyfan/cone.hpp"
#include "stackyfan/fan.hpp"
#include "stackyfan/integer.hpp"
#include "stackyfan/lattice.hpp"
#include "stackyfan/stacky_fan.hpp"

namespace stackyfan {

// A complete fan with a finite-index sublattice on each maximal cone. Lattices
// of lower-dimensional cones are obtained by saturation.
class KMFan {
 public:
  KMFan() = default;

  // `lattices` is parallel to `fan.max_cones()`.
  KMFan(Fan fan, std::vector<Sublattice> lattices) : fan_(std::move(fan)), lattices_(std::move(lattices)) {
    require_dim(lattices_.size(), fan_.max_cones().size(), "KMFan lattices");
    for (const auto& l : lattices_) require_dim(l.ambient_dim(), fan_.ambient_dim(), "KMFan lattice");
  }

  std::size_t ambient_dim() const { return fan_.ambient_dim(); }
  const Fan& fan() const { return fan_; }
  const std::vector<Sublattice>& lattices() const { return lattices_; }

  const Sublattice& lattice(const Cone& max_cone) const {
    std::size_t i = fan_.index_of(max_cone);
    if (i == fan_.max_cones().size()) throw PreconditionError("cone " + to_string(max_cone.rays()) + " is not maximal in the fan");
    return lattices_[i];
  }

  // N_tau for any cone tau of the fan.
  Sublattice cone_lattice(const Cone& tau) const {
    for (std::size_t i = 0; i < fan_.max_cones().size(); ++i) {
      if (is_face(tau, fan_.max_cones()[i])) return saturate(lattices_[i], tau.rays());
    }
    throw PreconditionError("cone " + to_string(tau.rays()) + " is not in the fan");
  }

  friend bool operator==(const KMFan& a, const KMFan& b) { return a.fan_ == b.fan_ && a.lattices_ == b.lattices_; }

 private:
  Fan fan_;
  std::vector<Sublattice> lattices_;
};

inline Report validate_km(const KMFan& f) {
  Report report = validate_fan(f.fan());
  if (!report.ok()) return report;
  if (!is_complete(f.fan())) report.add("fan is not complete");
  const auto& cones = f.fan().max_cones();
  const std::size_t d = f.ambient_dim();
  for (std::size_t i = 0; i < cones.size(); ++i) {
    if (f.lattices()[i].rank() != d) {
      report.add("lattice " + to_string(f.lattices()[i].basis()) + " on cone " + to_string(cones[i].rays()) +
                 " has infinite index");
    }
  }
  if (!report.ok()) return report;
  for (std::size_t i = 0; i < cones.size(); ++i) {
    for (std::size_t j = i + 1; j < cones.size(); ++j) {
      const Cone shared = intersect_cones(cones[i], cones[j]);
      const Sublattice a = saturate(f.lattices()[i], shared.rays());
      const Sublattice b = saturate(f.lattices()[j], shared.rays());
      if (a != b) {
        report.add("cones " + to_string(cones[i].rays()) + " and " + to_string(cones[j].rays()) +
                   " restrict to different lattices on their common face " + to_string(shared.rays()) + ": " +
                   to_string(a.basis()) + " vs " + to_string(b.basis()));
      }
    }
  }
  return report;
}

inline KMFan from_stacky(const StackyFan& s) {
  std::vector<Sublattice> lattices;
  for (const auto& c : s.fan().max_cones()) lattices.push_back(cone_sublattice(s, c));
  return KMFan(s.fan(), std::move(lattices));
}

struct MultRecord {
  Cone cone;
  Integer mult;
  // Generators of N_sigma on each ray of the cone, parallel to cone.rays().
  IntMatrix ray_generators;
  // Nonzero parallelepiped point with the smallest barycentric sum; present
  // iff mult > 1.
  std::optional<IntVector> witness_point;
};

namespace detail {

inline MultRecord multiplicity(const Cone& sigma, const Sublattice& lattice) {
  if (!is_simplicial(sigma)) throw PreconditionError("multiplicity: cone " + to_string(sigma.rays()) + " is not simplicial");
  MultRecord rec;
  rec.cone = sigma;
  for (const auto& r : sigma.rays()) {
    const Sublattice line = saturate(lattice, IntMatrix{r});
    IntVector g = line.basis().front();
    if (dot(g, r) < 0) g = -g;
    rec.ray_generators.push_back(std::move(g));
  }
  rec.mult = index(hnf(rec.ray_generators, sigma.ambient_dim()), lattice);
  if (rec.mult > 1) {
    std::optional<Rational> best_sum;
    for (auto& p : parallelepiped_points(rec.ray_generators, lattice)) {
      if (is_zero(p)) continue;
      RatVector t = *solve_coordinates(rec.ray_generators, to_rational(p));
      Rational sum = 0;
      for (const auto& x : t) sum += x;
      // Points arrive sorted, so the first with a given sum is lexicographically least.
      if (!best_sum || sum < *best_sum) {
        best_sum = sum;
        rec.witness_point = std::move(p);
      }
    }
  }
  return rec;
}

}  // namespace detail

inline MultRecord multiplicity(const KMFan& f, const Cone& sigma) { return detail::multiplicity(sigma, f.lattice(sigma)); }

inline bool is_smooth(const KMFan& f) {
  if (!f.fan().is_simplicial()) return false;
  for (std::size_t i = 0; i < f.fan().max_cones().size(); ++i) {
    if (detail::multiplicity(f.fan().max_cones()[i], f.lattices()[i]).mult != 1) return false;
  }
  return true;
}

// Inverse of from_stacky on smooth KM fans.
inline StackyFan to_stacky(const KMFan& f) {
  if (!f.fan().is_simplicial()) throw PreconditionError("to_stacky: KM fan is not simplicial");
  RayGenerators rho;
  for (std::size_t i = 0; i < f.fan().max_cones().size(); ++i) {
    const MultRecord rec = detail::multiplicity(f.fan().max_cones()[i], f.lattices()[i]);
    if (rec.mult != 1) throw PreconditionError("to_stacky: cone " + to_string(rec.cone.rays()) + " has multiplicity " + rec.mult.str());
    for (std::size_t k = 0; k < rec.cone.rays().size(); ++k) {
      auto [it, fresh] = rho.emplace(rec.cone.rays()[k], rec.ray_generators[k]);
      if (!fresh && it->second != rec.ray_generators[k]) {
        throw PreconditionError("to_stacky: incompatible lattices along ray " + to_string(rec.cone.rays()[k]));
      }
    }
  }
  return StackyFan(f.fan(), std::move(rho));
}

// For each maximal cone of `fine`, the lattice of the maximal cone of
// `coarse` containing it.
inline std::vector<Sublattice> induced_lattices(const Fan& fine, const Fan& coarse,
                                                const std::vector<Sublattice>& coarse_lattices) {
  const Refinement ref = refines(fine, coarse);
  if (!ref.ok) throw InternalError("induced_lattices: fan is not a refinement");
  std::vector<Sublattice> out;
  out.reserve(ref.cone_map.size());
  for (std::size_t j : ref.cone_map) out.push_back(coarse_lattices[j]);
  return out;
}

struct ResolveStep {
  Cone cone;         // the cone whose witness point was used
  Integer mult;      // its multiplicity, the maximum over the fan at this step
  IntVector center;  // subdivision center; also the new ray's generator
};

struct Resolution {
  StackyFan result;
  std::vector<ResolveStep> trace;
};

// Toric resolution: triangulate, then repeatedly star-subdivide the worst cone
// at its witness point until every multiplicity is 1.
inline Resolution resolve(const KMFan& f) {
  {
    Report r = validate_km(f);
    if (!r.ok()) throw PreconditionError("resolve: invalid KM fan: " + r.violations.front());
  }
  Fan fan = triangulate(f.fan());
  std::vector<Sublattice> lattices = induced_lattices(fan, f.fan(), f.lattices());

  auto mults = [&] {
    std::vector<MultRecord> recs;
    for (std::size_t i = 0; i < fan.max_cones().size(); ++i) recs.push_back(detail::multiplicity(fan.max_cones()[i], lattices[i]));
    return recs;
  };

  std::vector<MultRecord> recs = mults();
  Integer total = 0;
  for (const auto& r : recs) total += r.mult;
  const Integer cap = 64 * total;

  Resolution out;
  for (Integer steps = 0;; ++steps) {
    const MultRecord* worst = nullptr;
    for (const auto& r : recs) {
      // recs follow the sorted cone order, so the first maximum is the
      // lexicographically least.
      if (r.mult > 1 && (worst == nullptr || r.mult > worst->mult)) worst = &r;
    }
    if (worst == nullptr) break;
    if (steps >= cap) throw InternalError("resolve: iteration cap exceeded");
    out.trace.push_back({worst->cone, worst->mult, *worst->witness_point});
    Fan next = star_subdivide(fan, *worst->witness_point);
    lattices = induced_lattices(next, fan, lattices);
    fan = std::move(next);
    recs = mults();
  }
  out.result = to_stacky(KMFan(fan, lattices));
  return out;
}

// Representability between KM fans: source refines target and each maximal
// cone carries the lattice of the target cone containing it.
inline Report check_representable(const KMFan& source, const KMFan& target) {
  Report report;
  const Refinement ref = refines(source.fan(), target.fan());
  if (!ref.ok) {
    report.add("source fan does not refine the target fan");
    return report;
  }
  for (std::size_t i = 0; i < ref.cone_map.size(); ++i) {
    const auto& a = source.lattices()[i];
    const auto& b = target.lattices()[ref.cone_map[i]];
    if (a != b) {
      report.add("cone " + to_string(source.fan().max_cones()[i].rays()) + " carries " + to_string(a.basis()) +
                 " but maps to a cone carrying " + to_string(b.basis()));
    }
  }
  return report;
}

// KM fan on the common refinement of two stacky fans. Every cell must see the
// same lattice from both sides.
inline KMFan overlay_km(const StackyFan& a, const StackyFan& b) {
  Fan fan = overlay(a.fan(), b.fan());
  const KMFan ka = from_stacky(a), kb = from_stacky(b);
  std::vector<Sublattice> la = induced_lattices(fan, ka.fan(), ka.lattices());
  std::vector<Sublattice> lb = induced_lattices(fan, kb.fan(), kb.lattices());
  std::string mismatches;
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (la[i] == lb[i]) continue;
    if (!mismatches.empty()) mismatches += "; ";
    mismatches += "cell " + to_string(fan.max_cones()[i].rays()) + " has lattice " + to_string(la[i].basis()) +
                  " in the first fan and " + to_string(lb[i].basis()) + " in the second";
  }
  if (!mismatches.empty()) throw PreconditionError("overlay_km: " + mismatches);
  return KMFan(std::move(fan), std::move(la));
}

}  // namespace stackyfan
