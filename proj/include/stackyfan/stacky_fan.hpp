#pragma once

#include <cstddef>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "stackyfan/cone.hpp"
#include "stackyfan/fan.hpp"
#include "stackyfan/integer.hpp"
#include "stackyfan/lattice.hpp"

namespace stackyfan {

// Chosen ray generators keyed by the primitive generator of their ray.
using RayGenerators = std::map<IntVector, IntVector>;

// Checks the stacky-fan conditions for a fan together with chosen generators:
// the fan is valid, complete and simplicial, and every ray carries a positive
// integer multiple of its primitive generator.
inline Report validate_stacky(const Fan& fan, const RayGenerators& rho) {
  Report report = validate_fan(fan);
  if (!report.ok()) return report;
  if (!is_complete(fan)) report.add("fan is not complete");
  for (const auto& c : fan.max_cones()) {
    if (!is_simplicial(c)) report.add("cone " + to_string(c.rays()) + " is not simplicial");
  }
  for (const auto& ray : fan.rays()) {
    auto it = rho.find(ray);
    if (it == rho.end()) {
      report.add("ray " + to_string(ray) + " has no chosen generator");
      continue;
    }
    const IntVector& g = it->second;
    if (g.size() != ray.size()) {
      report.add("ray " + to_string(ray) + ": generator has the wrong dimension");
    } else if (is_zero(g)) {
      report.add("ray " + to_string(ray) + ": generator is zero");
    } else if (primitive(g) == -ray) {
      report.add("ray " + to_string(ray) + ": generator " + to_string(g) + " is a negative multiple");
    } else if (primitive(g) != ray) {
      report.add("ray " + to_string(ray) + ": generator " + to_string(g) + " does not lie on the ray");
    }
  }
  for (const auto& [ray, g] : rho) {
    if (!std::binary_search(fan.rays().begin(), fan.rays().end(), ray)) {
      report.add("generator " + to_string(g) + " is attached to " + to_string(ray) + ", which is not a ray of the fan");
    }
  }
  return report;
}

// Validation of the wire form: chosen generators plus maximal cones as index
// lists into them.
inline Report validate_stacky(std::size_t d, const IntMatrix& generators,
                              const std::vector<std::vector<std::size_t>>& cones) {
  Report report;
  if (d == 0) {
    report.add("dimension must be positive");
    return report;
  }
  RayGenerators rho;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const IntVector& g = generators[i];
    if (g.size() != d) {
      report.add("ray " + std::to_string(i) + " has the wrong dimension");
      continue;
    }
    if (is_zero(g)) {
      report.add("ray " + std::to_string(i) + " is zero");
      continue;
    }
    auto [it, fresh] = rho.emplace(primitive(g), g);
    if (!fresh) report.add("rays " + to_string(it->second) + " and " + to_string(g) + " span the same ray");
  }
  std::vector<bool> used(generators.size(), false);
  std::vector<Cone> max_cones;
  for (const auto& idx : cones) {
    IntMatrix gens;
    bool ok = true;
    for (std::size_t i : idx) {
      if (i >= generators.size() || generators[i].size() != d || is_zero(generators[i])) {
        report.add("cone refers to an invalid ray index " + std::to_string(i));
        ok = false;
        break;
      }
      used[i] = true;
      gens.push_back(generators[i]);
    }
    if (!ok) continue;
    try {
      Cone c = Cone::from_generators(gens, d);
      if (!c.is_full_dimensional() || c.rays().size() != idx.size()) {
        report.add("cone " + to_string(gens) + " is not a full-dimensional simplicial cone on exactly its listed rays");
        continue;
      }
      max_cones.push_back(std::move(c));
    } catch (const PreconditionError& e) {
      report.add("cone " + to_string(gens) + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) report.add("ray " + std::to_string(i) + " is not used by any maximal cone");
  }
  if (!report.ok()) return report;
  report.merge(validate_stacky(Fan(d, std::move(max_cones)), rho));
  return report;
}

// A complete simplicial fan with a chosen generator on each ray. Only valid
// stacky fans can be constructed.
class StackyFan {
 public:
  StackyFan() = default;

  StackyFan(Fan fan, RayGenerators rho) : fan_(std::move(fan)), rho_(std::move(rho)) {
    Report r = validate_stacky(fan_, rho_);
    if (!r.ok()) throw PreconditionError("invalid stacky fan: " + r.violations.front());
  }

  static StackyFan from_rays(std::size_t d, const IntMatrix& generators,
                             const std::vector<std::vector<std::size_t>>& cones) {
    Report r = validate_stacky(d, generators, cones);
    if (!r.ok()) throw PreconditionError("invalid stacky fan: " + r.violations.front());
    RayGenerators rho;
    std::vector<Cone> max_cones;
    for (const auto& g : generators) rho.emplace(primitive(g), g);
    for (const auto& idx : cones) {
      IntMatrix gens;
      for (std::size_t i : idx) gens.push_back(generators[i]);
      max_cones.push_back(Cone::from_generators(gens, d));
    }
    return StackyFan(Fan(d, std::move(max_cones)), std::move(rho));
  }

  std::size_t ambient_dim() const { return fan_.ambient_dim(); }
  const Fan& fan() const { return fan_; }
  const RayGenerators& ray_generators() const { return rho_; }

  const IntVector& generator(const IntVector& ray) const {
    auto it = rho_.find(ray);
    if (it == rho_.end()) throw PreconditionError(to_string(ray) + " is not a ray of the stacky fan");
    return it->second;
  }

  // rho_tau = multiple * primitive generator.
  Integer multiple(const IntVector& ray) const { return content(generator(ray)); }

  friend bool operator==(const StackyFan& a, const StackyFan& b) { return a.fan_ == b.fan_ && a.rho_ == b.rho_; }
  friend bool operator!=(const StackyFan& a, const StackyFan& b) { return !(a == b); }

 private:
  Fan fan_;
  RayGenerators rho_;
};

inline Report validate_stacky(const StackyFan& s) { return validate_stacky(s.fan(), s.ray_generators()); }

// N_sigma: the sublattice spanned by the chosen generators of the rays of sigma.
inline Sublattice cone_sublattice(const StackyFan& s, const Cone& sigma) {
  require_dim(sigma.ambient_dim(), s.ambient_dim(), "cone_sublattice");
  if (!s.fan().has_cone(sigma)) throw PreconditionError("cone " + to_string(sigma.rays()) + " is not in the fan");
  IntMatrix gens;
  for (const auto& r : sigma.rays()) gens.push_back(s.generator(r));
  return hnf(gens, s.ambient_dim());
}

// Order of the generic stabilizer on the stratum of sigma:
// [Z^d cap Span(sigma) : N_sigma].
inline Integer stabilizer_order(const StackyFan& s, const Cone& sigma) {
  const Sublattice n_sigma = cone_sublattice(s, sigma);
  return index(n_sigma, saturation(sigma.rays(), s.ambient_dim()));
}

// Star subdivision centred at the sum of the chosen generators of sigma; the
// new ray is given that sum as its generator.
inline StackyFan stacky_star_subdivide(const StackyFan& s, const Cone& sigma) {
  require_dim(sigma.ambient_dim(), s.ambient_dim(), "stacky_star_subdivide");
  if (!s.fan().has_cone(sigma)) throw PreconditionError("cone " + to_string(sigma.rays()) + " is not in the fan");
  if (sigma.dim() == 0) throw PreconditionError("stacky_star_subdivide: cannot subdivide the zero cone");
  if (sigma.dim() == 1) return s;
  IntVector center = zero_vector(s.ambient_dim());
  for (const auto& r : sigma.rays()) center = center + s.generator(r);
  Fan fan = star_subdivide(s.fan(), center);
  RayGenerators rho = s.ray_generators();
  rho.emplace(primitive(center), center);
  return StackyFan(std::move(fan), std::move(rho));
}

}  // namespace stackyfan
