#pragma once

// Generators and brute-force oracles shared by the unit tests and the
// acceptance runner. Oracles work on machine integers and never call into the
// library's lattice code.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stackyfan/io.hpp"
#include "stackyfan/stackyfan.hpp"

namespace stackyfan {

inline void PrintTo(const Sublattice& l, std::ostream* os) { *os << to_string(l.basis()); }
inline void PrintTo(const Cone& c, std::ostream* os) { *os << "cone" << to_string(c.rays()); }

}  // namespace stackyfan

namespace sftest {

using namespace stackyfan;
using Rng = std::mt19937_64;
using LLVec = std::vector<long long>;
using LLMat = std::vector<LLVec>;

inline long long uniform(Rng& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(uniform(rng, 0, static_cast<long long>(xs.size()) - 1))];
}

inline IntVector random_vector(Rng& rng, std::size_t d, long long lo, long long hi) {
  IntVector v(d);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

inline IntMatrix random_rows(Rng& rng, std::size_t n, std::size_t d, long long lo, long long hi) {
  IntMatrix m;
  for (std::size_t i = 0; i < n; ++i) m.push_back(random_vector(rng, d, lo, hi));
  return m;
}

inline IntVector iv(std::initializer_list<long long> xs) { return make_vector(xs); }

inline IntMatrix im(std::initializer_list<std::initializer_list<long long>> rows) {
  IntMatrix m;
  for (auto r : rows) m.push_back(make_vector(r));
  return m;
}

// ---- machine-integer oracles ----------------------------------------------

inline LLVec to_ll(const IntVector& v) {
  LLVec out;
  for (const auto& x : v) out.push_back(static_cast<long long>(x));
  return out;
}

inline LLMat to_ll(const IntMatrix& m) {
  LLMat out;
  for (const auto& r : m) out.push_back(to_ll(r));
  return out;
}

inline long long det_ll(const LLMat& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  long long s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    LLMat sub;
    for (std::size_t i = 1; i < n; ++i) {
      LLVec row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) row.push_back(m[i][k]);
      }
      sub.push_back(row);
    }
    const long long term = m[0][j] * det_ll(sub);
    s += (j % 2 == 0) ? term : -term;
  }
  return s;
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out,
                    std::vector<std::size_t>& cur, std::size_t start = 0) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, out, cur, i + 1);
    cur.pop_back();
  }
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  subsets(n, k, out, cur);
  return out;
}

// gcd of all r x r minors; 0 when every such minor vanishes.
inline long long minor_gcd(const LLMat& rows, std::size_t d, std::size_t r) {
  if (r == 0) return 1;
  long long g = 0;
  for (const auto& ri : subsets(rows.size(), r)) {
    for (const auto& ci : subsets(d, r)) {
      LLMat sub;
      for (auto i : ri) {
        LLVec row;
        for (auto j : ci) row.push_back(rows[i][j]);
        sub.push_back(row);
      }
      g = std::gcd(g, det_ll(sub));
    }
  }
  return g;
}

inline std::size_t rank_ll(const LLMat& rows, std::size_t d) {
  for (std::size_t r = std::min(rows.size(), d); r > 0; --r) {
    if (minor_gcd(rows, d, r) != 0) return r;
  }
  return 0;
}

// x lies in the group generated by `gens` iff adding it keeps the rank and the
// gcd of maximal minors.
inline bool oracle_member(const LLVec& x, const LLMat& gens, std::size_t d) {
  const std::size_t r = rank_ll(gens, d);
  LLMat ext = gens;
  ext.push_back(x);
  if (rank_ll(ext, d) != r) return false;
  if (r == 0) return std::all_of(x.begin(), x.end(), [](long long v) { return v == 0; });
  return minor_gcd(gens, d, r) == minor_gcd(ext, d, r);
}

inline bool oracle_in_span(const LLVec& x, const LLMat& gens, std::size_t d) {
  LLMat ext = gens;
  ext.push_back(x);
  return rank_ll(ext, d) == rank_ll(gens, d);
}

// [L(sup) : L(sub)] for equal-rank lattices given by generators.
inline long long oracle_index(const LLMat& sub, const LLMat& sup, std::size_t d) {
  const std::size_t r = rank_ll(sup, d);
  return minor_gcd(sub, d, r) / minor_gcd(sup, d, r);
}

// Visits every point of the box [-radius, radius]^d.
template <class F>
void for_box(std::size_t d, long long radius, F&& f) {
  LLVec x(d, -radius);
  for (;;) {
    f(x);
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (++x[i] <= radius) break;
      x[i] = -radius;
    }
    if (i == d) return;
  }
}

inline IntVector from_ll(const LLVec& v) {
  IntVector out;
  for (long long x : v) out.push_back(Integer(x));
  return out;
}

// ---- fans ------------------------------------------------------------------

inline Cone cone(std::initializer_list<std::initializer_list<long long>> gens) { return Cone::from_generators(im(gens)); }

inline StackyFan stacky(std::size_t d, const IntMatrix& rho, const std::vector<std::vector<std::size_t>>& cones) {
  return StackyFan::from_rays(d, rho, cones);
}

inline StackyFan p2(long long a = 1, long long b = 1, long long c = 1) {
  return stacky(2, IntMatrix{iv({a, 0}), iv({0, b}), iv({-c, -c})}, {{0, 1}, {1, 2}, {2, 0}});
}

inline StackyFan quadrants() {
  return stacky(2, im({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}), {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

inline StackyFan football(long long a, long long b) { return stacky(1, IntMatrix{iv({a}), iv({-b})}, {{0}, {1}}); }

// Hirzebruch surface F_a.
inline StackyFan hirzebruch(long long a) {
  return stacky(2, IntMatrix{iv({1, 0}), iv({0, 1}), iv({-1, a}), iv({0, -1})}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

inline StackyFan orthants3() {
  IntMatrix rays = im({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
  std::vector<std::vector<std::size_t>> cones;
  for (std::size_t a : {0, 1})
    for (std::size_t b : {2, 3})
      for (std::size_t c : {4, 5}) cones.push_back({a, b, c});
  return stacky(3, rays, cones);
}

inline StackyFan with_multiples(const StackyFan& s, const std::map<IntVector, long long>& m) {
  RayGenerators rho = s.ray_generators();
  for (const auto& [ray, k] : m) rho.at(ray) = Integer(k) * ray;
  return StackyFan(s.fan(), rho);
}

inline StackyFan random_scaling(Rng& rng, const StackyFan& s, long long max_mult) {
  RayGenerators rho = s.ray_generators();
  for (auto& [ray, g] : rho) g = Integer(uniform(rng, 1, max_mult)) * g;
  return StackyFan(s.fan(), rho);
}

// Random cone of dimension >= 2 of the fan.
inline Cone random_face(Rng& rng, const StackyFan& s) {
  std::vector<Cone> pool;
  for (auto& c : s.fan().all_cones()) {
    if (c.dim() >= 2) pool.push_back(std::move(c));
  }
  return pick(rng, pool);
}

inline StackyFan random_subdivisions(Rng& rng, StackyFan s, int steps) {
  for (int i = 0; i < steps; ++i) s = stacky_star_subdivide(s, random_face(rng, s));
  return s;
}

// Exact angular comparison of nonzero vectors in the plane, starting at the
// positive x-axis.
inline bool angle_less(const LLVec& a, const LLVec& b) {
  auto half = [](const LLVec& v) { return (v[1] < 0 || (v[1] == 0 && v[0] < 0)) ? 1 : 0; };
  if (half(a) != half(b)) return half(a) < half(b);
  return a[0] * b[1] - a[1] * b[0] > 0;
}

inline long long cross(const LLVec& a, const LLVec& b) { return a[0] * b[1] - a[1] * b[0]; }

// Complete simplicial d=2 fan on random primitive rays with entries in [-r, r].
inline Fan random_fan2(Rng& rng, long long r, std::size_t max_rays) {
  for (;;) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 3, static_cast<long long>(max_rays)));
    std::set<IntVector> rays;
    while (rays.size() < n) {
      IntVector v = random_vector(rng, 2, -r, r);
      if (!is_zero(v)) rays.insert(primitive(v));
    }
    std::vector<LLVec> sorted;
    for (const auto& v : rays) sorted.push_back(to_ll(v));
    std::sort(sorted.begin(), sorted.end(), angle_less);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = cross(sorted[i], sorted[(i + 1) % n]) > 0;
    if (!ok) continue;
    std::vector<Cone> cones;
    for (std::size_t i = 0; i < n; ++i) {
      cones.push_back(Cone::from_generators(IntMatrix{from_ll(sorted[i]), from_ll(sorted[(i + 1) % n])}, 2));
    }
    return Fan(2, std::move(cones));
  }
}

inline StackyFan primitive_stacky(const Fan& f) {
  RayGenerators rho;
  for (const auto& r : f.rays()) rho.emplace(r, r);
  return StackyFan(f, rho);
}

// Complete simplicial d=3 fan: the orthant fan star-subdivided at random points.
inline Fan random_fan3(Rng& rng, long long r, int steps) {
  Fan f = orthants3().fan();
  for (int i = 0; i < steps; ++i) {
    IntVector p = random_vector(rng, 3, -r, r);
    if (is_zero(p)) continue;
    f = star_subdivide(f, p);
  }
  return f;
}

inline Sublattice random_full_sublattice(Rng& rng, std::size_t d, long long max_index) {
  for (;;) {
    IntMatrix gens = random_rows(rng, d, d, -3, 3);
    for (std::size_t i = 0; i < d; ++i) gens.push_back(random_vector(rng, d, -3, 3));
    Sublattice l = hnf(gens, d);
    if (l.rank() == d && index(l, Sublattice::full(d)) <= max_index) return l;
  }
}

// Largest multiplicity after triangulating, with lattices induced from the
// containing cones.
inline Integer max_initial_mult(const KMFan& f) {
  const Fan t = triangulate(f.fan());
  const auto lattices = induced_lattices(t, f.fan(), f.lattices());
  Integer m = 0;
  for (std::size_t i = 0; i < t.max_cones().size(); ++i) {
    m = std::max(m, stackyfan::detail::multiplicity(t.max_cones()[i], lattices[i]).mult);
  }
  return m;
}

inline Fan random_complete_fan(Rng& rng, std::size_t d) {
  if (d == 1) return football(1, 1).fan();
  if (d == 2) return random_fan2(rng, 4, 6);
  if (coin(rng, 0.25)) {
    // Face fan of the cube, possibly subdivided; not simplicial.
    IntMatrix rays;
    for (long long x : {1, -1})
      for (long long y : {1, -1})
        for (long long z : {1, -1}) rays.push_back(iv({x, y, z}));
    std::vector<Cone> cones;
    for (std::size_t axis = 0; axis < 3; ++axis) {
      for (long long sign : {1, -1}) {
        IntMatrix face;
        for (const auto& r : rays) {
          if (r[axis] == sign) face.push_back(r);
        }
        cones.push_back(Cone::from_generators(face, 3));
      }
    }
    Fan f(3, std::move(cones));
    if (coin(rng)) {
      IntVector p = random_vector(rng, 3, -2, 2);
      if (!is_zero(p)) f = star_subdivide(f, p);
    }
    return f;
  }
  return random_fan3(rng, 2, static_cast<int>(uniform(rng, 0, 3)));
}

// Random valid KM fan with initial multiplicities at most `max_mult`: either one
// lattice on every cone, or the lattices of a randomly scaled stacky fan.
inline KMFan random_km(Rng& rng, std::size_t d, long long max_mult = 12) {
  for (;;) {
    const Fan f = random_complete_fan(rng, d);
    KMFan k;
    if (f.is_simplicial() && coin(rng)) {
      k = from_stacky(random_scaling(rng, primitive_stacky(f), 3));
    } else {
      const Sublattice l = coin(rng) ? Sublattice::full(d) : random_full_sublattice(rng, d, 3);
      k = KMFan(f, std::vector<Sublattice>(f.max_cones().size(), l));
    }
    if (max_initial_mult(k) <= max_mult) return k;
  }
}

inline StackyFan random_base2(Rng& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0: return p2();
    case 1: return quadrants();
    case 2: return hirzebruch(uniform(rng, 1, 2));
    default: return primitive_stacky(random_fan2(rng, 3, 5));
  }
}

// Two d=2 stacky fans over a common base: each side gets the base's scaling or
// an independent one, then a few stacky star subdivisions.
inline std::pair<StackyFan, StackyFan> random_pair2(Rng& rng) {
  const StackyFan base = random_base2(rng);
  const StackyFan sa = random_scaling(rng, base, 3);
  const StackyFan sb = coin(rng) ? sa : random_scaling(rng, base, 3);
  return {random_subdivisions(rng, sa, static_cast<int>(uniform(rng, 0, 3))),
          random_subdivisions(rng, sb, static_cast<int>(uniform(rng, 0, 3)))};
}

// Valid d=2 coloring with at most three classes of index at most six. Some
// region cones are split in two so regions are not presented by a single fan.
inline Coloring random_coloring2(Rng& rng) {
  for (;;) {
    const StackyFan s = random_subdivisions(rng, random_scaling(rng, random_base2(rng), 3), static_cast<int>(uniform(rng, 0, 2)));
    const Coloring c = coloring_of(s);
    if (c.classes().size() > 3) continue;
    bool small = true;
    for (const auto& cls : c.classes()) small = small && index(cls.lattice, Sublattice::full(2)) <= 6;
    if (!small) continue;
    std::vector<ColorClass> classes;
    for (const auto& cls : c.classes()) {
      ColorClass out{cls.lattice, {}};
      for (const auto& x : cls.region) {
        if (coin(rng, 0.3)) {
          const IntVector mid = x.rays()[0] + x.rays()[1];
          out.region.push_back(Cone::from_generators(IntMatrix{x.rays()[0], mid}, 2));
          out.region.push_back(Cone::from_generators(IntMatrix{mid, x.rays()[1]}, 2));
        } else {
          out.region.push_back(x);
        }
      }
      classes.push_back(std::move(out));
    }
    return Coloring(2, std::move(classes));
  }
}

// ---- fixtures --------------------------------------------------------------

inline std::string fixture_path(const std::string& name) { return std::string(STACKYFAN_FIXTURE_DIR) + "/" + name + ".json"; }

inline io::Document load_document(const std::string& name) {
  std::ifstream in(fixture_path(name));
  return io::parse_document(io::json::parse(in));
}

inline StackyFan load_stacky(const std::string& name) {
  return io::to_stacky_fan(std::get<io::StackyFanDoc>(load_document(name)));
}

inline KMFan load_km(const std::string& name) { return io::to_km_fan(std::get<io::KMFanDoc>(load_document(name))); }

inline Coloring load_coloring(const std::string& name) {
  return io::to_coloring(std::get<io::ColoringDoc>(load_document(name)));
}

}  // namespace sftest
