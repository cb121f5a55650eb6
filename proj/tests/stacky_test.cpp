#include <gtest/gtest.h>

#include "support.hpp"

using namespace sftest;

namespace {

StackyFan random_stacky(Rng& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0: return random_subdivisions(rng, random_scaling(rng, p2(), 3), static_cast<int>(uniform(rng, 0, 3)));
    case 1: return random_subdivisions(rng, random_scaling(rng, hirzebruch(uniform(rng, 0, 2)), 3), 2);
    case 2: return random_scaling(rng, primitive_stacky(random_fan2(rng, 4, 6)), 3);
    default: return random_subdivisions(rng, random_scaling(rng, orthants3(), 2), static_cast<int>(uniform(rng, 0, 2)));
  }
}

bool has_violation(const Report& r, const std::string& needle) {
  for (const auto& v : r.violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(ValidateStacky, Examples) {
  EXPECT_TRUE(validate_stacky(p2()).ok());
  const Fan f = p2().fan();
  RayGenerators rho = p2().ray_generators();
  rho[iv({1, 0})] = iv({-2, 0});
  EXPECT_TRUE(has_violation(validate_stacky(f, rho), "negative multiple"));
  rho[iv({1, 0})] = iv({2, 1});
  EXPECT_TRUE(has_violation(validate_stacky(f, rho), "does not lie on the ray"));
  rho.erase(iv({1, 0}));
  EXPECT_TRUE(has_violation(validate_stacky(f, rho), "no chosen generator"));
}

TEST(ValidateStacky, WireForm) {
  EXPECT_TRUE(validate_stacky(2, im({{1, 0}, {0, 1}, {-1, -1}}), {{0, 1}, {1, 2}, {2, 0}}).ok());
  // Incomplete.
  EXPECT_TRUE(has_violation(validate_stacky(2, im({{1, 0}, {0, 1}}), {{0, 1}}), "not complete"));
  // Two generators on the same ray.
  EXPECT_FALSE(validate_stacky(2, im({{1, 0}, {2, 0}, {0, 1}, {-1, -1}}), {{0, 2}, {2, 3}, {3, 0}}).ok());
  // Unused ray.
  EXPECT_TRUE(has_violation(validate_stacky(2, im({{1, 0}, {0, 1}, {-1, -1}, {1, 1}}), {{0, 1}, {1, 2}, {2, 0}}),
                            "not used"));
  // Non-simplicial cone.
  EXPECT_FALSE(validate_stacky(3, load_km("km_cube_d3").fan().rays(),
                               {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 4, 5}, {2, 3, 6, 7}, {0, 2, 4, 6}, {1, 3, 5, 7}})
                   .ok());
  EXPECT_THROW(StackyFan::from_rays(2, im({{1, 0}, {0, 1}}), {{0, 1}}), PreconditionError);
}

TEST(ConeSublattice, Examples) {
  const Cone q1 = cone({{1, 0}, {0, 1}});
  EXPECT_EQ(cone_sublattice(quadrants(), q1), Sublattice::full(2));
  EXPECT_EQ(cone_sublattice(with_multiples(quadrants(), {{iv({1, 0}), 2}}), q1), hnf(im({{2, 0}, {0, 1}})));
  const StackyFan s = stacky(2, im({{1, 0}, {1, 2}, {-1, 0}, {0, -1}}), {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  EXPECT_EQ(cone_sublattice(s, cone({{1, 0}, {1, 2}})).basis(), im({{1, 0}, {0, 2}}));
  EXPECT_THROW(cone_sublattice(s, cone({{1, 0}, {0, 1}})), PreconditionError);
}

TEST(StabilizerOrder, Examples) {
  const StackyFan s = stacky(2, im({{1, 0}, {1, 2}, {-1, 0}, {0, -1}}), {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  EXPECT_EQ(stabilizer_order(s, cone({{1, 0}, {1, 2}})), 2);
  EXPECT_EQ(stabilizer_order(s, cone({{1, 0}, {0, -1}})), 1);
  EXPECT_EQ(stabilizer_order(s, cone({{1, 2}})), 1);
  EXPECT_EQ(stabilizer_order(football(3, 1), cone({{1}})), 3);
}

TEST(StackyStarSubdivide, Examples) {
  const Cone q1 = cone({{1, 0}, {0, 1}});
  StackyFan a = stacky_star_subdivide(quadrants(), q1);
  EXPECT_EQ(a.generator(iv({1, 1})), iv({1, 1}));
  // The center is the sum of the chosen generators, not of the primitive ones.
  StackyFan b = stacky_star_subdivide(with_multiples(quadrants(), {{iv({1, 0}), 2}}), q1);
  EXPECT_EQ(b.generator(iv({2, 1})), iv({2, 1}));
  EXPECT_EQ(b.fan().max_cones().size(), 5u);

  StackyFan c = stacky_star_subdivide(orthants3(), cone({{1, 0, 0}, {0, 1, 0}}));
  EXPECT_EQ(c.generator(iv({1, 1, 0})), iv({1, 1, 0}));
  EXPECT_EQ(c.fan().max_cones().size(), 10u);
  EXPECT_TRUE(c.fan().has_cone(cone({{1, 0, 0}, {1, 1, 0}, {0, 0, 1}})));

  EXPECT_EQ(stacky_star_subdivide(p2(), cone({{1, 0}})), p2());
  EXPECT_THROW(stacky_star_subdivide(p2(), Cone::zero(2)), PreconditionError);
  EXPECT_THROW(stacky_star_subdivide(p2(), cone({{1, 0}, {0, -1}})), PreconditionError);
}

TEST(StackyProperties, FaceRule) {
  Rng rng(41);
  for (int it = 0; it < 60; ++it) {
    const StackyFan s = random_stacky(rng);
    for (const auto& sigma : s.fan().max_cones()) {
      const Sublattice ns = cone_sublattice(s, sigma);
      for (const auto& pi : faces(sigma)) EXPECT_EQ(cone_sublattice(s, pi), saturate(ns, pi.rays()));
    }
  }
}

TEST(StackyProperties, StarSubdivisionIsRepresentable) {
  Rng rng(42);
  for (int it = 0; it < 60; ++it) {
    const StackyFan s = random_stacky(rng);
    const Cone sigma = random_face(rng, s);
    const StackyFan t = stacky_star_subdivide(s, sigma);
    EXPECT_TRUE(validate_stacky(t).ok());
    EXPECT_TRUE(is_complete(t.fan()));
    EXPECT_TRUE(t.fan().is_simplicial());
    const Refinement ref = refines(t.fan(), s.fan());
    ASSERT_TRUE(ref.ok);
    for (std::size_t i = 0; i < ref.cone_map.size(); ++i) {
      EXPECT_EQ(cone_sublattice(t, t.fan().max_cones()[i]), cone_sublattice(s, s.fan().max_cones()[ref.cone_map[i]]));
    }
    EXPECT_TRUE(check_representable(t, s).ok());
  }
}

TEST(StackyProperties, TrivialStabilizersIffBasis) {
  Rng rng(43);
  int smooth = 0;
  for (int it = 0; it < 120; ++it) {
    const StackyFan s = it % 2 == 0 ? random_stacky(rng) : random_subdivisions(rng, hirzebruch(it % 3), 2);
    bool all_one = true, all_bases = true;
    for (const auto& sigma : s.fan().max_cones()) {
      all_one = all_one && stabilizer_order(s, sigma) == 1;
      LLMat m;
      for (const auto& r : sigma.rays()) m.push_back(to_ll(s.generator(r)));
      all_bases = all_bases && std::llabs(det_ll(m)) == 1;
    }
    EXPECT_EQ(all_one, all_bases);
    smooth += all_one;
  }
  EXPECT_GE(smooth, 60);
  EXPECT_LT(smooth, 120);
}
