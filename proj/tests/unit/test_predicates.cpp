#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>

#include "qstar/predicates.hpp"

using namespace qstar;
using boost::multiprecision::cpp_rational;

namespace {

int exact_sign(const Vec2& a, const Vec2& b, const Vec2& c) {
  const cpp_rational ax(a.x()), ay(a.y()), bx(b.x()), by(b.y()), cx(c.x()), cy(c.y());
  const cpp_rational det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

}  // namespace

TEST(Orient2d, SimpleCases) {
  EXPECT_GT(orient2d({0, 0}, {1, 0}, {0, 1}), 0.0);
  EXPECT_LT(orient2d({0, 0}, {0, 1}, {1, 0}), 0.0);
  EXPECT_EQ(orient2d({0, 0}, {1, 1}, {2, 2}), 0.0);
}

TEST(Orient2d, NearCollinearGridMatchesRationalArithmetic) {
  // Perturbations of a point near the line y = x by single ulps.
  const Vec2 b(12.0, 12.0), c(24.0, 24.0);
  const double ulp = std::ldexp(1.0, -53);
  int mismatches = 0, zeros = 0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const Vec2 a(0.5 + i * ulp, 0.5 + j * ulp);
      const int s = orientation(a, b, c);
      if (s != exact_sign(a, b, c)) ++mismatches;
      if (s == 0) ++zeros;
    }
  EXPECT_EQ(mismatches, 0);
  EXPECT_GT(zeros, 0);
}

TEST(Orient2d, RandomNearlyDegenerateTriplesMatchRationalArithmetic) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int mismatches = 0;
  for (int n = 0; n < 20000; ++n) {
    const Vec2 a(u(rng), u(rng)), b(u(rng), u(rng));
    const double t = u(rng);
    Vec2 c = a + t * (b - a);
    c.x() = std::nextafter(c.x(), n % 3 == 0 ? 2.0 : -2.0);
    if (orientation(a, b, c) != exact_sign(a, b, c)) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(Segments, IntersectionCases) {
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  EXPECT_TRUE(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 5}));   // shared endpoint
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));   // collinear overlap
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));  // collinear, apart
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));  // parallel
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {1, 1}));   // T junction
  EXPECT_FALSE(segments_intersect({0, 0}, {2, 0}, {1, 1e-300}, {1, 1}));
}

TEST(Segments, OnSegment) {
  EXPECT_TRUE(on_segment({0.5, 0.5}, {0, 0}, {1, 1}));
  EXPECT_FALSE(on_segment({1.5, 1.5}, {0, 0}, {1, 1}));
  EXPECT_FALSE(on_segment({0.5, 0.5 + 1e-16}, {0, 0}, {1, 1}));
}
