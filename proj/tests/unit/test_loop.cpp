#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qstar/errors.hpp"
#include "qstar/loop.hpp"

using namespace qstar;
using namespace qstar::testing;

namespace {

std::vector<SurfacePoint> vertices(std::initializer_list<int> ids) {
  std::vector<SurfacePoint> out;
  for (int v : ids) out.push_back(SurfacePoint::at_vertex(v));
  return out;
}

// Turn on both sides must add up to the curvature at corners sitting on vertices.
void expect_turn_balance(const Polyhedron& P, const QuasigeodesicLoop& Q, double tol) {
  double omega = 0.0;
  for (const auto& c : Q.corners)
    if (c.is_vertex()) omega += P.curvature(c.index);
  EXPECT_NEAR(Q.turn_left + Q.turn_right, omega, tol);
}

}  // namespace

TEST(Loop, GirthBandOnCube) {
  const Polyhedron P = load_fixture("cube.off");
  const SurfacePoint p = point_at(P, Vec3(0.5, 0.5, 0));
  const QuasigeodesicLoop Q = construct_loop(P, p, tangent_at(P, p, Vec3(1, 0, 0)));
  EXPECT_NEAR(Q.length, 4.0, 1e-12);
  EXPECT_EQ(Q.trace.closure, "between");
  EXPECT_NEAR(Q.trace.branch_length[0], 2.0, 1e-12);
  EXPECT_NEAR(Q.trace.branch_length[1], 2.0, 1e-12);
  for (int i = 0; i < Q.size(); ++i) {
    EXPECT_NEAR(Q.left[i], kPi, 1e-12);
    EXPECT_NEAR(Q.right[i], kPi, 1e-12);
    EXPECT_FALSE(Q.corners[i].is_vertex());
  }
  EXPECT_NEAR(Q.turn_left, 0.0, 1e-12);
  EXPECT_NEAR(Q.beta(), kPi, 1e-12);
  const ValidationReport rep = validate_loop(P, Q);
  EXPECT_TRUE(rep.valid);
  EXPECT_TRUE(rep.simple);
  // The branches meet at the centre of the top face.
  bool found = false;
  for (const auto& c : Q.corners) found |= (position_3d(P, c) - Vec3(0.5, 0.5, 1)).norm() < 1e-12;
  EXPECT_TRUE(found);
}

TEST(Loop, BottomSquareOfCube) {
  const Polyhedron P = load_fixture("cube.off");
  const QuasigeodesicLoop Q = loop_from_corners(P, vertices({0, 1, 2, 3}));
  ASSERT_EQ(Q.size(), 4);
  EXPECT_EQ(Q.loop_point, 0);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(Q.left[i], kPi, 1e-12);
    EXPECT_NEAR(Q.right[i], kPi / 2, 1e-12);
    EXPECT_TRUE(is_marked_corner(P, Q, i));
  }
  EXPECT_NEAR(Q.length, 4.0, 1e-12);
  EXPECT_NEAR(Q.turn_left, 0.0, 1e-12);
  EXPECT_NEAR(Q.turn_right, 2 * kPi, 1e-12);
  EXPECT_TRUE(validate_loop(P, Q).valid);
  expect_turn_balance(P, Q, 1e-12);
}

TEST(Loop, CornerTriangleOfCube) {
  const Polyhedron P = load_fixture("cube.off");
  const QuasigeodesicLoop Q = loop_from_corners(P, vertices({0, 5, 7}));
  // The top-face segment crosses the fan diagonal v4-v6, which adds one flat corner.
  ASSERT_EQ(Q.size(), 4);
  int crossing = 0;
  for (int i = 0; i < Q.size(); ++i) {
    if (Q.corners[i].is_vertex()) {
      EXPECT_NEAR(Q.left[i], kPi / 2, 1e-12);
      EXPECT_NEAR(Q.right[i], kPi, 1e-12);
    } else {
      ++crossing;
      EXPECT_LT((position_3d(P, Q.corners[i]) - Vec3(0.5, 0.5, 1)).norm(), 1e-12);
      EXPECT_FALSE(is_marked_corner(P, Q, i));
    }
  }
  EXPECT_EQ(crossing, 1);
  EXPECT_NEAR(Q.length, 3 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(Q.turn_left, 3 * kPi / 2, 1e-12);
  EXPECT_NEAR(Q.turn_right, 0.0, 1e-12);
  EXPECT_TRUE(validate_loop(P, Q).valid);
  expect_turn_balance(P, Q, 1e-12);
}

TEST(Loop, ReflexCornersAreRejected) {
  // Two sides of the bottom square plus its diagonal: v0 and v2 each see 5pi/4 on one side.
  const Polyhedron P = load_fixture("cube.off");
  const QuasigeodesicLoop Q = loop_from_corners(P, vertices({0, 1, 2}));
  const ValidationReport rep = validate_loop(P, Q);
  EXPECT_FALSE(rep.valid);
  int violations = 0;
  for (const auto& c : rep.corners) violations += c.violation;
  EXPECT_EQ(violations, 1);
  EXPECT_NEAR(rep.beta, 5 * kPi / 4, 1e-12);
}

TEST(Loop, DoubledSegmentIsNotSimple) {
  const Polyhedron P = load_fixture("cube.off");
  const QuasigeodesicLoop Q = loop_from_corners(P, vertices({0, 2}));
  const ValidationReport rep = validate_loop(P, Q);
  EXPECT_FALSE(rep.valid);
}

TEST(Loop, CornersWithoutCommonPolygon) {
  const Polyhedron P = load_fixture("cube.off");
  EXPECT_THROW(loop_from_corners(P, vertices({0, 6, 3})), LoopConstructionError);
  EXPECT_THROW(loop_from_corners(P, vertices({0})), LoopConstructionError);
  EXPECT_THROW(loop_from_corners(P, vertices({0, 1, 2, 3}), 7), IndexOutOfRange);
}

TEST(Loop, SeedAtVertexIsRejected) {
  const Polyhedron P = load_fixture("cube.off");
  const SurfacePoint v = SurfacePoint::at_vertex(0);
  EXPECT_THROW(construct_loop(P, v, direction_at(P, v, 0.1)), StartAtVertex);
}

TEST(Loop, LengthBoundReportsTracedLength) {
  const Polyhedron P = load_fixture("regular_tetra.obj");
  const SurfacePoint p = canonicalize(P, SurfacePoint::at_face(0, {0.3, 0.3, 0.4}));
  LoopOptions opts;
  opts.max_length = 1e-3;
  try {
    construct_loop(P, p, direction_at(P, p, 0.4), opts);
    FAIL() << "expected NoIntersection";
  } catch (const NoIntersection& e) {
    EXPECT_NEAR(e.traced_length(), 2e-3, 1e-12);
  }
}

TEST(Loop, RightTetrahedronSeed) {
  const Polyhedron P = load_fixture("right_tetra.off");
  int f = -1;
  for (int g = 0; g < P.num_faces(); ++g) {
    auto fv = P.face(g);
    std::sort(fv.begin(), fv.end());
    if (fv == std::array<int, 3>{0, 1, 3}) f = g;
  }
  ASSERT_GE(f, 0);
  const Vec3 x = 0.08 * P.vertex(0) + 0.05 * P.vertex(1) + 0.87 * P.vertex(3);
  const SurfacePoint p = point_at(P, x);
  ASSERT_TRUE(p.is_face());
  const TangentDirection u{p, f, Vec2(1, 0)};
  const QuasigeodesicLoop Q = construct_loop(P, p, u);
  const ValidationReport rep = validate_loop(P, Q);
  EXPECT_TRUE(rep.valid);
  expect_turn_balance(P, Q, 1e-9);
}

TEST(Loop, ConstructionIsDeterministic) {
  std::mt19937_64 rng(17);
  const Polyhedron P = Polyhedron::build(random_hull(rng, 25));
  const SurfacePoint p = canonicalize(P, SurfacePoint::at_face(3, {0.3, 0.3, 0.4}));
  const QuasigeodesicLoop a = construct_loop(P, p, direction_at(P, p, 1.0));
  const QuasigeodesicLoop b = construct_loop(P, p, direction_at(P, p, 1.0));
  ASSERT_EQ(a.size(), b.size());
  for (int i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.segments[i].face, b.segments[i].face);
    EXPECT_EQ(a.segments[i].a, b.segments[i].a);
    EXPECT_EQ(a.segments[i].b, b.segments[i].b);
  }
  EXPECT_EQ(a.length, b.length);
}

TEST(Loop, RandomSeedsGiveValidLoops) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int built = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Polyhedron P = Polyhedron::build(random_hull(rng, 10 + trial % 20));
    const int f = static_cast<int>(u(rng) * P.num_faces()) % P.num_faces();
    const double b0 = 0.2 + 0.6 * u(rng), b1 = (1 - b0) * (0.2 + 0.6 * u(rng));
    const SurfacePoint p = canonicalize(P, SurfacePoint::at_face(f, {b0, b1, 1 - b0 - b1}));
    for (VertexPolicy pol : {VertexPolicy::Bisector, VertexPolicy::LeftmostAdmissible}) {
      LoopOptions opts;
      opts.policy = pol;
      QuasigeodesicLoop Q;
      try {
        Q = construct_loop(P, p, direction_at(P, p, kTwoPi * u(rng)), opts);
      } catch (const NoIntersection&) {
        continue;
      }
      ++built;
      const ValidationReport rep = validate_loop(P, Q);
      EXPECT_TRUE(rep.valid) << (rep.problems.empty() ? "" : rep.problems.front());
      EXPECT_LT(Q.beta(), kTwoPi);
      expect_turn_balance(P, Q, 1e-8);
      for (int i = 0; i < Q.size(); ++i) {
        if (i == Q.loop_point) continue;
        EXPECT_LE(Q.left[i], kPi + 1e-9);
        EXPECT_LE(Q.right[i], kPi + 1e-9);
      }
    }
  }
  EXPECT_GT(built, 40);
}
