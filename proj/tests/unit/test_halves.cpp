#include <numeric>
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qstar/errors.hpp"
#include "qstar/overlay.hpp"

using namespace qstar;
using namespace qstar::testing;

namespace {

std::vector<SurfacePoint> vertices(std::initializer_list<int> ids) {
  std::vector<SurfacePoint> out;
  for (int v : ids) out.push_back(SurfacePoint::at_vertex(v));
  return out;
}

void expect_disk_halves(const Polyhedron& P, const HalfSplit& S, double tol) {
  for (const Half* H : {&S.left, &S.right}) {
    EXPECT_EQ(H->euler, 1);
    EXPECT_NEAR(H->gauss_bonnet(), 2 * kPi, tol);
  }
  EXPECT_NEAR(S.left.area + S.right.area, P.surface_area(), 1e-10 * P.surface_area());
  // Interior vertices of the halves and vertices on the loop partition all vertices.
  std::vector<int> all = S.left.interior_vertices;
  all.insert(all.end(), S.right.interior_vertices.begin(), S.right.interior_vertices.end());
  all.insert(all.end(), S.loop_vertices.begin(), S.loop_vertices.end());
  std::sort(all.begin(), all.end());
  std::vector<int> expect(P.num_vertices());
  std::iota(expect.begin(), expect.end(), 0);
  EXPECT_EQ(all, expect);
  double omega = S.left.enclosed_curvature + S.right.enclosed_curvature;
  for (int v : S.loop_vertices) omega += P.curvature(v);
  EXPECT_NEAR(omega, 4 * kPi, tol);
}

}  // namespace

TEST(Halves, BottomSquare) {
  const Polyhedron P = load_fixture("cube.off");
  const auto Q = loop_from_corners(P, vertices({0, 1, 2, 3}));
  const HalfSplit S = split_halves(P, Q);
  EXPECT_EQ(S.left.interior_vertices, (std::vector<int>{4, 5, 6, 7}));
  EXPECT_TRUE(S.right.interior_vertices.empty());
  EXPECT_NEAR(S.left.enclosed_curvature, 2 * kPi, 1e-12);
  EXPECT_NEAR(S.left.turn, 0.0, 1e-12);
  EXPECT_NEAR(S.right.turn, 2 * kPi, 1e-12);
  EXPECT_NEAR(S.left.area, 5.0, 1e-12);
  EXPECT_NEAR(S.right.area, 1.0, 1e-12);
  EXPECT_EQ(S.right.faces.size(), 2u);
  expect_disk_halves(P, S, 1e-12);
}

TEST(Halves, CornerTriangle) {
  const Polyhedron P = load_fixture("cube.off");
  const auto Q = loop_from_corners(P, vertices({0, 5, 7}));
  const HalfSplit S = split_halves(P, Q);
  EXPECT_EQ(S.left.interior_vertices, (std::vector<int>{4}));
  EXPECT_EQ(S.right.interior_vertices, (std::vector<int>{1, 2, 3, 6}));
  EXPECT_NEAR(S.left.area, 1.5, 1e-12);
  expect_disk_halves(P, S, 1e-12);
}

TEST(Halves, GirthBand) {
  const Polyhedron P = load_fixture("cube.off");
  const SurfacePoint p = point_at(P, Vec3(0.5, 0.5, 0));
  const auto Q = construct_loop(P, p, tangent_at(P, p, Vec3(1, 0, 0)));
  const HalfSplit S = split_halves(P, Q);
  EXPECT_EQ(S.left.interior_vertices.size(), 4u);
  EXPECT_EQ(S.right.interior_vertices.size(), 4u);
  EXPECT_NEAR(S.left.area, 3.0, 1e-12);
  expect_disk_halves(P, S, 1e-12);
  for (int v : S.left.interior_vertices) EXPECT_EQ(P.vertex(v).y(), P.vertex(S.left.interior_vertices[0]).y());
}

TEST(Halves, SubFacesTileEachFace) {
  std::mt19937_64 rng(41);
  const Polyhedron P = Polyhedron::build(random_hull(rng, 16));
  const SurfacePoint p = canonicalize(P, SurfacePoint::at_face(2, {0.2, 0.3, 0.5}));
  const auto Q = construct_loop(P, p, direction_at(P, p, 0.7));
  const HalfSplit S = split_halves(P, Q);
  std::vector<double> area(P.num_faces(), 0.0);
  for (const auto& sf : S.overlay.subfaces()) area[sf.face] += sf.area;
  for (int f = 0; f < P.num_faces(); ++f) EXPECT_NEAR(area[f], P.face_area(f), 1e-12 * P.surface_area());
  // Every dart's sub-face lies on its left, and twin darts of loop pieces see different sides.
  const auto side = side_labels(S.overlay);
  for (int d = 0; d < S.overlay.num_darts(); d += 2)
    if (S.overlay.tag(d) == PieceTag::Loop)
      EXPECT_NE(side[S.overlay.subface(d)], side[S.overlay.subface(d + 1)]);
}

TEST(Halves, RandomLoopsSplitIntoDisks) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int done = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Polyhedron P = Polyhedron::build(random_hull(rng, 8 + trial % 23));
    const int f = static_cast<int>(u(rng) * P.num_faces()) % P.num_faces();
    const double b0 = 0.2 + 0.6 * u(rng), b1 = (1 - b0) * (0.2 + 0.6 * u(rng));
    const SurfacePoint p = canonicalize(P, SurfacePoint::at_face(f, {b0, b1, 1 - b0 - b1}));
    QuasigeodesicLoop Q;
    try {
      Q = construct_loop(P, p, direction_at(P, p, kTwoPi * u(rng)));
    } catch (const NoIntersection&) {
      continue;
    }
    ++done;
    expect_disk_halves(P, split_halves(P, Q), 1e-8);
  }
  EXPECT_GT(done, 30);
}
