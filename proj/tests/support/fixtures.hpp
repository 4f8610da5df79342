#pragma once

#include <array>
#include <random>
#include <string>

#include "qstar/loop.hpp"
#include "qstar/polyhedron.hpp"
#include "qstar/surface_point.hpp"

namespace qstar::testing {

std::string data_path(const std::string& name);
Polyhedron load_fixture(const std::string& name);

/// Convex hull of n points on a random ellipsoid; every point is a hull vertex.
PolygonSoup random_hull(std::mt19937_64& rng, int n);

struct RandomInstance {
  PolygonSoup soup;
  int face = 0;
  std::array<double, 3> bary{};  // seed point on `face`
  double theta = 0.0;  // direction coordinate at the seed
};

/// The i-th hull (0-based) and loop seed drawn from a generator seeded with `seed`:
/// 8 to 30 points, a random face, barycentrics in (0.05, 0.95) and a random direction.
RandomInstance random_instance(std::uint64_t seed, int i);

/// Face point from 3D coordinates (the point must lie on the surface).
SurfacePoint point_at(const Polyhedron& P, const Vec3& x);

/// Direction at sp along the 3D vector d, in an incident face that d points into.
TangentDirection tangent_at(const Polyhedron& P, const SurfacePoint& sp, const Vec3& d);

/// 3D vector of a tangent direction.
Vec3 direction_3d(const Polyhedron& P, const TangentDirection& td);

/// Loop through the given mesh vertices.
QuasigeodesicLoop vertex_loop(const Polyhedron& P, std::initializer_list<int> ids);

/// Cube loops used throughout the tests (cube.off).
QuasigeodesicLoop cube_bottom_loop(const Polyhedron& P);  // v0 v1 v2 v3
QuasigeodesicLoop cube_corner_loop(const Polyhedron& P);  // v0 v5 v7
QuasigeodesicLoop cube_geodesic_loop(const Polyhedron& P);  // traced, turn pi/2 at the loop point
QuasigeodesicLoop cube_girth_loop(const Polyhedron& P);     // closed geodesic of length 4

/// Geodesic loop around the apex v3 of right_tetra.off, with both v1 and v2
/// projecting to the loop point.
QuasigeodesicLoop tetra_apex_loop(const Polyhedron& P);

/// Straight-line distance in space from vertex v to the loop; never above the surface distance.
double euclidean_distance_to_loop(const Polyhedron& P, int v, const QuasigeodesicLoop& Q);

/// Surface path length from v to the loop through points spaced along edges
/// (k - 1 per edge) and along the loop (k per segment); never below the surface distance.
double steiner_distance_to_loop(const Polyhedron& P, int v, const QuasigeodesicLoop& Q, int k);

}  // namespace qstar::testing
