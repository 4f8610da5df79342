#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qstar/polyhedron.hpp"

namespace qstar {

enum class LocusKind { Vertex, Edge, Face };

/// Intrinsic point on the surface.
///
/// Vertex: `index` is the vertex. Edge: `index` is the canonical (smaller)
/// half-edge of the edge and `t` in (0, 1) is measured from its origin.
/// Face: `index` is the face and `bary` holds positive barycentrics.
struct SurfacePoint {
  LocusKind kind = LocusKind::Face;
  int index = -1;
  double t = 0.0;
  std::array<double, 3> bary{0.0, 0.0, 0.0};

  static SurfacePoint at_vertex(int v);
  /// Not canonicalized; `h` may be either half-edge of the edge.
  static SurfacePoint at_edge(int h, double t);
  static SurfacePoint at_face(int f, const std::array<double, 3>& bary);

  bool is_vertex() const { return kind == LocusKind::Vertex; }
  bool is_edge() const { return kind == LocusKind::Edge; }
  bool is_face() const { return kind == LocusKind::Face; }
};

/// A direction at a point, given in the intrinsic frame of an incident face.
struct TangentDirection {
  SurfacePoint at;
  int face = -1;
  Vec2 dir = Vec2(1.0, 0.0);
};

const char* locus_name(LocusKind k);

/// Canonical representation: snaps to vertices and edges within eps_point.
SurfacePoint canonicalize(const Polyhedron& P, const SurfacePoint& sp);
/// Canonical point at face-frame coordinates `p` of face `f`.
SurfacePoint locate(const Polyhedron& P, int f, const Vec2& p);

std::vector<int> incident_faces(const Polyhedron& P, const SurfacePoint& sp);
bool is_incident(const Polyhedron& P, const SurfacePoint& sp, int f);
/// Position in the frame of face `f`; throws MismatchedLocus if not incident.
Vec2 position_in_face(const Polyhedron& P, const SurfacePoint& sp, int f);
Vec3 position_3d(const Polyhedron& P, const SurfacePoint& sp);
/// True if both points have the same locus kind and index and lie within `tol`.
bool same_point(const Polyhedron& P, const SurfacePoint& a, const SurfacePoint& b, double tol);
/// True if the point is a vertex or edge point on the closure of edge `h`.
bool on_edge_closure(const Polyhedron& P, const SurfacePoint& sp, int h);

/// Total surface angle at the point: 2pi - omega at a vertex, 2pi elsewhere.
double total_angle(const Polyhedron& P, const SurfacePoint& sp);

/// Angle in [0, total_angle) of a direction leaving `sp` into face `f`,
/// measured counterclockwise from a fixed reference direction at the point.
double angular_coordinate(const Polyhedron& P, const SurfacePoint& sp, int f, const Vec2& dir);
/// Inverse of angular_coordinate.
TangentDirection direction_at(const Polyhedron& P, const SurfacePoint& sp, double coord);

/// Surface angle on each side of a curve passing through q. `incoming` is the
/// direction of travel on arrival; `outgoing` the direction of departure.
std::pair<double, double> total_angle_sides(const Polyhedron& P, const SurfacePoint& q, const TangentDirection& incoming,
                                            const TangentDirection& outgoing);

/// Angles (left, right) swept counterclockwise between outgoing and backward coordinates.
std::pair<double, double> side_angles(double coord_back, double coord_out, double total);

}  // namespace qstar
