#pragma once

#include <optional>
#include <vector>

#include "qstar/surface_point.hpp"

namespace qstar {

/// Straight piece of a surface curve inside one face, in that face's frame.
struct Segment {
  int face = -1;
  Vec2 a, b;
  SurfacePoint pa, pb;

  double length() const { return (b - a).norm(); }
  Vec2 direction() const { return (b - a).normalized(); }
};

/// True if the segment runs along a mesh edge; `h` receives a half-edge of that edge.
bool is_edge_lying(const Polyhedron& P, const Segment& s, int* h = nullptr);
/// The same segment expressed in the frame of face `f` (which must contain both endpoints).
Segment segment_in_face(const Polyhedron& P, const Segment& s, int f);
/// Point at parameter `t` of the segment as a canonical surface point.
SurfacePoint point_on_segment(const Polyhedron& P, const Segment& s, double t);

enum class StopReason { MaxLength, HitVertex, HitCurve };

struct GeodesicPath {
  std::vector<SurfacePoint> points;
  std::vector<int> faces;
  std::vector<Segment> segments;
  double length = 0.0;
  /// Per segment: maps the segment's face frame into a common plane in which
  /// the path is developed as one polyline, straight across edge crossings.
  std::vector<Rigid2> developed;
  StopReason reason = StopReason::MaxLength;
};

/// Per-face placements of an edge-connected face strip; the first face gets the identity.
std::vector<Rigid2> develop_strip(const Polyhedron& P, const std::vector<int>& faces);

struct StopCondition {
  double max_length = 0.0;
  bool stop_at_vertex = true;
  /// Optional curve; tracing stops at the first point meeting it.
  const std::vector<Segment>* curve = nullptr;
};

GeodesicPath trace_geodesic(const Polyhedron& P, const TangentDirection& start, const StopCondition& stop);

enum class VertexPolicy { Bisector, LeftmostAdmissible };

const char* policy_name(VertexPolicy p);

/// Outgoing direction at a vertex. `arrival` is based at the vertex, lies in
/// the face the path arrived through, and points along the direction of travel.
TangentDirection continue_through_vertex(const Polyhedron& P, const TangentDirection& arrival, VertexPolicy policy);

/// Steps a straight line one face at a time.
class GeodesicWalker {
 public:
  GeodesicWalker(const Polyhedron& P, const TangentDirection& start);

  /// Advances to the next edge or vertex, or by `max_step`, whichever comes first.
  Segment step(double max_step);
  /// Resets the heading at the current point.
  void turn(const TangentDirection& dir);

  const SurfacePoint& position() const { return pos_; }
  int face() const { return face_; }
  const Vec2& point() const { return p_; }
  const Vec2& heading() const { return d_; }
  bool at_vertex() const { return pos_.is_vertex(); }
  /// Direction of travel at the current point, in the current face.
  TangentDirection tangent() const;

 private:
  const Polyhedron* P_;
  SurfacePoint pos_;
  int face_;
  Vec2 p_;
  Vec2 d_;
  int last_face_ = -1;
  Vec2 last_dir_;
};

}  // namespace qstar
