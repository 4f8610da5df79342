#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qstar/geodesic.hpp"

namespace qstar {

struct VertexPassage {
  int branch = 0;
  int vertex = -1;
  double at_length = 0.0;  // branch length when the vertex was reached
  double left = 0.0;       // chosen side angles
  double right = 0.0;
};

/// How a traced loop came about.
struct ConstructionTrace {
  bool traced = false;
  VertexPolicy policy = VertexPolicy::Bisector;
  double branch_length[2] = {0.0, 0.0};
  std::vector<VertexPassage> passages;
  /// "between" (the two branches met) or "within" (one branch crossed itself).
  std::string closure;
  int contact_branch = -1;
  int contact_segment = -1;
  /// Number of contacts found at the closing step (> 1 signals a simultaneous touch).
  int contacts = 0;
};

/// Closed curve on the surface, straight inside faces.
///
/// Segment i runs from corners[i] to corners[i+1] (cyclically). Corners are
/// the edge and vertex crossings plus the loop point.
struct QuasigeodesicLoop {
  std::vector<SurfacePoint> corners;
  std::vector<Segment> segments;
  int loop_point = 0;
  /// Per corner: surface angle to the left and right of the direction of travel.
  std::vector<double> left, right;
  int q = 0;
  double turn_left = 0.0;
  double turn_right = 0.0;
  double length = 0.0;
  ConstructionTrace trace;

  int size() const { return static_cast<int>(corners.size()); }
  /// beta = max(L(x), R(x)).
  double beta() const { return std::max(left[loop_point], right[loop_point]); }
  /// Arc length from the loop point to the start of segment i.
  double arc_start(int i) const;
  double arc_position(int segment, double param) const;

 private:
  friend void finalize_loop(const Polyhedron&, QuasigeodesicLoop&);
  std::vector<double> arc_;  // from corner 0
};

/// Recomputes corner angles, turns, length and arc table from corners and segments.
void finalize_loop(const Polyhedron& P, QuasigeodesicLoop& Q);

struct LoopOptions {
  VertexPolicy policy = VertexPolicy::Bisector;
  /// Per-branch length bound; 0 selects 50 x bounding-box diagonal.
  double max_length = 0.0;
};

/// Extends a geodesic from p in directions u and -u until the branches meet
/// or one crosses itself, and closes the loop there.
QuasigeodesicLoop construct_loop(const Polyhedron& P, const SurfacePoint& p, const TangentDirection& u,
                                 const LoopOptions& opts = {});

/// Loop through the given corners joined by straight segments. Consecutive
/// corners must share a face or an input polygon. When `loop_point` is not
/// given, the corner with the largest side angle above pi is used (corner 0 if none).
QuasigeodesicLoop loop_from_corners(const Polyhedron& P, const std::vector<SurfacePoint>& corners,
                                    std::optional<int> loop_point = std::nullopt);

struct CornerReport {
  int index = 0;
  double left = 0.0;
  double right = 0.0;
  bool bending = false;
  bool violation = false;
};

struct ValidationReport {
  std::vector<CornerReport> corners;
  int loop_point = 0;
  double beta = 0.0;
  bool simple = true;
  bool valid = true;
  double turn_left = 0.0;
  double turn_right = 0.0;
  std::vector<std::string> problems;
};

ValidationReport validate_loop(const Polyhedron& P, const QuasigeodesicLoop& Q);

/// True if the corner bends (a side angle differs from pi) or is the loop point.
bool is_marked_corner(const Polyhedron& P, const QuasigeodesicLoop& Q, int corner);

}  // namespace qstar
