#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qstar/cuts.hpp"
#include "qstar/polygon.hpp"

namespace qstar {

struct CurvatureTriangleSpec {
  int vertex = -1;
  double apex_angle = 0.0;  // omega(v)
  double leg_length = 0.0;  // length of the cut
  double base_angle = 0.0;  // pi/2 - omega/2 when inserted
  bool inserted = false;    // false when omega >= pi
};

CurvatureTriangleSpec curvature_triangle(const Polyhedron& P, const VertexCut& cut);

/// One half of the surface cut open along the loop and its vertex cuts.
struct CutDisk {
  const Polyhedron* P = nullptr;
  const QuasigeodesicLoop* Q = nullptr;
  Side side = Side::Left;
  std::shared_ptr<const Overlay> overlay;  // loop plus every cut
  std::vector<VertexCut> cuts;  // may include cuts of the other half
  std::vector<char> own;        // per cut: its vertex lies in this half
  std::vector<int> subfaces;  // sub-faces of `overlay` in this half
  std::vector<int> boundary;  // darts, counterclockwise, starting at an image of the loop point
};

/// Cuts the half open along the cuts of its interior vertices. Cuts of the
/// other half only mark their projections on the loop. Throws NonDiskResult
/// if the result is not a disk with every cut vertex on its boundary.
CutDisk cut_half(const Polyhedron& P, const QuasigeodesicLoop& Q, const Half& half, std::vector<VertexCut> cuts);

enum class MarkerKind { LoopPoint, VertexImage, Projection, LoopCorner, TriangleApex };

const char* marker_name(MarkerKind k);

struct Marker {
  MarkerKind kind = MarkerKind::LoopPoint;
  int vertex = -1;          // mesh vertex for images, projections and apexes
  int boundary_index = -1;  // -1 for apexes, which end up inside the polygon
  Vec2 position = Vec2::Zero();
};

/// Boundary edge i runs from boundary vertex i to vertex i+1.
struct BoundaryEdge {
  PieceTag tag = PieceTag::Loop;
  int curve = -1;  // loop segment or cut index; -1 for inserted triangle bases
  double arc_from = 0.0, arc_to = 0.0;  // loop edges only
};

struct SubFacePlacement {
  int subface = -1;
  int face = -1;
  Rigid2 placement;  // face frame -> plane
};

struct PlanarDevelopment {
  Side side = Side::Left;
  bool with_triangles = false;
  std::vector<SubFacePlacement> placements;
  Polygon boundary;
  std::vector<int> boundary_node;  // overlay node of each boundary vertex
  std::vector<BoundaryEdge> edges;
  std::vector<Marker> markers;
  std::vector<CurvatureTriangleSpec> triangles;  // one per cut vertex
  std::vector<double> projection_arcs;           // arc positions of this half's projections
  double area = 0.0;                             // of the boundary polygon
  double intrinsic_area = 0.0;                   // faces of the half plus inserted triangles
  /// Largest disagreement between two placements of the same overlay node.
  double gluing_error = 0.0;
  /// Largest deviation of an inserted triangle base from 2 l sin(omega / 2).
  double triangle_error = 0.0;
  SimplicityCertificate certificate;

  /// Applies a rigid motion to every planar quantity.
  PlanarDevelopment transformed(const Rigid2& T) const;
};

/// Lays out the disk in the plane. Certifies isometry, area and simplicity;
/// throws OverlapDetected if the boundary is not simple.
PlanarDevelopment develop_half(const CutDisk& disk, bool with_triangles);

struct BoundaryAngleReport {
  double max_error = 0.0;  // |angle - (2pi - omega)| at cut-vertex images
  std::vector<double> loop_point_angles;
  double loop_point_total = 0.0;
};

BoundaryAngleReport boundary_angles(const Polyhedron& P, const PlanarDevelopment& dev);

struct ConvexityReport {
  bool convex = true;
  double max_angle = 0.0;
  double total_turn = 0.0;
};

ConvexityReport convexity(const PlanarDevelopment& dev, double eps_angle = 1e-7);

struct SupportCandidate {
  double arc_from = 0.0, arc_to = 0.0;
  /// Loop points at the ends of the arc.
  SurfacePoint from, to;
  /// Boundary vertex indices of the ends (a, b) in each development.
  int left_a = -1, left_b = -1;
  int right_a = -1, right_b = -1;
  /// Smallest signed distance of a boundary vertex to the candidate line, toward the half.
  double left_margin = 0.0, right_margin = 0.0;
  bool supports = false;
};

struct SupportSelection {
  std::vector<SupportCandidate> candidates;  // in arc order from the loop point
  int accepted = -1;                         // first supporting candidate
};

/// Tests every arc of the loop between consecutive marked points.
/// `left` and `right` are the bare developments of the two halves.
SupportSelection select_supporting_segment(const Polyhedron& P, const QuasigeodesicLoop& Q,
                                           const PlanarDevelopment& left, const PlanarDevelopment& right);

struct SupportingSegment {
  double arc_from = 0.0, arc_to = 0.0;
  SurfacePoint from_point, to_point;
  Vec2 from = Vec2::Zero(), to = Vec2::Zero();  // in the unfolding plane
  /// False when no candidate supported both halves and this one was
  /// accepted only because the joined polygon is certified simple.
  bool supports = true;
};

struct UnfoldingStats {
  int n = 0;  // vertices of the polyhedron
  int q = 0;  // faces crossed by the loop
  int m = 0;  // n + q
  double runtime_ms = 0.0;
};

struct Unfolding {
  Polygon polygon;
  SupportingSegment s;
  PlanarDevelopment dev1, dev2;  // in joined position
  std::vector<Marker> markers;   // boundary_index refers to `polygon`
  SimplicityCertificate certificate;
  double area = 0.0;
  double surface_area = 0.0;
  /// Smallest signed distance of dev1 vertices above line(s), and largest of dev2 vertices.
  double dev1_margin = 0.0, dev2_margin = 0.0;
  UnfoldingStats stats;
};

/// Joins the halves along the candidate: dev1's copy of s goes on the
/// x-axis from the origin with dev1 above, dev2 below. Throws
/// OverlapDetected if the merged polygon is not simple.
Unfolding join_halves(const Polyhedron& P, const PlanarDevelopment& dev1, const PlanarDevelopment& dev2,
                      const SupportCandidate& s);

struct UnfoldOptions {
  CutOptions cuts;
  /// Throw LemmaViolation when a cut or convexity check fails.
  bool strict = true;
  /// When no candidate supports both halves, join along the first candidate
  /// whose joined polygon is simple instead of throwing NoSupportingSegment.
  bool unsupported_fallback = true;
};

struct StarUnfolding {
  ValidationReport loop_report;
  std::unique_ptr<HalfSplit> halves;
  std::vector<VertexCut> cuts[2];
  LemmaReport lemmas;
  CutDisk disks[2];
  PlanarDevelopment bare[2];
  PlanarDevelopment triangles[2];
  BoundaryAngleReport angles[2];
  ConvexityReport convex[2];
  bool convex_half[2] = {false, false};
  double gauss_bonnet[2] = {0.0, 0.0};
  SupportSelection support;
  Unfolding unfolding;
};

/// Runs the whole pipeline. Throws LoopConstructionError for an invalid
/// loop and InvariantViolation subclasses when a check fails.
StarUnfolding star_unfold(const Polyhedron& P, const QuasigeodesicLoop& Q, const UnfoldOptions& opts = {});

}  // namespace qstar
