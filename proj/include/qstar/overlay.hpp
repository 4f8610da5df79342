#pragma once

#include <functional>
#include <vector>

#include "qstar/loop.hpp"

namespace qstar {

enum class PieceTag { Mesh, Loop, Cut };

const char* tag_name(PieceTag t);

/// A point where pieces of the subdivision meet.
struct OverlayNode {
  SurfacePoint at;
  int vertex = -1;       // mesh vertex at this node
  int loop_corner = -1;  // index into the loop's corners
  bool on_loop = false;
  std::vector<int> cut_ends;  // cuts whose projection is this node
  std::vector<int> cuts;      // cuts passing through or ending here
};

/// Edge of the subdivision: a piece of a mesh edge or a chord across a face.
struct OverlayPiece {
  int from = -1, to = -1;
  PieceTag tag = PieceTag::Mesh;
  int halfedge = -1;  // mesh-edge pieces: canonical half-edge, from -> to runs along it
  int face = -1;      // chords
  int curve = -1;     // loop segment or cut index
  int travel = 0;     // loop pieces: the dart (0 or 1) running in the loop's direction
  double arc_lo = 0.0, arc_hi = 0.0;  // loop pieces: arc positions from the loop point
};

struct SubFace {
  int face = -1;
  std::vector<int> darts;  // counterclockwise
  double area = 0.0;
};

/// Subdivision of the surface by a loop and optional cut paths ending on it.
///
/// Darts are `2 * piece + dir`; dir 0 runs from -> to. Every dart has exactly
/// one sub-face on its left.
class Overlay {
 public:
  struct CutCurve {
    std::vector<Segment> segments;  // from the vertex to the loop
    int loop_segment = 0;           // where the cut ends on the loop
    double param = 0.0;
  };

  Overlay(const Polyhedron& P, const QuasigeodesicLoop& Q, const std::vector<CutCurve>& cuts = {});

  const Polyhedron& polyhedron() const { return *P_; }
  const std::vector<OverlayNode>& nodes() const { return nodes_; }
  const std::vector<OverlayPiece>& pieces() const { return pieces_; }
  const std::vector<SubFace>& subfaces() const { return subfaces_; }

  int num_darts() const { return 2 * static_cast<int>(pieces_.size()); }
  static int piece_of(int d) { return d / 2; }
  static int reverse(int d) { return d ^ 1; }
  int dart_from(int d) const { return d & 1 ? pieces_[d / 2].to : pieces_[d / 2].from; }
  int dart_to(int d) const { return d & 1 ? pieces_[d / 2].from : pieces_[d / 2].to; }
  int dart_face(int d) const;
  /// Half-edge of the mesh along which a mesh-edge dart runs (in its own face), or -1 for chords.
  int dart_halfedge(int d) const;
  PieceTag tag(int d) const { return pieces_[d / 2].tag; }
  int next(int d) const { return next_[d]; }
  int subface(int d) const { return subface_of_[d]; }

  Vec2 position(int node, int face) const;
  Vec2 dart_start(int d) const { return position(dart_from(d), dart_face(d)); }
  Vec2 dart_end(int d) const { return position(dart_to(d), dart_face(d)); }

  /// Dart of the loop leaving the loop point along the direction of travel.
  int loop_start_dart() const { return loop_start_dart_; }
  int vertex_node(int v) const { return vertex_node_[v]; }
  int corner_node(int i) const { return corner_node_[i]; }
  int cut_end_node(int c) const { return cut_end_node_[c]; }

  /// Labels sub-faces by connectivity across darts for which `crossable` holds.
  std::vector<int> components(const std::function<bool(int dart)>& crossable, int* count = nullptr) const;

 private:
  int node_for(const SurfacePoint& sp);
  double edge_param(int node, int canonical_h) const;
  void build_edge_pieces();
  void mark_edge(int h_canonical, double t0, double t1, PieceTag tag, int curve, int travel_dir);
  void trace_faces();

  const Polyhedron* P_;
  double tol_;
  std::vector<OverlayNode> nodes_;
  std::vector<OverlayPiece> pieces_;
  std::vector<SubFace> subfaces_;
  std::vector<int> next_, subface_of_;
  std::vector<int> vertex_node_, corner_node_, cut_end_node_;
  std::vector<std::vector<std::pair<double, int>>> edge_nodes_;   // by canonical half-edge
  std::vector<std::vector<std::pair<double, int>>> edge_pieces_;  // (start param, piece)
  std::vector<std::vector<int>> face_nodes_;
  std::vector<std::vector<int>> chords_;  // by face
  int loop_start_dart_ = -1;
};

enum class Side { Left, Right };

const char* side_name(Side s);

/// One side of the loop.
struct Half {
  Side side = Side::Left;
  std::vector<int> subfaces;           // in the loop-only overlay
  std::vector<int> faces;              // mesh faces with a piece in this half
  std::vector<int> interior_vertices;  // strictly inside
  double enclosed_curvature = 0.0;
  /// Turn of the loop toward this half, including the loop point.
  double turn = 0.0;
  int euler = 0;
  double area = 0.0;

  double gauss_bonnet() const { return turn + enclosed_curvature; }
  bool contains_vertex(int v) const;
};

struct HalfSplit {
  Overlay overlay;
  Half left, right;
  std::vector<int> loop_vertices;  // mesh vertices lying on the loop

  const Half& half(Side s) const { return s == Side::Left ? left : right; }
};

/// Splits the surface along the loop. Throws SubdivisionFailure unless both
/// sides come out as disks.
HalfSplit split_halves(const Polyhedron& P, const QuasigeodesicLoop& Q);

/// Sub-face labels (0 left, 1 right) of an overlay cut along its loop.
std::vector<int> side_labels(const Overlay& ov);

}  // namespace qstar
