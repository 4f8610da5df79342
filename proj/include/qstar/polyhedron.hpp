#pragma once

#include <array>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "qstar/geometry.hpp"

namespace qstar {

/// Scale-relative tolerances derived from the bounding-box diagonal.
struct Tolerances {
  double planar = 1e-9;  // convexity tests
  double point = 1e-12;  // locus snapping
  double angle = 1e-9;   // radians
  double area = 1e-12;   // degenerate-face threshold

  static Tolerances for_diagonal(double diag);
};

struct LoadOptions {
  std::optional<double> tol_angle;
  std::optional<double> tol_point;
};

enum class MeshFormat { OFF, OBJ };

/// Raw polygon soup as read from disk.
struct PolygonSoup {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> polygons;
};

/// Closed convex triangulated surface with half-edge connectivity.
///
/// Half-edge h = 3f + k runs from corner k to corner (k+1)%3 of face f.
/// Every face carries an intrinsic 2D frame: corner 0 at the origin,
/// corner 1 on the positive x-axis, corner 2 in the upper half-plane.
class Polyhedron {
 public:
  static Polyhedron build(const PolygonSoup& soup, const LoadOptions& opts = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_halfedges() const { return 3 * num_faces(); }
  int num_edges() const { return num_halfedges() / 2; }

  const Vec3& vertex(int v) const { return vertices_[v]; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::array<int, 3>& face(int f) const { return faces_[f]; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  /// Index of the input polygon a triangle was cut from.
  int source_face(int f) const { return source_face_[f]; }

  static int face_of(int h) { return h / 3; }
  static int next(int h) { return 3 * (h / 3) + (h + 1) % 3; }
  static int prev(int h) { return 3 * (h / 3) + (h + 2) % 3; }
  static int halfedge(int f, int k) { return 3 * f + k; }
  int twin(int h) const { return twin_[h]; }
  int origin(int h) const { return faces_[h / 3][h % 3]; }
  int dest(int h) const { return faces_[h / 3][(h + 1) % 3]; }
  /// Smaller of h and twin(h); identifies the undirected edge.
  int canonical(int h) const { return std::min(h, twin_[h]); }
  /// True for interior diagonals introduced by fan triangulation.
  bool is_flat(int h) const { return flat_[h]; }
  /// Half-edge from a to b, or -1.
  int find_halfedge(int a, int b) const;

  /// Corner position of face f, corner k, in the face frame.
  const Vec2& corner(int f, int k) const { return frame_[f][k]; }
  /// Corner position of the origin of h in the frame of face(h).
  const Vec2& tail(int h) const { return frame_[h / 3][h % 3]; }
  const Vec2& head(int h) const { return frame_[h / 3][(h + 1) % 3]; }
  /// Interior angle at corner k of face f.
  double corner_angle(int f, int k) const { return angle_[f][k]; }
  double corner_angle(int h) const { return angle_[h / 3][h % 3]; }
  double face_area(int f) const { return area_[f]; }
  double edge_length(int h) const { return (head(h) - tail(h)).norm(); }
  /// Maps the frame of face(twin(h)) into the frame of face(h).
  const Rigid2& edge_transform(int h) const { return edge_transform_[h]; }
  /// Lifts a face-frame point to 3D.
  Vec3 to_3d(int f, const Vec2& p) const;
  Vec3 normal(int f) const { return normal_[f]; }

  /// Outgoing half-edges of v in counterclockwise order, starting from the smallest index.
  const std::vector<int>& fan(int v) const { return fans_[v]; }
  /// Sum of corner angles preceding h in fan(origin(h)).
  double fan_offset(int h) const { return fan_offset_[h]; }
  /// Corner index of vertex v in face f, or -1.
  int corner_index(int f, int v) const;

  double curvature(int v) const { return curvature_[v]; }
  double total_angle(int v) const { return kTwoPi - curvature_[v]; }
  double surface_area() const { return surface_area_; }
  double diagonal() const { return diagonal_; }
  const Tolerances& tol() const { return tol_; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<int> source_face_;
  std::vector<int> twin_;
  std::vector<bool> flat_;
  std::vector<std::array<Vec2, 3>> frame_;
  std::vector<std::array<double, 3>> angle_;
  std::vector<double> area_;
  std::vector<Vec3> normal_;
  std::vector<Vec3> axis_x_, axis_y_;
  std::vector<Rigid2> edge_transform_;
  std::vector<std::vector<int>> fans_;
  std::vector<double> fan_offset_;
  std::vector<double> curvature_;
  double surface_area_ = 0.0;
  double diagonal_ = 0.0;
  Tolerances tol_;
};

PolygonSoup read_off(std::istream& in);
PolygonSoup read_obj(std::istream& in);
void write_off(std::ostream& out, const PolygonSoup& soup);

Polyhedron load_polyhedron(std::istream& in, MeshFormat format, const LoadOptions& opts = {});
/// Format is taken from the extension (.off / .obj) unless given.
Polyhedron load_polyhedron_file(const std::string& path, std::optional<MeshFormat> format = std::nullopt,
                                const LoadOptions& opts = {});

/// omega(v) = 2pi minus the sum of incident face angles.
double vertex_curvature(const Polyhedron& P, int v);

}  // namespace qstar
