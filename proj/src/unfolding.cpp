#include "qstar/unfolding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "qstar/errors.hpp"
#include "qstar/log.hpp"

namespace qstar {

using nlohmann::json;

namespace {

json polygon_json(const Polygon& poly) {
  json a = json::array();
  for (const Vec2& p : poly) a.push_back({p.x(), p.y()});
  return a;
}

json overlap_witness(const Polygon& poly, const SimplicityCertificate& c) {
  const int n = static_cast<int>(poly.size());
  auto seg = [&](int e) { return json{{poly[e].x(), poly[e].y()}, {poly[(e + 1) % n].x(), poly[(e + 1) % n].y()}}; };
  return json{{"edges", {c.edge_i, c.edge_j}},
              {"segments", {seg(c.edge_i), seg(c.edge_j)}},
              {"polygon", polygon_json(poly)}};
}

bool is_loop_point_node(const Overlay& ov, const QuasigeodesicLoop& Q, int node) {
  return ov.nodes()[node].loop_corner == Q.loop_point;
}

}  // namespace

const char* marker_name(MarkerKind k) {
  switch (k) {
    case MarkerKind::LoopPoint: return "loop-point";
    case MarkerKind::VertexImage: return "vertex";
    case MarkerKind::Projection: return "projection";
    case MarkerKind::LoopCorner: return "loop-corner";
    case MarkerKind::TriangleApex: return "triangle-apex";
  }
  return "?";
}

CurvatureTriangleSpec curvature_triangle(const Polyhedron& P, const VertexCut& cut) {
  CurvatureTriangleSpec t;
  t.vertex = cut.vertex;
  t.apex_angle = P.curvature(cut.vertex);
  t.leg_length = cut.length;
  t.inserted = t.apex_angle < kPi;
  t.base_angle = t.inserted ? kPi / 2 - t.apex_angle / 2 : 0.0;
  return t;
}

CutDisk cut_half(const Polyhedron& P, const QuasigeodesicLoop& Q, const Half& half, std::vector<VertexCut> cuts) {
  std::vector<int> cut_vertices;
  for (const auto& c : cuts)
    if (half.contains_vertex(c.vertex)) cut_vertices.push_back(c.vertex);
  std::sort(cut_vertices.begin(), cut_vertices.end());
  if (cut_vertices != half.interior_vertices)
    throw NonDiskResult("cuts do not match the interior vertices of the " + std::string(side_name(half.side)) +
                            " half",
                        json{{"cut_vertices", cut_vertices}, {"interior_vertices", half.interior_vertices}}.dump());

  std::vector<Overlay::CutCurve> curves;
  for (const auto& c : cuts) curves.push_back(as_curve(c));
  CutDisk D;
  D.P = &P;
  D.Q = &Q;
  D.side = half.side;
  D.overlay = std::make_shared<const Overlay>(P, Q, curves);
  D.cuts = std::move(cuts);
  for (const auto& c : D.cuts) D.own.push_back(half.contains_vertex(c.vertex));
  const Overlay& ov = *D.overlay;

  const int want = half.side == Side::Left ? 0 : 1;
  const auto label = side_labels(ov);
  std::vector<char> mine(ov.subfaces().size(), 0);
  for (size_t i = 0; i < label.size(); ++i)
    if (label[i] == want) {
      D.subfaces.push_back(static_cast<int>(i));
      mine[i] = 1;
    }

  int count = 0;
  const auto comp = ov.components([&](int d) { return ov.tag(d) == PieceTag::Mesh; }, &count);
  std::set<int> parts;
  for (int s : D.subfaces) parts.insert(comp[s]);
  if (parts.size() != 1)
    throw NonDiskResult("cut half falls into " + std::to_string(parts.size()) + " pieces",
                        json{{"side", side_name(half.side)}, {"pieces", parts.size()}}.dump());

  // Starting dart: leaves an image of the loop point along the loop.
  int start = -1;
  if (half.side == Side::Left) {
    start = ov.loop_start_dart();
  } else {
    for (int d = 0; d < ov.num_darts() && start < 0; ++d)
      if (ov.tag(d) == PieceTag::Loop && mine[ov.subface(d)] && is_loop_point_node(ov, Q, ov.dart_from(d))) start = d;
  }
  if (start < 0 || !mine[ov.subface(start)]) throw NonDiskResult("no boundary dart at the loop point");

  int boundary_darts = 0;
  for (int d = 0; d < ov.num_darts(); ++d)
    if (ov.tag(d) != PieceTag::Mesh && mine[ov.subface(d)]) ++boundary_darts;

  int d = start;
  do {
    D.boundary.push_back(d);
    if (static_cast<int>(D.boundary.size()) > boundary_darts) break;
    int e = ov.next(d);
    int guard = 0;
    while (ov.tag(e) == PieceTag::Mesh) {
      e = ov.next(Overlay::reverse(e));
      if (++guard > ov.num_darts()) throw NonDiskResult("boundary walk does not close");
    }
    d = e;
  } while (d != start);
  if (static_cast<int>(D.boundary.size()) != boundary_darts)
    throw NonDiskResult("cut half has more than one boundary cycle",
                        json{{"side", side_name(half.side)},
                             {"walked", D.boundary.size()},
                             {"boundary_darts", boundary_darts}}
                            .dump());

  std::set<int> on_boundary;
  for (int b : D.boundary) on_boundary.insert(ov.dart_from(b));
  for (int v : half.interior_vertices)
    if (!on_boundary.count(ov.vertex_node(v)))
      throw NonDiskResult("vertex " + std::to_string(v) + " is not on the boundary of the cut half");
  return D;
}

PlanarDevelopment PlanarDevelopment::transformed(const Rigid2& T) const {
  PlanarDevelopment out = *this;
  for (auto& pl : out.placements) pl.placement = T * pl.placement;
  for (auto& p : out.boundary) p = T(p);
  for (auto& m : out.markers) m.position = T(m.position);
  return out;
}

PlanarDevelopment develop_half(const CutDisk& disk, bool with_triangles) {
  const Polyhedron& P = *disk.P;
  const QuasigeodesicLoop& Q = *disk.Q;
  const Overlay& ov = *disk.overlay;
  PlanarDevelopment dev;
  dev.side = disk.side;
  dev.with_triangles = with_triangles;

  // Breadth-first layout across mesh darts.
  std::vector<int> slot(ov.subfaces().size(), -1);
  for (size_t i = 0; i < disk.subfaces.size(); ++i) slot[disk.subfaces[i]] = static_cast<int>(i);
  std::vector<Rigid2> T(disk.subfaces.size());
  std::vector<char> placed(disk.subfaces.size(), 0);
  const int root = ov.subface(disk.boundary.front());
  std::deque<int> queue{root};
  placed[slot[root]] = 1;
  while (!queue.empty()) {
    const int a = queue.front();
    queue.pop_front();
    for (int d : ov.subfaces()[a].darts) {
      if (ov.tag(d) != PieceTag::Mesh) continue;
      const int r = Overlay::reverse(d);
      const int b = ov.subface(r);
      if (slot[b] < 0) continue;
      const int h = ov.dart_halfedge(d);
      const Rigid2 Tb = T[slot[a]] * P.edge_transform(h);
      if (!placed[slot[b]]) {
        T[slot[b]] = Tb;
        placed[slot[b]] = 1;
        queue.push_back(b);
      } else {
        const double e1 = (T[slot[a]](ov.dart_start(d)) - T[slot[b]](ov.dart_end(r))).norm();
        const double e2 = (T[slot[a]](ov.dart_end(d)) - T[slot[b]](ov.dart_start(r))).norm();
        dev.gluing_error = std::max({dev.gluing_error, e1, e2});
      }
    }
  }
  for (size_t i = 0; i < disk.subfaces.size(); ++i) {
    if (!placed[i]) throw NonDiskResult("sub-face not reached by the layout");
    const int s = disk.subfaces[i];
    dev.placements.push_back({s, ov.subfaces()[s].face, T[i]});
    dev.intrinsic_area += ov.subfaces()[s].area;
  }

  std::vector<int> cut_of_vertex(P.num_vertices(), -1);
  std::vector<int> triangle_of(disk.cuts.size(), -1);
  for (size_t c = 0; c < disk.cuts.size(); ++c) {
    if (!disk.own[c]) continue;
    cut_of_vertex[disk.cuts[c].vertex] = static_cast<int>(c);
    triangle_of[c] = static_cast<int>(dev.triangles.size());
    dev.triangles.push_back(curvature_triangle(P, disk.cuts[c]));
    dev.projection_arcs.push_back(disk.cuts[c].arc);
  }

  // Boundary polygon with edge data.
  for (int d : disk.boundary) {
    dev.boundary.push_back(T[slot[ov.subface(d)]](ov.dart_start(d)));
    dev.boundary_node.push_back(ov.dart_from(d));
    const OverlayPiece& piece = ov.pieces()[Overlay::piece_of(d)];
    BoundaryEdge e;
    e.tag = piece.tag;
    e.curve = piece.curve;
    if (piece.tag == PieceTag::Loop) {
      const bool forward = (d & 1) == piece.travel;
      e.arc_from = forward ? piece.arc_lo : piece.arc_hi;
      e.arc_to = forward ? piece.arc_hi : piece.arc_lo;
    }
    dev.edges.push_back(e);
  }

  if (with_triangles) {
    // Replace each run of boundary edges along one cut by the triangle base.
    const int n = static_cast<int>(dev.boundary.size());
    std::vector<char> keep(n, 1);
    std::map<int, std::pair<int, int>> runs;  // cut -> (first edge, last edge)
    for (int i = 0; i < n; ++i) {
      if (dev.edges[i].tag != PieceTag::Cut) continue;
      auto it = runs.find(dev.edges[i].curve);
      if (it == runs.end())
        runs[dev.edges[i].curve] = {i, i};
      else
        it->second.second = i;
    }
    std::vector<std::pair<int, int>> bases;  // (first vertex, cut)
    for (const auto& [c, run] : runs) {
      const auto& tri = dev.triangles[triangle_of[c]];
      if (!tri.inserted) continue;
      for (int i = run.first; i <= run.second; ++i)
        if (dev.edges[i].tag != PieceTag::Cut || dev.edges[i].curve != c)
          throw NonDiskResult("edges of cut " + std::to_string(c) + " are not contiguous on the boundary");
      for (int i = run.first + 1; i <= run.second; ++i) keep[i] = 0;
      const double base = (dev.boundary[run.second + 1 == n ? 0 : run.second + 1] - dev.boundary[run.first]).norm();
      const double expect = 2.0 * tri.leg_length * std::sin(tri.apex_angle / 2);
      dev.triangle_error = std::max(dev.triangle_error, std::abs(base - expect));
      dev.intrinsic_area += 0.5 * tri.leg_length * tri.leg_length * std::sin(tri.apex_angle);
      bases.emplace_back(run.first, c);
      const int vnode = ov.vertex_node(tri.vertex);
      for (int i = run.first; i <= run.second; ++i)
        if (dev.boundary_node[i] == vnode)
          dev.markers.push_back({MarkerKind::TriangleApex, tri.vertex, -1, dev.boundary[i]});
    }
    Polygon poly;
    std::vector<int> nodes;
    std::vector<BoundaryEdge> edges;
    for (int i = 0; i < n; ++i) {
      if (!keep[i]) continue;
      poly.push_back(dev.boundary[i]);
      nodes.push_back(dev.boundary_node[i]);
      BoundaryEdge e = dev.edges[i];
      for (const auto& [first, c] : bases)
        if (first == i) e = BoundaryEdge{PieceTag::Cut, -1, 0.0, 0.0};
      edges.push_back(e);
    }
    dev.boundary = std::move(poly);
    dev.boundary_node = std::move(nodes);
    dev.edges = std::move(edges);
  }

  // Markers on the boundary.
  for (size_t i = 0; i < dev.boundary.size(); ++i) {
    const int id = static_cast<int>(i);
    const OverlayNode& node = ov.nodes()[dev.boundary_node[i]];
    const Vec2& at = dev.boundary[i];
    if (node.loop_corner == Q.loop_point)
      dev.markers.push_back({MarkerKind::LoopPoint, -1, id, at});
    else if (node.loop_corner >= 0 && is_marked_corner(P, Q, node.loop_corner))
      dev.markers.push_back({MarkerKind::LoopCorner, node.vertex, id, at});
    if (node.vertex >= 0 && !node.on_loop && cut_of_vertex[node.vertex] >= 0)
      dev.markers.push_back({MarkerKind::VertexImage, node.vertex, id, at});
    for (int c : node.cut_ends) dev.markers.push_back({MarkerKind::Projection, disk.cuts[c].vertex, id, at});
  }

  dev.area = signed_area(dev.boundary);
  const double scale = P.diagonal();
  if (dev.gluing_error > 1e-9 * scale)
    throw InvariantViolation("development placements disagree by " + std::to_string(dev.gluing_error),
                             json{{"side", side_name(dev.side)}, {"gluing_error", dev.gluing_error}}.dump());
  if (std::abs(dev.area - dev.intrinsic_area) > 1e-8 * dev.intrinsic_area)
    throw InvariantViolation("development area " + std::to_string(dev.area) + " differs from " +
                                 std::to_string(dev.intrinsic_area),
                             json{{"side", side_name(dev.side)},
                                  {"area", dev.area},
                                  {"intrinsic_area", dev.intrinsic_area},
                                  {"polygon", polygon_json(dev.boundary)}}
                                 .dump());
  dev.certificate = certify_simple_polygon(dev.boundary);
  if (!dev.certificate)
    throw OverlapDetected(std::string("development of the ") + side_name(dev.side) + " half overlaps itself" +
                              (with_triangles ? " (with curvature triangles)" : ""),
                          overlap_witness(dev.boundary, dev.certificate).dump());
  return dev;
}

BoundaryAngleReport boundary_angles(const Polyhedron& P, const PlanarDevelopment& dev) {
  BoundaryAngleReport r;
  const auto angles = interior_angles(dev.boundary);
  for (const Marker& m : dev.markers) {
    if (m.boundary_index < 0) continue;
    const double a = angles[m.boundary_index];
    if (m.kind == MarkerKind::VertexImage)
      r.max_error = std::max(r.max_error, std::abs(a - (kTwoPi - P.curvature(m.vertex))));
    if (m.kind == MarkerKind::LoopPoint) {
      r.loop_point_angles.push_back(a);
      r.loop_point_total += a;
    }
  }
  return r;
}

ConvexityReport convexity(const PlanarDevelopment& dev, double eps_angle) {
  ConvexityReport r;
  for (double t : turn_angles(dev.boundary)) {
    r.total_turn += t;
    r.max_angle = std::max(r.max_angle, kPi - t);
  }
  r.convex = r.max_angle <= kPi + eps_angle && std::abs(r.total_turn - kTwoPi) <= eps_angle;
  return r;
}

namespace {

// Boundary vertex indices (a, b) of the loop arc [a0, a1] in a development,
// where a is the image of the point at a0. Forward developments traverse the
// loop in its own direction.
std::pair<int, int> find_arc(const PlanarDevelopment& dev, double a0, double a1, bool forward, double tol) {
  const int n = static_cast<int>(dev.edges.size());
  for (int i = 0; i < n; ++i) {
    const BoundaryEdge& e = dev.edges[i];
    if (e.tag != PieceTag::Loop) continue;
    const bool dir = e.arc_to > e.arc_from;
    if (dir != forward) continue;
    if (std::abs(e.arc_from - (forward ? a0 : a1)) > tol) continue;
    int j = i;
    for (int steps = 0; steps < n; ++steps) {
      const BoundaryEdge& f = dev.edges[j];
      if (f.tag != PieceTag::Loop) return {-1, -1};
      if (std::abs(f.arc_to - (forward ? a1 : a0)) <= tol) {
        const int end = (j + 1) % n;
        return forward ? std::pair{i, end} : std::pair{end, i};
      }
      j = (j + 1) % n;
    }
    return {-1, -1};
  }
  return {-1, -1};
}

double min_side_distance(const Polygon& poly, const Vec2& a, const Vec2& b) {
  const Vec2 u = (b - a).normalized();
  double m = 0.0;
  for (const Vec2& p : poly) m = std::min(m, cross(u, p - a));
  return m;
}

SurfacePoint point_at_arc(const Polyhedron& P, const QuasigeodesicLoop& Q, double arc) {
  for (int j = 0; j < Q.size(); ++j) {
    const int k = (Q.loop_point + j) % Q.size();
    const double a = Q.arc_start(k), len = Q.segments[k].length();
    if (arc <= a + len + 1e-12 * Q.length || j == Q.size() - 1)
      return point_on_segment(P, Q.segments[k], std::clamp((arc - a) / len, 0.0, 1.0));
  }
  return Q.corners[Q.loop_point];
}

}  // namespace

SupportSelection select_supporting_segment(const Polyhedron& P, const QuasigeodesicLoop& Q,
                                           const PlanarDevelopment& left, const PlanarDevelopment& right) {
  const double tol_arc = 1e-9 * P.diagonal();
  const double tol_side = 1e-9 * P.diagonal();
  std::vector<double> marks{0.0};
  for (int i = 0; i < Q.size(); ++i)
    if (i != Q.loop_point && is_marked_corner(P, Q, i)) marks.push_back(Q.arc_start(i));
  for (double a : left.projection_arcs) marks.push_back(a);
  for (double a : right.projection_arcs) marks.push_back(a);
  std::sort(marks.begin(), marks.end());
  std::vector<double> arcs;
  for (double a : marks) {
    if (Q.length - a <= tol_arc) continue;
    if (arcs.empty() || a - arcs.back() > tol_arc) arcs.push_back(a);
  }
  arcs.push_back(Q.length);

  SupportSelection sel;
  for (size_t k = 0; k + 1 < arcs.size(); ++k) {
    SupportCandidate c;
    c.arc_from = arcs[k];
    c.arc_to = arcs[k + 1];
    c.from = point_at_arc(P, Q, c.arc_from);
    c.to = point_at_arc(P, Q, c.arc_to);
    std::tie(c.left_a, c.left_b) = find_arc(left, c.arc_from, c.arc_to, true, tol_arc);
    std::tie(c.right_a, c.right_b) = find_arc(right, c.arc_from, c.arc_to, false, tol_arc);
    if (c.left_a >= 0 && c.right_a >= 0) {
      c.left_margin = min_side_distance(left.boundary, left.boundary[c.left_a], left.boundary[c.left_b]);
      c.right_margin = min_side_distance(right.boundary, right.boundary[c.right_b], right.boundary[c.right_a]);
      c.supports = c.left_margin >= -tol_side && c.right_margin >= -tol_side;
    }
    if (c.supports && sel.accepted < 0) sel.accepted = static_cast<int>(sel.candidates.size());
    sel.candidates.push_back(c);
  }
  return sel;
}

Unfolding join_halves(const Polyhedron& P, const PlanarDevelopment& dev1, const PlanarDevelopment& dev2,
                      const SupportCandidate& s) {
  if (dev1.side == dev2.side) throw Error("join_halves needs developments of opposite halves");
  const bool first_left = dev1.side == Side::Left;
  const int a1 = first_left ? s.left_a : s.right_a, b1 = first_left ? s.left_b : s.right_b;
  const int a2 = first_left ? s.right_a : s.left_a, b2 = first_left ? s.right_b : s.left_b;
  if (a1 < 0 || a2 < 0) throw NoSupportingSegment("candidate is not present in both developments");

  // dev1 traverses s from p to r, dev2 from r to p.
  const int p1 = first_left ? a1 : b1, r1 = first_left ? b1 : a1;
  const int p2 = first_left ? a2 : b2, r2 = first_left ? b2 : a2;
  const Vec2 P1 = dev1.boundary[p1], R1 = dev1.boundary[r1];
  const double L = (R1 - P1).norm();
  const Vec2 target_p(0.0, 0.0), target_r(L, 0.0);

  Unfolding U;
  U.dev1 = dev1.transformed(Rigid2::aligning(P1, R1, target_p, target_r));
  U.dev2 = dev2.transformed(Rigid2::aligning(dev2.boundary[p2], dev2.boundary[r2], target_p, target_r));
  U.s.arc_from = s.arc_from;
  U.s.arc_to = s.arc_to;
  U.s.from_point = first_left ? s.from : s.to;
  U.s.to_point = first_left ? s.to : s.from;
  U.s.from = target_p;
  U.s.to = target_r;

  const int n1 = static_cast<int>(dev1.boundary.size()), n2 = static_cast<int>(dev2.boundary.size());
  std::vector<int> map1(n1, -1), map2(n2, -1);
  // dev1 from r around to p, then dev2 strictly between p and r.
  for (int k = r1;; k = (k + 1) % n1) {
    map1[k] = static_cast<int>(U.polygon.size());
    U.polygon.push_back(U.dev1.boundary[k]);
    if (k == p1) break;
  }
  map2[p2] = map1[p1];
  map2[r2] = map1[r1];
  for (int k = (p2 + 1) % n2; k != r2; k = (k + 1) % n2) {
    map2[k] = static_cast<int>(U.polygon.size());
    U.polygon.push_back(U.dev2.boundary[k]);
  }

  std::set<std::tuple<int, int, int>> seen;
  auto add = [&](const Marker& m, const std::vector<int>& map) {
    Marker out = m;
    out.boundary_index = m.boundary_index >= 0 ? map[m.boundary_index] : -1;
    if (out.boundary_index < 0) return;
    if (!seen.insert({static_cast<int>(out.kind), out.vertex, out.boundary_index}).second) return;
    U.markers.push_back(out);
  };
  for (const Marker& m : U.dev1.markers) add(m, map1);
  for (const Marker& m : U.dev2.markers) add(m, map2);
  std::sort(U.markers.begin(), U.markers.end(), [](const Marker& a, const Marker& b) {
    return std::tie(a.boundary_index, a.kind, a.vertex) < std::tie(b.boundary_index, b.kind, b.vertex);
  });

  U.dev1_margin = 0.0;
  U.dev2_margin = 0.0;
  for (const Vec2& p : U.dev1.boundary) U.dev1_margin = std::min(U.dev1_margin, p.y());
  for (const Vec2& p : U.dev2.boundary) U.dev2_margin = std::max(U.dev2_margin, p.y());

  U.area = signed_area(U.polygon);
  U.surface_area = P.surface_area();
  U.certificate = certify_simple_polygon(U.polygon);
  if (!U.certificate) throw OverlapDetected("joined polygon is not simple", overlap_witness(U.polygon, U.certificate).dump());
  return U;
}

StarUnfolding star_unfold(const Polyhedron& P, const QuasigeodesicLoop& Q, const UnfoldOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  StarUnfolding R;
  R.loop_report = validate_loop(P, Q);
  if (!R.loop_report.valid) {
    std::string msg = "loop is not a quasigeodesic loop";
    for (const auto& p : R.loop_report.problems) msg += "; " + p;
    throw LoopConstructionError(msg);
  }
  log().debug("loop: {} corners, beta {:.6f}, q {}", Q.size(), Q.beta(), Q.q);
  R.halves = std::make_unique<HalfSplit>(split_halves(P, Q));
  const Half* H[2] = {&R.halves->left, &R.halves->right};
  const int lp = Q.loop_point;
  const double side_angle[2] = {Q.left[lp], Q.right[lp]};

  std::vector<VertexCut> all;
  for (int s = 0; s < 2; ++s) {
    R.cuts[s] = compute_cuts(P, Q, *H[s], opts.cuts);
    all.insert(all.end(), R.cuts[s].begin(), R.cuts[s].end());
    R.gauss_bonnet[s] = H[s]->gauss_bonnet();
    log().debug("{} half: {} interior vertices, turn {:.6f}, curvature {:.6f}", side_name(H[s]->side),
                H[s]->interior_vertices.size(), H[s]->turn, H[s]->enclosed_curvature);
  }
  R.lemmas = verify_cut_lemmas(P, all, Q);
  if (opts.strict && !R.lemmas.passed) {
    json w{{"problems", R.lemmas.problems},
           {"alpha_failures", R.lemmas.alpha_failures},
           {"crossing_pairs", R.lemmas.crossing_pairs},
           {"max_alpha_error", R.lemmas.max_alpha_error}};
    throw LemmaViolation("cut paths violate the shortest-path lemmas", w.dump());
  }

  for (int s = 0; s < 2; ++s) {
    R.disks[s] = cut_half(P, Q, *H[s], all);
    R.bare[s] = develop_half(R.disks[s], false);
    R.angles[s] = boundary_angles(P, R.bare[s]);
    R.convex_half[s] = side_angle[s] <= kPi + 1e-9;
    if (R.convex_half[s]) {
      R.triangles[s] = develop_half(R.disks[s], true);
      R.convex[s] = convexity(R.triangles[s]);
      if (opts.strict && !R.convex[s].convex)
        throw LemmaViolation(std::string("curvature-triangle development of the ") + side_name(H[s]->side) +
                                 " half is not convex",
                             json{{"max_angle", R.convex[s].max_angle},
                                  {"total_turn", R.convex[s].total_turn},
                                  {"polygon", polygon_json(R.triangles[s].boundary)}}
                                 .dump());
    }
  }

  R.support = select_supporting_segment(P, Q, R.bare[0], R.bare[1]);
  log().debug("{} candidate segments, first supporting: {}", R.support.candidates.size(), R.support.accepted);
  bool joined = false;
  std::string last_error;
  for (const auto& c : R.support.candidates) {
    if (!c.supports) continue;
    try {
      R.unfolding = join_halves(P, R.bare[0], R.bare[1], c);
      joined = true;
      break;
    } catch (const OverlapDetected& e) {
      log().warn("candidate [{}, {}] supports both halves but the join overlaps", c.arc_from, c.arc_to);
      last_error = e.witness();
    }
  }
  if (!joined && opts.unsupported_fallback) {
    for (const auto& c : R.support.candidates) {
      if (c.supports) continue;
      try {
        R.unfolding = join_halves(P, R.bare[0], R.bare[1], c);
      } catch (const OverlapDetected&) {
        continue;
      }
      log().warn("no candidate supports both halves; joined along [{}, {}] (margins {:.3e}, {:.3e})", c.arc_from,
                 c.arc_to, c.left_margin, c.right_margin);
      R.unfolding.s.supports = false;
      joined = true;
      break;
    }
  }
  if (!joined) {
    json w{{"left", polygon_json(R.bare[0].boundary)}, {"right", polygon_json(R.bare[1].boundary)}};
    if (!last_error.empty()) w["last_overlap"] = json::parse(last_error);
    throw NoSupportingSegment("no candidate segment supports both halves", w.dump());
  }
  if (std::abs(R.unfolding.area - P.surface_area()) > 1e-8 * P.surface_area())
    throw InvariantViolation("unfolding area " + std::to_string(R.unfolding.area) + " differs from surface area " +
                             std::to_string(P.surface_area()));

  R.unfolding.stats.n = P.num_vertices();
  R.unfolding.stats.q = Q.q;
  R.unfolding.stats.m = R.unfolding.stats.n + R.unfolding.stats.q;
  R.unfolding.stats.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return R;
}

}  // namespace qstar
