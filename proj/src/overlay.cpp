#include "qstar/overlay.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "qstar/errors.hpp"

namespace qstar {

const char* tag_name(PieceTag t) {
  switch (t) {
    case PieceTag::Mesh:
      return "mesh";
    case PieceTag::Loop:
      return "loop";
    case PieceTag::Cut:
      return "cut";
  }
  return "?";
}

const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

int Overlay::dart_face(int d) const {
  const OverlayPiece& p = pieces_[d / 2];
  if (p.face >= 0) return p.face;
  return Polyhedron::face_of(d & 1 ? P_->twin(p.halfedge) : p.halfedge);
}

int Overlay::dart_halfedge(int d) const {
  const OverlayPiece& p = pieces_[d / 2];
  if (p.halfedge < 0) return -1;
  return d & 1 ? P_->twin(p.halfedge) : p.halfedge;
}

Vec2 Overlay::position(int node, int face) const { return position_in_face(*P_, nodes_[node].at, face); }

int Overlay::node_for(const SurfacePoint& raw) {
  const SurfacePoint sp = canonicalize(*P_, raw);
  if (sp.is_vertex()) return vertex_node_[sp.index];
  if (sp.is_edge()) {
    auto& list = edge_nodes_[sp.index];
    const double len = P_->edge_length(sp.index);
    for (const auto& [t, n] : list)
      if (std::abs(t - sp.t) * len <= tol_) return n;
    OverlayNode node;
    node.at = sp;
    nodes_.push_back(node);
    const int id = static_cast<int>(nodes_.size()) - 1;
    list.emplace_back(sp.t, id);
    return id;
  }
  const Vec2 p = position_in_face(*P_, sp, sp.index);
  for (int n : face_nodes_[sp.index])
    if ((position(n, sp.index) - p).norm() <= tol_) return n;
  OverlayNode node;
  node.at = sp;
  nodes_.push_back(node);
  const int id = static_cast<int>(nodes_.size()) - 1;
  face_nodes_[sp.index].push_back(id);
  return id;
}

double Overlay::edge_param(int node, int c) const {
  const OverlayNode& n = nodes_[node];
  if (n.vertex >= 0) return n.vertex == P_->origin(c) ? 0.0 : 1.0;
  return n.at.t;
}

void Overlay::build_edge_pieces() {
  for (int h = 0; h < P_->num_halfedges(); ++h) {
    if (P_->canonical(h) != h) continue;
    std::vector<std::pair<double, int>> list = edge_nodes_[h];
    std::sort(list.begin(), list.end());
    list.insert(list.begin(), {0.0, vertex_node_[P_->origin(h)]});
    list.emplace_back(1.0, vertex_node_[P_->dest(h)]);
    for (size_t i = 0; i + 1 < list.size(); ++i) {
      OverlayPiece piece;
      piece.from = list[i].second;
      piece.to = list[i + 1].second;
      piece.halfedge = h;
      pieces_.push_back(piece);
      edge_pieces_[h].emplace_back(list[i].first, static_cast<int>(pieces_.size()) - 1);
    }
  }
}

void Overlay::mark_edge(int c, double t0, double t1, PieceTag tag, int curve, int travel_dir) {
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  const double tiny = tol_ / P_->edge_length(c);
  for (const auto& [ts, pid] : edge_pieces_[c]) {
    OverlayPiece& p = pieces_[pid];
    const double te = edge_param(p.to, c);
    if (ts < lo - tiny || te > hi + tiny) continue;
    if (p.tag != PieceTag::Mesh && (p.tag != tag || p.curve != curve))
      throw SubdivisionFailure(std::string(tag_name(tag)) + " overlaps a " + tag_name(p.tag) + " piece on an edge");
    p.tag = tag;
    p.curve = curve;
    p.travel = travel_dir;
  }
}

Overlay::Overlay(const Polyhedron& P, const QuasigeodesicLoop& Q, const std::vector<CutCurve>& cuts)
    : P_(&P), tol_(P.tol().planar) {
  const int n = Q.size();
  edge_nodes_.assign(P.num_halfedges(), {});
  edge_pieces_.assign(P.num_halfedges(), {});
  face_nodes_.assign(P.num_faces(), {});
  chords_.assign(P.num_faces(), {});
  for (int v = 0; v < P.num_vertices(); ++v) {
    OverlayNode node;
    node.at = SurfacePoint::at_vertex(v);
    node.vertex = v;
    nodes_.push_back(node);
    vertex_node_.push_back(v);
  }

  for (int i = 0; i < n; ++i) {
    const int id = node_for(Q.corners[i]);
    if (nodes_[id].loop_corner >= 0) throw SubdivisionFailure("two loop corners share a node");
    nodes_[id].loop_corner = i;
    corner_node_.push_back(id);
  }

  // Cut end points and crossings.
  std::vector<std::vector<std::pair<double, int>>> splits(n);
  std::vector<std::vector<int>> cut_nodes(cuts.size());
  for (size_t c = 0; c < cuts.size(); ++c) {
    const CutCurve& cut = cuts[c];
    if (cut.segments.empty()) throw SubdivisionFailure("empty cut path");
    const int j = cut.loop_segment;
    int end;
    if (cut.param <= 1e-12)
      end = corner_node_[j];
    else if (cut.param >= 1.0 - 1e-12)
      end = corner_node_[(j + 1) % n];
    else
      end = node_for(point_on_segment(P, Q.segments[j], cut.param));
    if (end != corner_node_[j] && end != corner_node_[(j + 1) % n] && !is_edge_lying(P, Q.segments[j]))
      splits[j].emplace_back(cut.param, end);
    cut_end_node_.push_back(end);
    nodes_[end].cut_ends.push_back(static_cast<int>(c));
    auto& list = cut_nodes[c];
    list.push_back(node_for(cut.segments.front().pa));
    for (size_t k = 0; k + 1 < cut.segments.size(); ++k) list.push_back(node_for(cut.segments[k].pb));
    list.push_back(end);
    for (int id : list) nodes_[id].cuts.push_back(static_cast<int>(c));
  }

  build_edge_pieces();

  // Loop pieces.
  for (int j = 0; j < n; ++j) {
    const Segment& s = Q.segments[j];
    const int A = corner_node_[j], B = corner_node_[(j + 1) % n];
    const double base = Q.arc_start(j), len = s.length();
    int h;
    if (is_edge_lying(P, s, &h)) {
      const int c = P.canonical(h);
      const double tA = edge_param(A, c), tB = edge_param(B, c);
      const int travel = tA < tB ? 0 : 1;
      mark_edge(c, tA, tB, PieceTag::Loop, j, travel);
      for (const auto& [ts, pid] : edge_pieces_[c]) {
        OverlayPiece& p = pieces_[pid];
        if (p.tag != PieceTag::Loop || p.curve != j) continue;
        const double te = edge_param(p.to, c);
        const double l0 = (ts - tA) / (tB - tA), l1 = (te - tA) / (tB - tA);
        p.arc_lo = base + std::min(l0, l1) * len;
        p.arc_hi = base + std::max(l0, l1) * len;
        const int from_travel = travel == 0 ? p.from : p.to;
        if (from_travel == A && j == Q.loop_point) loop_start_dart_ = 2 * pid + travel;
      }
      continue;
    }
    auto& sp = splits[j];
    std::sort(sp.begin(), sp.end());
    std::vector<std::pair<double, int>> chain{{0.0, A}};
    for (const auto& e : sp)
      if (e.second != chain.back().second) chain.push_back(e);
    if (chain.back().second == B) chain.pop_back();
    chain.emplace_back(1.0, B);
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
      OverlayPiece p;
      p.from = chain[k].second;
      p.to = chain[k + 1].second;
      p.tag = PieceTag::Loop;
      p.face = s.face;
      p.curve = j;
      p.arc_lo = base + chain[k].first * len;
      p.arc_hi = base + chain[k + 1].first * len;
      pieces_.push_back(p);
      const int pid = static_cast<int>(pieces_.size()) - 1;
      chords_[s.face].push_back(pid);
      if (k == 0 && j == Q.loop_point) loop_start_dart_ = 2 * pid;
    }
  }
  if (loop_start_dart_ < 0) throw SubdivisionFailure("loop start piece not found");
  for (const auto& p : pieces_)
    if (p.tag == PieceTag::Loop) {
      nodes_[p.from].on_loop = true;
      nodes_[p.to].on_loop = true;
    }

  // Cut pieces.
  for (size_t c = 0; c < cuts.size(); ++c) {
    const auto& segs = cuts[c].segments;
    const auto& list = cut_nodes[c];
    for (size_t k = 0; k < segs.size(); ++k) {
      const int A = list[k], B = list[k + 1];
      if (A == B) continue;
      int h;
      Segment s = segs[k];
      s.pb = nodes_[B].at;
      if (is_edge_lying(P, s, &h)) {
        const int e = P.canonical(h);
        mark_edge(e, edge_param(A, e), edge_param(B, e), PieceTag::Cut, static_cast<int>(c), 0);
        continue;
      }
      OverlayPiece p;
      p.from = A;
      p.to = B;
      p.tag = PieceTag::Cut;
      p.face = s.face;
      p.curve = static_cast<int>(c);
      pieces_.push_back(p);
      chords_[s.face].push_back(static_cast<int>(pieces_.size()) - 1);
    }
  }

  trace_faces();
}

void Overlay::trace_faces() {
  const Polyhedron& P = *P_;
  next_.assign(num_darts(), -1);
  subface_of_.assign(num_darts(), -1);
  for (int f = 0; f < P.num_faces(); ++f) {
    std::vector<int> darts;
    for (int k = 0; k < 3; ++k) {
      const int h = Polyhedron::halfedge(f, k);
      const int c = P.canonical(h);
      const auto& list = edge_pieces_[c];
      if (h == c)
        for (const auto& e : list) darts.push_back(2 * e.second);
      else
        for (auto it = list.rbegin(); it != list.rend(); ++it) darts.push_back(2 * it->second + 1);
    }
    for (int pid : chords_[f]) {
      darts.push_back(2 * pid);
      darts.push_back(2 * pid + 1);
    }
    std::map<int, std::vector<std::pair<double, int>>> outgoing;
    auto angle = [&](int d) {
      const Vec2 e = position(dart_to(d), f) - position(dart_from(d), f);
      return std::atan2(e.y(), e.x());
    };
    for (int d : darts) outgoing[dart_from(d)].emplace_back(angle(d), d);
    for (auto& [node, list] : outgoing) std::sort(list.begin(), list.end());
    for (int d : darts) {
      const Vec2 r = position(dart_from(d), f) - position(dart_to(d), f);
      const double back = std::atan2(r.y(), r.x());
      const auto& out = outgoing[dart_to(d)];
      if (out.empty()) throw SubdivisionFailure("dangling piece in face " + std::to_string(f));
      int chosen = out.back().second;
      for (auto it = out.rbegin(); it != out.rend(); ++it)
        if (it->first < back) {
          chosen = it->second;
          break;
        }
      next_[d] = chosen;
    }
    for (int d : darts) {
      if (subface_of_[d] >= 0) continue;
      SubFace sf;
      sf.face = f;
      const int id = static_cast<int>(subfaces_.size());
      int e = d;
      double area2 = 0.0;
      do {
        if (subface_of_[e] >= 0) throw SubdivisionFailure("inconsistent sub-face tracing in face " + std::to_string(f));
        subface_of_[e] = id;
        sf.darts.push_back(e);
        area2 += cross(position(dart_from(e), f), position(dart_to(e), f));
        e = next_[e];
      } while (e != d && sf.darts.size() <= darts.size());
      if (e != d) throw SubdivisionFailure("open sub-face boundary in face " + std::to_string(f));
      sf.area = 0.5 * area2;
      if (!(sf.area > 0.0)) throw SubdivisionFailure("sub-face with non-positive area in face " + std::to_string(f));
      subfaces_.push_back(std::move(sf));
    }
  }
  for (int d = 0; d < num_darts(); ++d)
    if (subface_of_[d] < 0) throw SubdivisionFailure("dart without a sub-face");
}

std::vector<int> Overlay::components(const std::function<bool(int)>& crossable, int* count) const {
  const int m = static_cast<int>(subfaces_.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  for (int d = 0; d < num_darts(); d += 2) {
    if (!crossable(d)) continue;
    const int a = find(subface_of_[d]), b = find(subface_of_[d + 1]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> label(m, -1), root_label(m, -1);
  int k = 0;
  for (int i = 0; i < m; ++i) {
    const int r = find(i);
    if (root_label[r] < 0) root_label[r] = k++;
    label[i] = root_label[r];
  }
  if (count) *count = k;
  return label;
}

std::vector<int> side_labels(const Overlay& ov) {
  int count = 0;
  auto comp = ov.components([&](int d) { return ov.tag(d) != PieceTag::Loop; }, &count);
  if (count != 2)
    throw SubdivisionFailure("loop separates the surface into " + std::to_string(count) + " parts, expected 2");
  const int left = comp[ov.subface(ov.loop_start_dart())];
  for (int& c : comp) c = c == left ? 0 : 1;
  return comp;
}

bool Half::contains_vertex(int v) const {
  return std::binary_search(interior_vertices.begin(), interior_vertices.end(), v);
}

HalfSplit split_halves(const Polyhedron& P, const QuasigeodesicLoop& Q) {
  HalfSplit out{Overlay(P, Q), {}, {}, {}};
  const Overlay& ov = out.overlay;
  const auto label = side_labels(ov);
  Half* halves[2] = {&out.left, &out.right};
  out.left.side = Side::Left;
  out.right.side = Side::Right;
  out.left.turn = Q.turn_left;
  out.right.turn = Q.turn_right;
  std::vector<std::set<int>> faces(2);
  for (int i = 0; i < static_cast<int>(ov.subfaces().size()); ++i) {
    Half& H = *halves[label[i]];
    H.subfaces.push_back(i);
    H.area += ov.subfaces()[i].area;
    faces[label[i]].insert(ov.subfaces()[i].face);
  }
  for (int s = 0; s < 2; ++s) halves[s]->faces.assign(faces[s].begin(), faces[s].end());

  // Vertex sides from any dart leaving the vertex node.
  std::vector<int> vertex_side(P.num_vertices(), -1);
  for (int d = 0; d < ov.num_darts(); ++d) {
    const OverlayNode& n = ov.nodes()[ov.dart_from(d)];
    if (n.vertex >= 0 && !n.on_loop) vertex_side[n.vertex] = label[ov.subface(d)];
  }
  for (int v = 0; v < P.num_vertices(); ++v) {
    if (ov.nodes()[ov.vertex_node(v)].on_loop) {
      out.loop_vertices.push_back(v);
      continue;
    }
    Half& H = *halves[vertex_side[v]];
    H.interior_vertices.push_back(v);
    H.enclosed_curvature += P.curvature(v);
  }

  // Euler characteristic of each side's closure.
  for (int s = 0; s < 2; ++s) {
    std::set<int> pieces, nodes;
    for (int sf : halves[s]->subfaces)
      for (int d : ov.subfaces()[sf].darts) {
        pieces.insert(Overlay::piece_of(d));
        nodes.insert(ov.dart_from(d));
      }
    halves[s]->euler = static_cast<int>(nodes.size()) - static_cast<int>(pieces.size()) +
                       static_cast<int>(halves[s]->subfaces.size());
    if (halves[s]->euler != 1)
      throw SubdivisionFailure(std::string(side_name(halves[s]->side)) + " side has Euler characteristic " +
                               std::to_string(halves[s]->euler));
  }
  return out;
}

}  // namespace qstar
