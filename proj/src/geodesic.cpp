#include "qstar/geodesic.hpp"

#include "qstar/errors.hpp"
#include "qstar/predicates.hpp"

namespace qstar {

bool is_edge_lying(const Polyhedron& P, const Segment& s, int* h_out) {
  if (s.pa.is_face() || s.pb.is_face()) return false;
  for (int k = 0; k < 3; ++k) {
    const int h = Polyhedron::halfedge(s.face, k);
    if (on_edge_closure(P, s.pa, h) && on_edge_closure(P, s.pb, h)) {
      if (h_out) *h_out = h;
      return true;
    }
  }
  return false;
}

Segment segment_in_face(const Polyhedron& P, const Segment& s, int f) {
  if (f == s.face) return s;
  Segment r = s;
  r.face = f;
  r.a = position_in_face(P, s.pa, f);
  r.b = position_in_face(P, s.pb, f);
  return r;
}

SurfacePoint point_on_segment(const Polyhedron& P, const Segment& s, double t) {
  if (t <= 0.0) return s.pa;
  if (t >= 1.0) return s.pb;
  int h;
  if (is_edge_lying(P, s, &h)) {
    // Interpolate the edge parameter directly so the point stays on the edge.
    auto param = [&](const SurfacePoint& sp) {
      if (sp.is_vertex()) return sp.index == P.origin(h) ? 0.0 : 1.0;
      return sp.index == h ? sp.t : 1.0 - sp.t;
    };
    const double ta = param(s.pa), tb = param(s.pb);
    return canonicalize(P, SurfacePoint::at_edge(h, ta + t * (tb - ta)));
  }
  return locate(P, s.face, s.a + t * (s.b - s.a));
}

std::vector<Rigid2> develop_strip(const Polyhedron& P, const std::vector<int>& faces) {
  std::vector<Rigid2> out;
  if (faces.empty()) return out;
  for (int f : faces)
    if (f < 0 || f >= P.num_faces()) throw IndexOutOfRange("face index out of range: " + std::to_string(f));
  out.emplace_back();
  for (size_t i = 1; i < faces.size(); ++i) {
    const int f = faces[i - 1], g = faces[i];
    int shared = -1;
    for (int k = 0; k < 3; ++k) {
      const int h = Polyhedron::halfedge(f, k);
      if (Polyhedron::face_of(P.twin(h)) == g) shared = h;
    }
    if (shared < 0)
      throw NonAdjacentFaces("faces " + std::to_string(f) + " and " + std::to_string(g) + " share no edge");
    out.push_back(out.back() * P.edge_transform(shared));
  }
  return out;
}

const char* policy_name(VertexPolicy p) { return p == VertexPolicy::Bisector ? "bisector" : "leftmost"; }

TangentDirection continue_through_vertex(const Polyhedron& P, const TangentDirection& arrival, VertexPolicy policy) {
  if (!arrival.at.is_vertex()) throw MismatchedLocus("continuation requires a vertex");
  const double total = total_angle(P, arrival.at);
  const double back = angular_coordinate(P, arrival.at, arrival.face, -arrival.dir);
  double left = 0.5 * total;
  if (policy == VertexPolicy::LeftmostAdmissible && total > kPi + P.tol().angle) left = kPi;
  return direction_at(P, arrival.at, back - left);
}

// ---------------------------------------------------------------------------

GeodesicWalker::GeodesicWalker(const Polyhedron& P, const TangentDirection& start)
    : P_(&P), pos_(canonicalize(P, start.at)), face_(start.face), d_(start.dir.normalized()) {
  if (!is_incident(P, pos_, face_)) throw MismatchedLocus("start direction face is not incident to the start point");
  p_ = position_in_face(P, pos_, face_);
}

void GeodesicWalker::turn(const TangentDirection& dir) {
  face_ = dir.face;
  d_ = dir.dir.normalized();
  p_ = position_in_face(*P_, pos_, face_);
}

TangentDirection GeodesicWalker::tangent() const { return {pos_, face_, d_}; }

Segment GeodesicWalker::step(double max_step) {
  const Polyhedron& P = *P_;
  const double eps = P.tol().point;
  bool excluded[3] = {false, false, false};
  if (pos_.is_vertex()) {
    const int k = P.corner_index(face_, pos_.index);
    excluded[k] = true;
    excluded[(k + 2) % 3] = true;
  } else if (pos_.is_edge()) {
    for (int k = 0; k < 3; ++k)
      if (P.canonical(Polyhedron::halfedge(face_, k)) == pos_.index) excluded[k] = true;
  }
  int exit_edge = -1;
  double s_exit = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    if (excluded[k]) continue;
    const Vec2& A = P.corner(face_, k);
    const Vec2 e = P.corner(face_, (k + 1) % 3) - A;
    const double denom = cross(d_, e);
    if (!(denom > 0.0)) continue;  // not heading out through this edge
    const double s = std::max(0.0, cross(A - p_, e) / denom);
    if (s < s_exit) {
      s_exit = s;
      exit_edge = k;
    }
  }
  if (exit_edge < 0) throw StalledTrace("no exit edge from face " + std::to_string(face_));

  Segment seg;
  seg.face = face_;
  seg.a = p_;
  seg.pa = pos_;
  if (max_step < s_exit) {
    seg.b = p_ + max_step * d_;
    seg.pb = locate(P, face_, seg.b);
    pos_ = seg.pb;
    p_ = seg.b;
    return seg;
  }
  const int h = Polyhedron::halfedge(face_, exit_edge);
  const Vec2& A = P.tail(h);
  const Vec2& B = P.head(h);
  const Vec2 q = p_ + s_exit * d_;
  if ((q - p_).norm() <= eps && !((q - A).norm() <= eps || (q - B).norm() <= eps))
    throw StalledTrace("trace made no progress in face " + std::to_string(face_));
  const double u = std::clamp((q - A).dot(B - A) / (B - A).squaredNorm(), 0.0, 1.0);
  if ((q - A).norm() <= eps || u * (B - A).norm() <= eps) {
    seg.b = A;
    seg.pb = SurfacePoint::at_vertex(P.origin(h));
  } else if ((q - B).norm() <= eps || (1.0 - u) * (B - A).norm() <= eps) {
    seg.b = B;
    seg.pb = SurfacePoint::at_vertex(P.dest(h));
  } else {
    seg.b = A + u * (B - A);
    seg.pb = canonicalize(P, SurfacePoint::at_edge(h, u));
  }
  pos_ = seg.pb;
  if (pos_.is_vertex()) {
    p_ = seg.b;
    return seg;
  }
  // Cross into the neighbouring face.
  const int t = P.twin(h);
  face_ = Polyhedron::face_of(t);
  p_ = P.tail(t) + (1.0 - u) * (P.head(t) - P.tail(t));
  d_ = P.edge_transform(t).apply_vector(d_).normalized();
  return seg;
}

// ---------------------------------------------------------------------------

namespace {

// First parameter along [a, b] at which it meets [c, d] or passes within `tol` of it.
std::optional<double> first_contact(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double tol) {
  std::optional<double> best;
  auto take = [&](double t) {
    t = std::clamp(t, 0.0, 1.0);
    if (!best || t < *best) best = t;
  };
  const Vec2 r = b - a, s = d - c;
  const double len2 = r.squaredNorm();
  if (segments_intersect(a, b, c, d)) {
    const double denom = cross(r, s);
    if (denom != 0.0) {
      take(cross(c - a, s) / denom);
    } else if (len2 == 0.0) {
      take(0.0);
    } else {
      const double tc = (c - a).dot(r) / len2, td = (d - a).dot(r) / len2;
      take(std::max(0.0, std::min(tc, td)));
    }
  }
  // Near misses at endpoints count as contact.
  double u;
  for (const Vec2* e : {&c, &d})
    if (point_segment_distance(*e, a, b, &u) <= tol) take(u);
  if (point_segment_distance(a, c, d) <= tol) take(0.0);
  if (point_segment_distance(b, c, d) <= tol) take(1.0);
  return best;
}

}  // namespace

GeodesicPath trace_geodesic(const Polyhedron& P, const TangentDirection& start, const StopCondition& stop) {
  if (!(stop.max_length > 0.0)) throw Error("max_length must be positive");
  GeodesicWalker w(P, start);
  GeodesicPath path;
  path.points.push_back(w.position());
  double remaining = stop.max_length;
  while (true) {
    Segment seg = w.step(remaining);
    if (stop.curve) {
      std::optional<double> hit;
      for (const Segment& c : *stop.curve) {
        if (!is_incident(P, c.pa, seg.face) || !is_incident(P, c.pb, seg.face)) continue;
        const Segment cf = segment_in_face(P, c, seg.face);
        auto t = first_contact(seg.a, seg.b, cf.a, cf.b, 10.0 * P.tol().point);
        if (!t || (path.segments.empty() && *t * seg.length() <= P.tol().point)) continue;
        if (!hit || *t < *hit) hit = t;
      }
      if (hit) {
        seg.b = seg.a + *hit * (seg.b - seg.a);
        seg.pb = locate(P, seg.face, seg.b);
        path.segments.push_back(seg);
        path.reason = StopReason::HitCurve;
        break;
      }
    }
    path.segments.push_back(seg);
    remaining -= seg.length();
    if (w.at_vertex()) {
      path.reason = StopReason::HitVertex;
      if (stop.stop_at_vertex) break;
    }
    if (remaining <= 0.0 || (!w.at_vertex() && w.position().is_face())) {
      path.reason = StopReason::MaxLength;
      break;
    }
    if (w.at_vertex()) throw StalledTrace("trace reached a vertex and cannot continue straight");
  }
  path.length = 0.0;
  for (const auto& s : path.segments) {
    path.length += s.length();
    path.faces.push_back(s.face);
    path.points.push_back(s.pb);
  }
  for (size_t i = 0; i < path.segments.size(); ++i) {
    if (i == 0) {
      path.developed.emplace_back();
      continue;
    }
    const Segment& prev = path.segments[i - 1];
    const Segment& cur = path.segments[i];
    const Rigid2& T = path.developed.back();
    const Vec2 anchor = T(prev.b);
    const Vec2 dir = T.apply_vector(prev.b - prev.a).normalized();
    path.developed.push_back(Rigid2::aligning(cur.a, cur.a + cur.direction(), anchor, anchor + dir));
  }
  return path;
}

}  // namespace qstar
