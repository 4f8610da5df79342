#include "qstar/surface_point.hpp"

#include "qstar/errors.hpp"

namespace qstar {

SurfacePoint SurfacePoint::at_vertex(int v) {
  SurfacePoint s;
  s.kind = LocusKind::Vertex;
  s.index = v;
  return s;
}

SurfacePoint SurfacePoint::at_edge(int h, double t) {
  SurfacePoint s;
  s.kind = LocusKind::Edge;
  s.index = h;
  s.t = t;
  return s;
}

SurfacePoint SurfacePoint::at_face(int f, const std::array<double, 3>& bary) {
  SurfacePoint s;
  s.kind = LocusKind::Face;
  s.index = f;
  s.bary = bary;
  return s;
}

const char* locus_name(LocusKind k) {
  switch (k) {
    case LocusKind::Vertex:
      return "vertex";
    case LocusKind::Edge:
      return "edge";
    case LocusKind::Face:
      return "face";
  }
  return "?";
}

namespace {

void check_index(const Polyhedron& P, const SurfacePoint& sp) {
  const int limit = sp.kind == LocusKind::Vertex ? P.num_vertices()
                    : sp.kind == LocusKind::Edge ? P.num_halfedges()
                                                 : P.num_faces();
  if (sp.index < 0 || sp.index >= limit)
    throw IndexOutOfRange(std::string(locus_name(sp.kind)) + " index out of range: " + std::to_string(sp.index));
}

Vec2 edge_point(const Polyhedron& P, int h, double t) { return P.tail(h) + t * (P.head(h) - P.tail(h)); }

}  // namespace

SurfacePoint locate(const Polyhedron& P, int f, const Vec2& p) {
  const double eps = P.tol().point;
  for (int k = 0; k < 3; ++k)
    if ((p - P.corner(f, k)).norm() <= eps) return SurfacePoint::at_vertex(P.face(f)[k]);
  const double area2 = cross(P.corner(f, 1) - P.corner(f, 0), P.corner(f, 2) - P.corner(f, 0));
  std::array<double, 3> b{};
  for (int k = 0; k < 3; ++k)
    b[k] = cross(P.corner(f, (k + 1) % 3) - p, P.corner(f, (k + 2) % 3) - p) / area2;
  // Edge k runs from corner k to corner k+1, opposite corner (k+2)%3.
  int edge = -1;
  double best = eps;
  std::array<double, 3> params{};
  for (int k = 0; k < 3; ++k) {
    const int h = Polyhedron::halfedge(f, k);
    const double d = point_segment_distance(p, P.tail(h), P.head(h), &params[k]);
    if (d <= best) {
      best = d;
      edge = k;
    }
  }
  if (edge < 0) {
    const int j = static_cast<int>(std::min_element(b.begin(), b.end()) - b.begin());
    if (b[j] <= 0.0) edge = (j + 1) % 3;
  }
  if (edge >= 0) {
    const int h = Polyhedron::halfedge(f, edge);
    const double t = params[edge];
    const double len = P.edge_length(h);
    if (t * len <= eps) return SurfacePoint::at_vertex(P.origin(h));
    if ((1.0 - t) * len <= eps) return SurfacePoint::at_vertex(P.dest(h));
    const int c = P.canonical(h);
    return SurfacePoint::at_edge(c, c == h ? t : 1.0 - t);
  }
  return SurfacePoint::at_face(f, b);
}

SurfacePoint canonicalize(const Polyhedron& P, const SurfacePoint& sp) {
  check_index(P, sp);
  switch (sp.kind) {
    case LocusKind::Vertex:
      return sp;
    case LocusKind::Edge: {
      const int h = sp.index;
      const double len = P.edge_length(h);
      if (sp.t * len <= P.tol().point) return SurfacePoint::at_vertex(P.origin(h));
      if ((1.0 - sp.t) * len <= P.tol().point) return SurfacePoint::at_vertex(P.dest(h));
      const int c = P.canonical(h);
      return SurfacePoint::at_edge(c, c == h ? sp.t : 1.0 - sp.t);
    }
    case LocusKind::Face: {
      const int f = sp.index;
      const double s = sp.bary[0] + sp.bary[1] + sp.bary[2];
      if (!(std::abs(s) > 0.0)) throw MismatchedLocus("barycentric coordinates sum to zero");
      Vec2 p = Vec2::Zero();
      for (int k = 0; k < 3; ++k) p += (sp.bary[k] / s) * P.corner(f, k);
      return locate(P, f, p);
    }
  }
  return sp;
}

std::vector<int> incident_faces(const Polyhedron& P, const SurfacePoint& sp) {
  switch (sp.kind) {
    case LocusKind::Vertex: {
      std::vector<int> out;
      for (int h : P.fan(sp.index)) out.push_back(Polyhedron::face_of(h));
      return out;
    }
    case LocusKind::Edge:
      return {Polyhedron::face_of(sp.index), Polyhedron::face_of(P.twin(sp.index))};
    case LocusKind::Face:
      return {sp.index};
  }
  return {};
}

bool is_incident(const Polyhedron& P, const SurfacePoint& sp, int f) {
  switch (sp.kind) {
    case LocusKind::Vertex:
      return P.corner_index(f, sp.index) >= 0;
    case LocusKind::Edge:
      return Polyhedron::face_of(sp.index) == f || Polyhedron::face_of(P.twin(sp.index)) == f;
    case LocusKind::Face:
      return sp.index == f;
  }
  return false;
}

Vec2 position_in_face(const Polyhedron& P, const SurfacePoint& sp, int f) {
  switch (sp.kind) {
    case LocusKind::Vertex: {
      const int k = P.corner_index(f, sp.index);
      if (k < 0) break;
      return P.corner(f, k);
    }
    case LocusKind::Edge: {
      const int h = sp.index;
      if (Polyhedron::face_of(h) == f) return edge_point(P, h, sp.t);
      const int t = P.twin(h);
      if (Polyhedron::face_of(t) == f) return edge_point(P, t, 1.0 - sp.t);
      break;
    }
    case LocusKind::Face: {
      if (sp.index != f) break;
      Vec2 p = Vec2::Zero();
      for (int k = 0; k < 3; ++k) p += sp.bary[k] * P.corner(f, k);
      return p;
    }
  }
  throw MismatchedLocus("point is not incident to face " + std::to_string(f));
}

Vec3 position_3d(const Polyhedron& P, const SurfacePoint& sp) {
  if (sp.kind == LocusKind::Vertex) return P.vertex(sp.index);
  if (sp.kind == LocusKind::Edge) {
    const Vec3& a = P.vertex(P.origin(sp.index));
    const Vec3& b = P.vertex(P.dest(sp.index));
    return a + sp.t * (b - a);
  }
  Vec3 p = Vec3::Zero();
  for (int k = 0; k < 3; ++k) p += sp.bary[k] * P.vertex(P.face(sp.index)[k]);
  return p;
}

bool same_point(const Polyhedron& P, const SurfacePoint& a, const SurfacePoint& b, double tol) {
  if (a.kind == LocusKind::Vertex && b.kind == LocusKind::Vertex) return a.index == b.index;
  if (a.kind == LocusKind::Vertex || b.kind == LocusKind::Vertex) {
    // A vertex and a nearby non-vertex locus may describe the same point under different snapping.
    return (position_3d(P, a) - position_3d(P, b)).norm() <= tol &&
           (a.kind == LocusKind::Vertex ? is_incident(P, a, incident_faces(P, b)[0])
                                        : is_incident(P, b, incident_faces(P, a)[0]));
  }
  return (position_3d(P, a) - position_3d(P, b)).norm() <= tol;
}

bool on_edge_closure(const Polyhedron& P, const SurfacePoint& sp, int h) {
  if (sp.kind == LocusKind::Vertex) return sp.index == P.origin(h) || sp.index == P.dest(h);
  if (sp.kind == LocusKind::Edge) return P.canonical(sp.index) == P.canonical(h);
  return false;
}

double total_angle(const Polyhedron& P, const SurfacePoint& sp) {
  return sp.kind == LocusKind::Vertex ? P.total_angle(sp.index) : kTwoPi;
}

double angular_coordinate(const Polyhedron& P, const SurfacePoint& sp, int f, const Vec2& dir) {
  switch (sp.kind) {
    case LocusKind::Face: {
      if (sp.index != f) break;
      return ccw_angle(Vec2(1.0, 0.0), dir);
    }
    case LocusKind::Edge: {
      const int h = sp.index;
      const int t = P.twin(h);
      int ref;
      double base;
      if (Polyhedron::face_of(h) == f) {
        ref = h;
        base = 0.0;
      } else if (Polyhedron::face_of(t) == f) {
        ref = t;
        base = kPi;
      } else {
        break;
      }
      double a = ccw_angle(P.head(ref) - P.tail(ref), dir);
      if (a > 1.5 * kPi) a = 0.0;
      a = std::min(a, kPi);
      return wrap(base + a, kTwoPi);
    }
    case LocusKind::Vertex: {
      const int k = P.corner_index(f, sp.index);
      if (k < 0) break;
      const int h = Polyhedron::halfedge(f, k);
      const double corner = P.corner_angle(h);
      double a = ccw_angle(P.head(h) - P.tail(h), dir);
      if (a > corner + 0.5 * (kTwoPi - corner)) a = 0.0;
      a = std::min(a, corner);
      const double c = P.fan_offset(h) + a;
      const double total = P.total_angle(sp.index);
      return c >= total ? c - total : c;
    }
  }
  throw MismatchedLocus("direction face " + std::to_string(f) + " is not incident to the point");
}

TangentDirection direction_at(const Polyhedron& P, const SurfacePoint& sp, double coord) {
  TangentDirection td;
  td.at = sp;
  const double total = total_angle(P, sp);
  coord = wrap(coord, total);
  switch (sp.kind) {
    case LocusKind::Face:
      td.face = sp.index;
      td.dir = Vec2(std::cos(coord), std::sin(coord));
      return td;
    case LocusKind::Edge: {
      const int ref = coord <= kPi ? sp.index : P.twin(sp.index);
      const double a = coord <= kPi ? coord : coord - kPi;
      td.face = Polyhedron::face_of(ref);
      td.dir = rotate((P.head(ref) - P.tail(ref)).normalized(), a);
      return td;
    }
    case LocusKind::Vertex: {
      const auto& fan = P.fan(sp.index);
      int chosen = fan.back();
      for (int h : fan) {
        if (coord < P.fan_offset(h) + P.corner_angle(h)) {
          chosen = h;
          break;
        }
      }
      const double a = std::clamp(coord - P.fan_offset(chosen), 0.0, P.corner_angle(chosen));
      td.face = Polyhedron::face_of(chosen);
      td.dir = rotate((P.head(chosen) - P.tail(chosen)).normalized(), a);
      return td;
    }
  }
  return td;
}

std::pair<double, double> side_angles(double coord_back, double coord_out, double total) {
  const double L = wrap(coord_back - coord_out, total);
  return {L, total - L};
}

std::pair<double, double> total_angle_sides(const Polyhedron& P, const SurfacePoint& q, const TangentDirection& incoming,
                                            const TangentDirection& outgoing) {
  const double tol = 10.0 * P.tol().point;
  if (!same_point(P, q, incoming.at, tol) || !same_point(P, q, outgoing.at, tol))
    throw MismatchedLocus("directions are not based at the given point");
  if (q.kind == LocusKind::Face && (incoming.face != q.index || outgoing.face != q.index))
    throw MismatchedLocus("at a face point both directions must lie in that face");
  const double back = angular_coordinate(P, q, incoming.face, -incoming.dir);
  const double out = angular_coordinate(P, q, outgoing.face, outgoing.dir);
  return side_angles(back, out, total_angle(P, q));
}

}  // namespace qstar
