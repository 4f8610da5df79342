#include "qstar/loop.hpp"

#include <map>
#include <set>
#include <sstream>

#include "qstar/errors.hpp"
#include "qstar/predicates.hpp"

namespace qstar {

double QuasigeodesicLoop::arc_start(int i) const { return arc_position(i, 0.0); }

double QuasigeodesicLoop::arc_position(int segment, double param) const {
  const double a = arc_[segment] + param * segments[segment].length() - arc_[loop_point];
  double r = wrap(a, length);
  if (length - r <= 1e-12 * length) r = 0.0;
  return r;
}

void finalize_loop(const Polyhedron& P, QuasigeodesicLoop& Q) {
  const int n = Q.size();
  Q.left.assign(n, 0.0);
  Q.right.assign(n, 0.0);
  Q.turn_left = Q.turn_right = 0.0;
  for (int i = 0; i < n; ++i) {
    const Segment& in = Q.segments[(i + n - 1) % n];
    const Segment& out = Q.segments[i];
    const double back = angular_coordinate(P, Q.corners[i], in.face, in.a - in.b);
    const double fwd = angular_coordinate(P, Q.corners[i], out.face, out.b - out.a);
    auto [L, R] = side_angles(back, fwd, total_angle(P, Q.corners[i]));
    Q.left[i] = L;
    Q.right[i] = R;
    Q.turn_left += kPi - L;
    Q.turn_right += kPi - R;
  }
  Q.q = static_cast<int>(Q.segments.size());
  Q.arc_.assign(n, 0.0);
  Q.length = 0.0;
  for (int i = 0; i < n; ++i) {
    Q.arc_[i] = Q.length;
    Q.length += Q.segments[i].length();
  }
}

bool is_marked_corner(const Polyhedron& P, const QuasigeodesicLoop& Q, int i) {
  (void)P;
  const double tol = 1e-9;
  return i == Q.loop_point || std::abs(Q.left[i] - kPi) > tol || std::abs(Q.right[i] - kPi) > tol;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

struct FaceSegment {
  int index;
  Vec2 a, b;
};

std::map<int, std::vector<FaceSegment>> segments_by_face(const Polyhedron& P, const std::vector<Segment>& segs) {
  std::map<int, std::vector<FaceSegment>> out;
  for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
    const Segment& s = segs[i];
    out[s.face].push_back({i, s.a, s.b});
    int h;
    if (is_edge_lying(P, s, &h)) {
      const int g = Polyhedron::face_of(P.twin(h));
      const Segment t = segment_in_face(P, s, g);
      out[g].push_back({i, t.a, t.b});
    }
  }
  return out;
}

}  // namespace

ValidationReport validate_loop(const Polyhedron& P, const QuasigeodesicLoop& Q) {
  ValidationReport rep;
  const int n = Q.size();
  const double eps = P.tol().angle;
  rep.loop_point = Q.loop_point;
  rep.turn_left = Q.turn_left;
  rep.turn_right = Q.turn_right;
  if (n < 2 || static_cast<int>(Q.segments.size()) != n) {
    rep.valid = false;
    rep.simple = false;
    rep.problems.push_back("loop has fewer than two corners");
    return rep;
  }
  for (int i = 0; i < n; ++i) {
    CornerReport c;
    c.index = i;
    c.left = Q.left[i];
    c.right = Q.right[i];
    c.bending = std::abs(c.left - kPi) > 1e-9 || std::abs(c.right - kPi) > 1e-9;
    if (c.left < -eps || c.right < -eps) c.violation = true;
    if (i != Q.loop_point && (c.left > kPi + eps || c.right > kPi + eps)) c.violation = true;
    if (i == Q.loop_point && c.left > kPi + eps && c.right > kPi + eps) c.violation = true;
    if (c.violation) {
      std::ostringstream os;
      os << "corner " << i << " has side angles L=" << c.left << " R=" << c.right;
      rep.problems.push_back(os.str());
    }
    rep.corners.push_back(c);
  }
  rep.beta = Q.beta();
  if (!(rep.beta < kTwoPi)) rep.problems.push_back("loop-point angle beta is not below 2pi");

  // Distinct corners.
  const double ptol = 10.0 * P.tol().point;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((position_3d(P, Q.corners[i]) - position_3d(P, Q.corners[j])).norm() <= ptol) {
        rep.simple = false;
        rep.problems.push_back("corners " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
  // Pairwise segment tests inside each face.
  for (const auto& [f, list] : segments_by_face(P, Q.segments)) {
    for (size_t x = 0; x < list.size(); ++x) {
      for (size_t y = x + 1; y < list.size(); ++y) {
        const FaceSegment& s = list[x];
        const FaceSegment& t = list[y];
        if (s.index == t.index) continue;
        const bool s_then_t = (s.index + 1) % n == t.index;
        const bool t_then_s = (t.index + 1) % n == s.index;
        bool bad = false;
        if (s_then_t || t_then_s) {
          // Adjacent: they may only share the common corner.
          const Vec2 shared = s_then_t ? s.b : s.a;
          const Vec2 so = s_then_t ? s.a : s.b;
          const Vec2 to = s_then_t ? t.b : t.a;
          bad = orientation(shared, so, to) == 0 && (so - shared).dot(to - shared) > 0.0;
        } else {
          bad = segments_intersect(s.a, s.b, t.a, t.b);
        }
        if (bad) {
          rep.simple = false;
          rep.problems.push_back("segments " + std::to_string(s.index) + " and " + std::to_string(t.index) +
                                 " intersect in face " + std::to_string(f));
        }
      }
    }
  }
  rep.valid = rep.problems.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Explicit loops

namespace {

int common_face(const Polyhedron& P, const SurfacePoint& a, const SurfacePoint& b) {
  auto fa = incident_faces(P, a);
  auto fb = incident_faces(P, b);
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  std::vector<int> both;
  std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(both));
  return both.empty() ? -1 : both.front();
}

Segment make_segment(const Polyhedron& P, int f, const SurfacePoint& a, const SurfacePoint& b) {
  Segment s;
  s.face = f;
  s.pa = a;
  s.pb = b;
  s.a = position_in_face(P, a, f);
  s.b = position_in_face(P, b, f);
  return s;
}

// Straight path between two points of one planar input polygon, crossing its fan diagonals.
std::vector<SurfacePoint> straighten_in_polygon(const Polyhedron& P, const SurfacePoint& a, const SurfacePoint& b) {
  std::set<int> sa, sb;
  for (int f : incident_faces(P, a)) sa.insert(P.source_face(f));
  for (int f : incident_faces(P, b)) sb.insert(P.source_face(f));
  int src = -1;
  for (int s : sa)
    if (sb.count(s)) {
      src = s;
      break;
    }
  if (src < 0) return {};
  int f0 = -1;
  for (int f = 0; f < P.num_faces() && f0 < 0; ++f)
    if (P.source_face(f) == src) f0 = f;
  const Vec3 n = P.normal(f0);
  const Vec3 e1 = (P.vertex(P.face(f0)[1]) - P.vertex(P.face(f0)[0])).normalized();
  const Vec3 e2 = n.cross(e1);
  auto flat = [&](const Vec3& p) { return Vec2(p.dot(e1), p.dot(e2)); };
  const Vec2 A = flat(position_3d(P, a)), B = flat(position_3d(P, b));
  std::vector<std::pair<double, SurfacePoint>> hits;
  for (int h = 0; h < P.num_halfedges(); ++h) {
    if (h != P.canonical(h) || !P.is_flat(h)) continue;
    if (P.source_face(Polyhedron::face_of(h)) != src) continue;
    const Vec2 C = flat(P.vertex(P.origin(h))), D = flat(P.vertex(P.dest(h)));
    const Vec2 r = B - A, s = D - C;
    const double denom = cross(r, s);
    if (std::abs(denom) <= 1e-15 * r.norm() * s.norm()) continue;
    const double lam = cross(C - A, s) / denom;
    const double mu = cross(C - A, r) / denom;
    const double tl = 1e-12;
    if (lam <= tl || lam >= 1.0 - tl || mu <= tl || mu >= 1.0 - tl) continue;
    hits.emplace_back(lam, canonicalize(P, SurfacePoint::at_edge(h, mu)));
  }
  std::sort(hits.begin(), hits.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<SurfacePoint> out{a};
  for (const auto& [lam, sp] : hits) out.push_back(sp);
  out.push_back(b);
  return out;
}

}  // namespace

QuasigeodesicLoop loop_from_corners(const Polyhedron& P, const std::vector<SurfacePoint>& input,
                                    std::optional<int> loop_point) {
  const int m = static_cast<int>(input.size());
  if (m < 2) throw LoopConstructionError("a loop needs at least two corners");
  std::vector<SurfacePoint> given;
  for (const auto& c : input) given.push_back(canonicalize(P, c));
  QuasigeodesicLoop Q;
  std::vector<int> remap(m, 0);
  for (int i = 0; i < m; ++i) {
    const SurfacePoint& a = given[i];
    const SurfacePoint& b = given[(i + 1) % m];
    remap[i] = static_cast<int>(Q.corners.size());
    const int f = common_face(P, a, b);
    if (f >= 0) {
      Q.corners.push_back(a);
      Q.segments.push_back(make_segment(P, f, a, b));
      continue;
    }
    auto chain = straighten_in_polygon(P, a, b);
    if (chain.empty())
      throw LoopConstructionError("corners " + std::to_string(i) + " and " + std::to_string((i + 1) % m) +
                                  " do not share a face or input polygon");
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
      const int g = common_face(P, chain[k], chain[k + 1]);
      if (g < 0) throw LoopConstructionError("cannot straighten segment between corners " + std::to_string(i));
      Q.corners.push_back(chain[k]);
      Q.segments.push_back(make_segment(P, g, chain[k], chain[k + 1]));
    }
  }
  finalize_loop(P, Q);
  if (loop_point) {
    if (*loop_point < 0 || *loop_point >= m) throw IndexOutOfRange("loop point index out of range");
    Q.loop_point = remap[*loop_point];
  } else {
    int best = 0;
    double best_angle = kPi + P.tol().angle;
    for (int i = 0; i < Q.size(); ++i) {
      const double a = std::max(Q.left[i], Q.right[i]);
      if (a > best_angle) {
        best_angle = a;
        best = i;
      }
    }
    Q.loop_point = best;
  }
  return Q;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

struct Branch {
  GeodesicWalker walker;
  std::vector<Segment> segs;
  double length = 0.0;
};

struct Contact {
  double t = 2.0;
  int branch = -1;
  int index = -1;
  double s = 0.0;
};

Segment reversed(const Segment& s) {
  Segment r = s;
  std::swap(r.a, r.b);
  std::swap(r.pa, r.pb);
  return r;
}

// Earliest approach of [a, b] to [c, d] within tol, as (t on [a,b], s on [c,d]).
std::optional<std::pair<double, double>> contact(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                                                 double tol) {
  std::optional<std::pair<double, double>> best;
  auto offer = [&](double t, double s) {
    if (!best || t < best->first) best = std::make_pair(t, s);
  };
  const Vec2 r = b - a, q = d - c;
  const double denom = cross(r, q);
  if (denom != 0.0 && segments_intersect(a, b, c, d)) {
    offer(std::clamp(cross(c - a, q) / denom, 0.0, 1.0), std::clamp(cross(c - a, r) / denom, 0.0, 1.0));
  }
  double t;
  if (point_segment_distance(c, a, b, &t) <= tol) offer(t, 0.0);
  if (point_segment_distance(d, a, b, &t) <= tol) offer(t, 1.0);
  if (point_segment_distance(a, c, d, &t) <= tol) offer(0.0, t);
  if (point_segment_distance(b, c, d, &t) <= tol) offer(1.0, t);
  return best;
}

}  // namespace

QuasigeodesicLoop construct_loop(const Polyhedron& P, const SurfacePoint& p_in, const TangentDirection& u,
                                 const LoopOptions& opts) {
  const SurfacePoint p = canonicalize(P, p_in);
  if (p.is_vertex()) throw StartAtVertex("loop seed lies on vertex " + std::to_string(p.index));
  const double max_len = opts.max_length > 0.0 ? opts.max_length : 50.0 * P.diagonal();
  const double coord = angular_coordinate(P, p, u.face, u.dir);
  std::vector<Branch> br;
  br.push_back({GeodesicWalker(P, direction_at(P, p, coord)), {}, 0.0});
  br.push_back({GeodesicWalker(P, direction_at(P, p, coord + kPi)), {}, 0.0});

  ConstructionTrace trace;
  trace.traced = true;
  trace.policy = opts.policy;
  const double tol = P.tol().planar;
  const double eps = P.tol().point;

  while (true) {
    const int b = br[0].length <= br[1].length ? 0 : 1;
    Branch& B = br[b];
    if (B.length >= max_len) {
      std::ostringstream os;
      os << "branches traced to length " << max_len << " without meeting";
      throw NoIntersection(os.str(), br[0].length + br[1].length);
    }
    Segment seg = B.walker.step(max_len - B.length);
    const double seg_len = seg.length();

    // Contacts with earlier segments in the same face.
    Contact best;
    int hits = 0;
    if (seg_len > 0.0) {
      for (int o = 0; o < 2; ++o) {
        for (int j = 0; j < static_cast<int>(br[o].segs.size()); ++j) {
          if (o == b && j + 1 == static_cast<int>(B.segs.size())) continue;
          if (o != b && j == 0 && B.segs.empty()) continue;
          const Segment& old = br[o].segs[j];
          if (!is_incident(P, old.pa, seg.face) || !is_incident(P, old.pb, seg.face)) continue;
          const Segment of = segment_in_face(P, old, seg.face);
          auto c = contact(seg.a, seg.b, of.a, of.b, tol);
          if (!c) continue;
          ++hits;
          if (c->first < best.t) best = {c->first, o, j, c->second};
        }
      }
    }
    if (best.branch >= 0) {
      trace.contacts = hits;
      trace.contact_branch = best.branch;
      trace.contact_segment = best.index;
      trace.closure = best.branch == b ? "within" : "between";
      const Segment& old = br[best.branch].segs[best.index];
      const double old_len = old.length();
      SurfacePoint xs;
      if (best.t * seg_len <= eps)
        xs = seg.pa;
      else if (best.s * old_len <= eps)
        xs = old.pa;
      else if ((1.0 - best.s) * old_len <= eps)
        xs = old.pb;
      else if ((1.0 - best.t) * seg_len <= eps)
        xs = seg.pb;
      else
        xs = point_on_segment(P, seg, best.t);

      Segment head = seg;  // new segment up to X
      head.pb = xs;
      head.b = position_in_face(P, xs, seg.face);
      std::vector<Segment> loop;
      if (best.branch != b) {
        Segment tail = old;  // other branch's segment up to X
        tail.pb = xs;
        tail.b = position_in_face(P, xs, old.face);
        const auto& O = br[best.branch].segs;
        loop.push_back(reversed(tail));
        for (int j = best.index - 1; j >= 0; --j) loop.push_back(reversed(O[j]));
        const size_t join = loop.size();
        for (const auto& s : B.segs) loop.push_back(s);
        loop.push_back(head);
        // Drop the artificial corner at a face-interior seed.
        if (p.is_face() && join > 0 && join < loop.size() && loop[join - 1].face == loop[join].face) {
          loop[join - 1].b = loop[join].b;
          loop[join - 1].pb = loop[join].pb;
          loop.erase(loop.begin() + static_cast<long>(join));
        }
      } else {
        Segment rest = old;  // part of the earlier segment after X
        rest.pa = xs;
        rest.a = position_in_face(P, xs, old.face);
        loop.push_back(rest);
        for (int j = best.index + 1; j < static_cast<int>(B.segs.size()); ++j) loop.push_back(B.segs[j]);
        loop.push_back(head);
      }
      QuasigeodesicLoop Q;
      for (auto& s : loop)
        if (s.length() > eps) Q.segments.push_back(s);
      const int n = static_cast<int>(Q.segments.size());
      if (n < 2) throw LoopConstructionError("closed curve degenerated to fewer than two segments");
      for (int i = 0; i < n; ++i) {
        Q.segments[i].pa = Q.segments[(i + n - 1) % n].pb;
        Q.corners.push_back(Q.segments[i].pa);
      }
      Q.loop_point = 0;
      trace.branch_length[0] = br[0].length;
      trace.branch_length[1] = br[1].length;
      trace.branch_length[b] += best.t * seg_len;
      Q.trace = trace;
      finalize_loop(P, Q);
      ValidationReport rep = validate_loop(P, Q);
      if (!rep.valid) {
        std::string msg = "branches met but the closed curve is not a quasigeodesic loop";
        for (const auto& pr : rep.problems) msg += "; " + pr;
        throw LoopConstructionError(msg);
      }
      return Q;
    }

    B.segs.push_back(seg);
    B.length += seg_len;
    if (B.walker.at_vertex()) {
      const TangentDirection arrival = B.walker.tangent();
      const TangentDirection out = continue_through_vertex(P, arrival, opts.policy);
      const double back = angular_coordinate(P, arrival.at, arrival.face, -arrival.dir);
      const double fwd = angular_coordinate(P, arrival.at, out.face, out.dir);
      auto [L, R] = side_angles(back, fwd, total_angle(P, arrival.at));
      trace.passages.push_back({b, arrival.at.index, B.length, L, R});
      B.walker.turn(out);
    } else if (B.walker.position().is_face()) {
      B.length = max_len;
    }
  }
}

}  // namespace qstar
