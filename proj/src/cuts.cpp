#include "qstar/cuts.hpp"

#include <atomic>
#include <exception>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <thread>

#include "qstar/errors.hpp"
#include "qstar/predicates.hpp"

namespace qstar {

namespace {

struct SegmentFeature {
  Vec2 c, d;
  int segment;
};

struct PointFeature {
  Vec2 p;
  int corner;
};

struct LoopFeatures {
  std::vector<std::vector<SegmentFeature>> segments;  // by face
  std::vector<std::vector<PointFeature>> points;
};

LoopFeatures loop_features(const Polyhedron& P, const QuasigeodesicLoop& Q) {
  LoopFeatures F;
  F.segments.assign(P.num_faces(), {});
  F.points.assign(P.num_faces(), {});
  for (int j = 0; j < Q.size(); ++j) {
    const Segment& s = Q.segments[j];
    F.segments[s.face].push_back({s.a, s.b, j});
    int h;
    if (is_edge_lying(P, s, &h)) {
      const Segment t = segment_in_face(P, s, Polyhedron::face_of(P.twin(h)));
      F.segments[t.face].push_back({t.a, t.b, j});
    }
    for (int f : incident_faces(P, Q.corners[j])) F.points[f].push_back({position_in_face(P, Q.corners[j], f), j});
  }
  return F;
}

struct Window {
  int face;
  int entry;  // half-edge of `face` crossed to get here, -1 at the source
  Vec2 S;     // source image
  Vec2 a, b;  // cone through S; a is clockwise of b
  double dmin;
  int parent;
};

struct Candidate {
  double length;
  int window;
  Vec2 q;
  int segment;
  double param;
};

// Parameter range of x0 + t (x1 - x0), t in [0, 1], inside the closed cone.
std::optional<std::pair<double, double>> clip_to_cone(const Window& w, const Vec2& x0, const Vec2& x1, double slack) {
  double lo = 0.0, hi = 1.0;
  auto restrict = [&](double g0, double g1) {
    // keep t with g0 + t (g1 - g0) >= -slack
    const double dg = g1 - g0;
    if (std::abs(dg) < 1e-300) return g0 >= -slack;
    const double t = (-slack - g0) / dg;
    if (dg > 0)
      lo = std::max(lo, t);
    else
      hi = std::min(hi, t);
    return lo <= hi;
  };
  const Vec2 ra = w.a - w.S, rb = w.b - w.S;
  const double sa = ra.norm(), sb = rb.norm();
  if (!restrict(cross(ra, x0 - w.S) / sa, cross(ra, x1 - w.S) / sa)) return std::nullopt;
  if (!restrict(cross(x0 - w.S, rb) / sb, cross(x1 - w.S, rb) / sb)) return std::nullopt;
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

struct Propagation {
  const Polyhedron& P;
  const QuasigeodesicLoop& Q;
  const LoopFeatures& F;
  int v;
  std::vector<Window> windows;
  std::vector<Candidate> candidates;
  double best;
  long max_windows;

  double tie(double x) const { return x * (1.0 + 1e-9) + P.tol().point; }

  void offer(const Candidate& c) {
    if (c.length > tie(best)) return;
    best = std::min(best, c.length);
    candidates.push_back(c);
  }

  void scan_features(int wi) {
    const Window& w = windows[wi];
    const double slack = P.tol().point;
    for (const auto& sf : F.segments[w.face]) {
      auto r = clip_to_cone(w, sf.c, sf.d, slack);
      if (!r) continue;
      const Vec2 e = sf.d - sf.c;
      double t = e.squaredNorm() > 0 ? (w.S - sf.c).dot(e) / e.squaredNorm() : 0.0;
      t = std::clamp(t, r->first, r->second);
      t = std::clamp(t, 0.0, 1.0);
      const Vec2 q = sf.c + t * e;
      offer({(q - w.S).norm(), wi, q, sf.segment, t});
    }
    for (const auto& pf : F.points[w.face]) {
      if (!clip_to_cone(w, pf.p, pf.p, slack)) continue;
      offer({(pf.p - w.S).norm(), wi, pf.p, pf.corner, 0.0});
    }
  }

  void push_child(std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>>& pq,
                  int wi, int exit_h) {
    const Window w = windows[wi];
    const Vec2 P0 = P.tail(exit_h), P1 = P.head(exit_h);
    auto r = clip_to_cone(w, P0, P1, 0.0);
    if (!r) return;
    const double len = P.edge_length(exit_h);
    if ((r->second - r->first) * len <= P.tol().point) return;
    const int t = P.twin(exit_h);
    const Rigid2& T = P.edge_transform(t);
    Window c;
    c.face = Polyhedron::face_of(t);
    c.entry = t;
    c.S = T(w.S);
    c.a = T(P0 + r->first * (P1 - P0));
    c.b = T(P0 + r->second * (P1 - P0));
    c.dmin = point_segment_distance(c.S, c.a, c.b);
    c.parent = wi;
    if (c.dmin > tie(best)) return;
    if (static_cast<long>(windows.size()) >= max_windows)
      throw PropagationFailure("window limit reached while propagating from vertex " + std::to_string(v));
    windows.push_back(c);
    pq.emplace(c.dmin, static_cast<int>(windows.size()) - 1);
  }

  void run() {
    std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>> pq;
    for (int h : P.fan(v)) {
      Window w;
      w.face = Polyhedron::face_of(h);
      w.entry = -1;
      w.S = P.tail(h);
      w.a = P.head(h);
      w.b = P.tail(Polyhedron::prev(h));
      w.dmin = 0.0;
      w.parent = -1;
      windows.push_back(w);
      pq.emplace(0.0, static_cast<int>(windows.size()) - 1);
    }
    while (!pq.empty()) {
      const auto [d, wi] = pq.top();
      pq.pop();
      if (d > tie(best)) break;
      scan_features(wi);
      const Window& w = windows[wi];
      if (w.entry < 0) {
        // Source window: leave through the edge opposite the vertex.
        int h = -1;
        for (int k = 0; k < 3; ++k)
          if (P.origin(Polyhedron::halfedge(w.face, k)) == v) h = Polyhedron::halfedge(w.face, k);
        push_child(pq, wi, Polyhedron::next(h));
      } else {
        const int e = w.entry;
        push_child(pq, wi, Polyhedron::next(e));
        push_child(pq, wi, Polyhedron::prev(e));
      }
    }
  }
};

struct Reconstructed {
  std::vector<Segment> segments;
  std::vector<int> faces;  // source to end
};

std::optional<Reconstructed> reconstruct(const Polyhedron& P, const std::vector<Window>& windows, const Candidate& c,
                                         const SurfacePoint& end, int v) {
  std::vector<Segment> rev;
  Vec2 stop = c.q;
  SurfacePoint stop_sp = end;
  int wi = c.window;
  const double delta = 1e-9;
  while (true) {
    const Window& w = windows[wi];
    Segment s;
    s.face = w.face;
    s.b = stop;
    s.pb = stop_sp;
    if (w.entry < 0) {
      s.a = w.S;
      s.pa = SurfacePoint::at_vertex(v);
      rev.push_back(s);
      break;
    }
    const int e = w.entry;
    const Vec2 A = P.tail(e), B = P.head(e);
    const Vec2 r = stop - w.S;
    const double den = cross(r, B - A);
    if (den == 0.0) return std::nullopt;
    const double u = -cross(r, A - w.S) / den;
    if (u <= delta || u >= 1.0 - delta) return std::nullopt;  // through a vertex
    s.a = A + u * (B - A);
    s.pa = canonicalize(P, SurfacePoint::at_edge(e, u));
    rev.push_back(s);
    const Rigid2 Tinv = P.edge_transform(e).inverse();
    stop = Tinv(s.a);
    stop_sp = s.pa;
    wi = w.parent;
  }
  Reconstructed out;
  out.segments.assign(rev.rbegin(), rev.rend());
  // A stop on the entry edge leaves an empty last piece.
  if (out.segments.size() > 1 && out.segments.back().length() <= P.tol().point) {
    out.segments.pop_back();
    out.segments.back().pb = end;
  }
  for (const auto& s : out.segments) out.faces.push_back(s.face);
  return out;
}

// Angles of an arriving path with the loop at a point of the loop.
std::pair<double, double> loop_alphas(const Polyhedron& P, const QuasigeodesicLoop& Q, const SurfacePoint& at, int seg,
                                      double param, int face, const Vec2& arrival) {
  const int n = Q.size();
  double cf, cb;
  if (param <= 0.0) {
    const Segment& out = Q.segments[seg];
    const Segment& in = Q.segments[(seg + n - 1) % n];
    cf = angular_coordinate(P, at, out.face, out.b - out.a);
    cb = angular_coordinate(P, at, in.face, in.a - in.b);
  } else {
    const Segment& s = Q.segments[seg];
    cf = angular_coordinate(P, at, s.face, s.b - s.a);
    cb = angular_coordinate(P, at, s.face, s.a - s.b);
  }
  const double total = total_angle(P, at);
  const double cp = angular_coordinate(P, at, face, -arrival);
  const double L = wrap(cb - cf, total);
  const double p = wrap(cp - cf, total);
  if (p <= L) return {p, L - p};
  return {total - p, p - L};
}

}  // namespace

VertexCut shortest_path_to_loop(const Polyhedron& P, int v, const QuasigeodesicLoop& Q, const Half& half,
                                const CutOptions& opts) {
  if (v < 0 || v >= P.num_vertices()) throw IndexOutOfRange("vertex index out of range: " + std::to_string(v));
  if (!half.contains_vertex(v))
    throw MismatchedLocus("vertex " + std::to_string(v) + " is not interior to the " + side_name(half.side) + " half");
  const LoopFeatures F = loop_features(P, Q);
  Propagation prop{P, Q, F, v, {}, {}, 0.0, opts.max_windows};
  prop.best = oracle_distance(P, v, Q, std::max(1, opts.bound_k)) * (1.0 + 1e-9) + P.tol().planar;
  prop.run();

  struct Found {
    Candidate c;
    SurfacePoint end;
    int seg;
    double param;
    double arc;
    double start_coord;
    Reconstructed path;
  };
  std::vector<Found> found;
  const double limit = prop.tie(prop.best);
  const double ptol = P.tol().planar;
  for (const Candidate& c : prop.candidates) {
    if (c.length > limit) continue;
    int seg = c.segment;
    double param = c.param;
    if (param >= 1.0 - 1e-12) {
      seg = (seg + 1) % Q.size();
      param = 0.0;
    } else if (param <= 1e-12) {
      param = 0.0;
    }
    const SurfacePoint end = param == 0.0 ? Q.corners[seg] : point_on_segment(P, Q.segments[seg], param);
    auto path = reconstruct(P, prop.windows, c, end, v);
    if (!path) continue;
    const Segment& first = path->segments.front();
    const double coord = angular_coordinate(P, SurfacePoint::at_vertex(v), first.face, first.b - first.a);
    const Vec3 e3 = position_3d(P, end);
    // Candidates leaving in the same direction and ending next to each other
    // are one path found twice, e.g. a corner next to the foot on its
    // neighbouring segment; the shorter one is the real end.
    Found cand{c, end, seg, param, Q.arc_position(seg, param), coord, *path};
    bool dup = false;
    for (Found& f : found) {
      const double dc = std::abs(wrap(coord - f.start_coord + 0.5 * P.total_angle(v), P.total_angle(v)) -
                                 0.5 * P.total_angle(v));
      const double de = (position_3d(P, f.end) - e3).norm();
      if (dc <= 1e-4 && de <= 1e-5 * P.diagonal()) {
        dup = true;
        if (de > ptol && c.length < f.c.length) f = std::move(cand);
        break;
      }
    }
    if (dup) continue;
    found.push_back(std::move(cand));
  }
  if (found.empty()) throw PropagationFailure("no shortest path found from vertex " + std::to_string(v));
  std::sort(found.begin(), found.end(), [&](const Found& a, const Found& b) {
    if (std::abs(a.arc - b.arc) > ptol) return a.arc < b.arc;
    return a.path.faces < b.path.faces;
  });
  const Found& best = found.front();

  VertexCut cut;
  cut.vertex = v;
  cut.side = half.side;
  cut.projection = best.end;
  cut.loop_segment = best.seg;
  cut.param = best.param;
  cut.arc = best.arc;
  cut.length = best.c.length;
  cut.tie_count = static_cast<int>(found.size());
  cut.paths_to_projection = 0;
  for (const Found& f : found)
    if ((position_3d(P, f.end) - position_3d(P, best.end)).norm() <= ptol) ++cut.paths_to_projection;
  cut.at_marked_corner = best.param == 0.0 && is_marked_corner(P, Q, best.seg);
  cut.windows = static_cast<long>(prop.windows.size());

  GeodesicPath& g = cut.path;
  g.segments = best.path.segments;
  g.faces = best.path.faces;
  g.points.push_back(SurfacePoint::at_vertex(v));
  for (const auto& s : g.segments) g.points.push_back(s.pb);
  g.length = cut.length;
  g.reason = StopReason::HitCurve;
  g.developed = develop_strip(P, g.faces);

  const Segment& last = g.segments.back();
  auto [af, ab] = loop_alphas(P, Q, best.end, best.seg, best.param, last.face, last.b - last.a);
  cut.alpha_forward = af;
  cut.alpha_backward = ab;
  return cut;
}

std::vector<VertexCut> compute_cuts(const Polyhedron& P, const QuasigeodesicLoop& Q, const Half& half,
                                    const CutOptions& opts) {
  const auto& verts = half.interior_vertices;
  const int n = static_cast<int>(verts.size());
  std::vector<VertexCut> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        out[i] = shortest_path_to_loop(P, verts[i], Q, half, opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = opts.parallel ? std::max(1, std::min<int>(n, std::thread::hardware_concurrency())) : 1;
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------

double oracle_distance(const Polyhedron& P, int v, const QuasigeodesicLoop& Q, int k) {
  if (k < 1) throw Error("oracle subdivision count must be at least 1");
  if (v < 0 || v >= P.num_vertices()) throw IndexOutOfRange("vertex index out of range: " + std::to_string(v));
  std::vector<SurfacePoint> nodes;
  std::vector<bool> target;
  std::vector<std::vector<std::pair<int, Vec2>>> in_face(P.num_faces());
  auto add = [&](const SurfacePoint& sp, bool is_target) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(sp);
    target.push_back(is_target);
    for (int f : incident_faces(P, sp)) in_face[f].emplace_back(id, position_in_face(P, sp, f));
  };
  for (int u = 0; u < P.num_vertices(); ++u) add(SurfacePoint::at_vertex(u), false);
  for (int h = 0; h < P.num_halfedges(); ++h) {
    if (P.canonical(h) != h) continue;
    for (int i = 1; i < k; ++i) add(SurfacePoint::at_edge(h, static_cast<double>(i) / k), false);
  }
  for (const Segment& s : Q.segments)
    for (int i = 0; i < k; ++i) add(point_on_segment(P, s, static_cast<double>(i) / k), true);

  std::vector<double> dist(nodes.size(), std::numeric_limits<double>::infinity());
  std::vector<bool> done(nodes.size(), false);
  std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>> pq;
  dist[v] = 0.0;
  pq.emplace(0.0, v);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = true;
    if (target[u]) return d;
    for (int f : incident_faces(P, nodes[u])) {
      const Vec2 pu = position_in_face(P, nodes[u], f);
      for (const auto& [w, pw] : in_face[f]) {
        const double nd = d + (pw - pu).norm();
        if (nd < dist[w]) {
          dist[w] = nd;
          pq.emplace(nd, w);
        }
      }
    }
  }
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------

LemmaReport verify_cut_lemmas(const Polyhedron& P, const std::vector<VertexCut>& cuts, const QuasigeodesicLoop& /*Q*/) {
  LemmaReport rep;
  const double ptol = P.tol().planar;
  auto same_end = [&](const VertexCut& a, const VertexCut& b) {
    return (position_3d(P, a.projection) - position_3d(P, b.projection)).norm() <= ptol;
  };

  for (const VertexCut& c : cuts) {
    const double lo = std::min(c.alpha_forward, c.alpha_backward);
    if (c.at_marked_corner) {
      if (lo < kPi / 2 - P.tol().angle) {
        rep.alpha_failures.push_back(c.vertex);
        std::ostringstream os;
        os << "cut from vertex " << c.vertex << " meets a loop corner at angle " << lo;
        rep.problems.push_back(os.str());
      }
    } else {
      const double err = std::max(std::abs(c.alpha_forward - kPi / 2), std::abs(c.alpha_backward - kPi / 2));
      rep.max_alpha_error = std::max(rep.max_alpha_error, err);
      if (err > 1e-7) {
        rep.alpha_failures.push_back(c.vertex);
        std::ostringstream os;
        os << "cut from vertex " << c.vertex << " is not orthogonal to the loop (error " << err << ")";
        rep.problems.push_back(os.str());
      }
      if (c.paths_to_projection != 1) {
        rep.alpha_failures.push_back(c.vertex);
        rep.problems.push_back("cut from vertex " + std::to_string(c.vertex) + " has " +
                               std::to_string(c.paths_to_projection) + " shortest paths to its projection");
      }
    }
    for (size_t i = 1; i < c.path.points.size(); ++i)
      if (i + 1 < c.path.points.size() && c.path.points[i].is_vertex())
        rep.problems.push_back("cut from vertex " + std::to_string(c.vertex) + " passes through a vertex");
  }

  // Pairwise disjointness, face by face.
  struct Piece {
    int cut;
    bool last;
    Vec2 a, b;
  };
  std::map<int, std::vector<Piece>> by_face;
  for (int ci = 0; ci < static_cast<int>(cuts.size()); ++ci) {
    const auto& segs = cuts[ci].path.segments;
    for (size_t k = 0; k < segs.size(); ++k) {
      const bool last = k + 1 == segs.size();
      by_face[segs[k].face].push_back({ci, last, segs[k].a, segs[k].b});
      int h;
      if (is_edge_lying(P, segs[k], &h)) {
        const Segment t = segment_in_face(P, segs[k], Polyhedron::face_of(P.twin(h)));
        by_face[t.face].push_back({ci, last, t.a, t.b});
      }
    }
  }
  std::set<std::pair<int, int>> bad;
  for (const auto& [f, list] : by_face) {
    for (size_t i = 0; i < list.size(); ++i) {
      for (size_t j = i + 1; j < list.size(); ++j) {
        const Piece& s = list[i];
        const Piece& t = list[j];
        if (s.cut == t.cut) continue;
        bool crossing;
        if (s.last && t.last && same_end(cuts[s.cut], cuts[t.cut])) {
          // Both end at the same loop point: only a shared stretch counts.
          crossing = orientation(s.b, s.a, t.a) == 0 && (s.a - s.b).dot(t.a - t.b) > 0.0;
        } else {
          crossing = segments_intersect(s.a, s.b, t.a, t.b);
        }
        if (crossing) bad.insert({std::min(cuts[s.cut].vertex, cuts[t.cut].vertex),
                                  std::max(cuts[s.cut].vertex, cuts[t.cut].vertex)});
      }
    }
  }
  for (const auto& pr : bad) {
    rep.crossing_pairs.push_back(pr);
    rep.problems.push_back("cuts from vertices " + std::to_string(pr.first) + " and " + std::to_string(pr.second) +
                           " intersect");
  }
  rep.passed = rep.problems.empty();
  return rep;
}

Overlay::CutCurve as_curve(const VertexCut& cut) {
  Overlay::CutCurve c;
  c.segments = cut.path.segments;
  c.loop_segment = cut.loop_segment;
  c.param = cut.param;
  return c;
}

}  // namespace qstar
