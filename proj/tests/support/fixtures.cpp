#include "fixtures.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace qstar::testing {

std::string data_path(const std::string& name) { return std::string(QSTAR_TEST_DATA) + "/" + name; }

Polyhedron load_fixture(const std::string& name) { return load_polyhedron_file(data_path(name)); }

PolygonSoup random_hull(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> axis(0.5, 1.5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Vec3 radii(axis(rng), axis(rng), axis(rng));
  PolygonSoup soup;
  while (static_cast<int>(soup.vertices.size()) < n) {
    Vec3 g(gauss(rng), gauss(rng), gauss(rng));
    if (g.norm() < 1e-3) continue;
    soup.vertices.push_back(g.normalized().cwiseProduct(radii));
  }
  // Brute-force hull: a triple is a face when all other points lie strictly on one side.
  const auto& V = soup.vertices;
  const double tol = 1e-12;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const Vec3 nrm = (V[j] - V[i]).cross(V[k] - V[i]);
        int pos = 0, neg = 0;
        for (int m = 0; m < n; ++m) {
          if (m == i || m == j || m == k) continue;
          const double d = nrm.dot(V[m] - V[i]);
          if (d > tol) ++pos;
          else if (d < -tol) ++neg;
          else throw std::runtime_error("degenerate random hull (coplanar points)");
        }
        if (pos == 0) soup.polygons.push_back({i, j, k});
        else if (neg == 0) soup.polygons.push_back({i, k, j});
      }
  return soup;
}

RandomInstance random_instance(std::uint64_t seed, int i) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(8, 30);
  RandomInstance r;
  for (int k = 0; k <= i; ++k) {
    r.soup = random_hull(rng, count(rng));
    const Polyhedron P = Polyhedron::build(r.soup);
    r.face = std::uniform_int_distribution<int>(0, P.num_faces() - 1)(rng);
    const double a = 0.05 + 0.9 * u(rng), b = (1.0 - a) * (0.05 + 0.9 * u(rng));
    r.bary = {a, b, 1.0 - a - b};
    r.theta = kTwoPi * u(rng);
  }
  return r;
}

SurfacePoint point_at(const Polyhedron& P, const Vec3& x) {
  int best = -1;
  double best_d = 1e300;
  Vec2 best_p;
  for (int f = 0; f < P.num_faces(); ++f) {
    const Vec3 o = P.vertex(P.face(f)[0]);
    const Vec3 ex = (P.vertex(P.face(f)[1]) - o).normalized();
    const Vec3 ey = P.normal(f).cross(ex);
    const Vec2 p((x - o).dot(ex), (x - o).dot(ey));
    // Distance to the triangle, measured in 3D.
    const Vec2 a = P.corner(f, 0), b = P.corner(f, 1), c = P.corner(f, 2);
    const double area = cross(b - a, c - a);
    const double l0 = cross(b - p, c - p) / area, l1 = cross(c - p, a - p) / area, l2 = cross(a - p, b - p) / area;
    const double outside = std::max({0.0, -l0, -l1, -l2});
    const double d = std::abs(P.normal(f).dot(x - o)) + outside;
    if (d < best_d) {
      best_d = d;
      best = f;
      best_p = p;
    }
  }
  return locate(P, best, best_p);
}

TangentDirection tangent_at(const Polyhedron& P, const SurfacePoint& sp, const Vec3& d) {
  for (int f : incident_faces(P, sp)) {
    const Vec3 o = P.to_3d(f, Vec2(0, 0));
    const Vec3 ex = P.to_3d(f, Vec2(1, 0)) - o, ey = P.to_3d(f, Vec2(0, 1)) - o;
    if (std::abs(P.normal(f).dot(d)) > 1e-9 * d.norm()) continue;
    const Vec2 dir = Vec2(d.dot(ex), d.dot(ey)).normalized();
    const Vec2 q = position_in_face(P, sp, f) + 1e-6 * P.diagonal() * dir;
    const Vec2 a = P.corner(f, 0), b = P.corner(f, 1), c = P.corner(f, 2);
    const double area = cross(b - a, c - a);
    const double tiny = -1e-12;
    if (cross(b - q, c - q) / area >= tiny && cross(c - q, a - q) / area >= tiny && cross(a - q, b - q) / area >= tiny)
      return {sp, f, dir};
  }
  throw std::runtime_error("direction does not point into any incident face");
}

Vec3 direction_3d(const Polyhedron& P, const TangentDirection& td) {
  return P.to_3d(td.face, td.dir) - P.to_3d(td.face, Vec2(0, 0));
}

QuasigeodesicLoop vertex_loop(const Polyhedron& P, std::initializer_list<int> ids) {
  std::vector<SurfacePoint> corners;
  for (int v : ids) corners.push_back(SurfacePoint::at_vertex(v));
  return loop_from_corners(P, corners);
}

QuasigeodesicLoop cube_bottom_loop(const Polyhedron& P) { return vertex_loop(P, {0, 1, 2, 3}); }

QuasigeodesicLoop cube_corner_loop(const Polyhedron& P) { return vertex_loop(P, {0, 5, 7}); }

QuasigeodesicLoop cube_geodesic_loop(const Polyhedron& P) {
  const SurfacePoint p = canonicalize(P, SurfacePoint::at_face(0, {0.1, 0.5, 0.4}));
  return construct_loop(P, p, {p, 0, Vec2(std::cos(0.85), std::sin(0.85))});
}

QuasigeodesicLoop cube_girth_loop(const Polyhedron& P) {
  const SurfacePoint g = point_at(P, Vec3(0.5, 0.5, 0.0));
  return construct_loop(P, g, tangent_at(P, g, Vec3(1, 0, 0)));
}

QuasigeodesicLoop tetra_apex_loop(const Polyhedron& P) {
  int f = -1;
  for (int g = 0; g < P.num_faces() && f < 0; ++g)
    if (P.corner_index(g, 0) >= 0 && P.corner_index(g, 1) >= 0 && P.corner_index(g, 3) >= 0) f = g;
  if (f < 0) throw std::runtime_error("tetrahedron face 0 1 3 not found");
  const SurfacePoint p = point_at(P, 0.05 * P.vertex(0) + 0.05 * P.vertex(1) + 0.9 * P.vertex(3));
  return construct_loop(P, p, {p, f, Vec2(1, 0)});
}

namespace {

double point_segment_3d(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 e = b - a;
  const double t = e.squaredNorm() > 0 ? std::clamp((p - a).dot(e) / e.squaredNorm(), 0.0, 1.0) : 0.0;
  return (p - (a + t * e)).norm();
}

}  // namespace

double euclidean_distance_to_loop(const Polyhedron& P, int v, const QuasigeodesicLoop& Q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : Q.segments)
    best = std::min(best, point_segment_3d(P.vertex(v), P.to_3d(s.face, s.a), P.to_3d(s.face, s.b)));
  return best;
}

double steiner_distance_to_loop(const Polyhedron& P, int v, const QuasigeodesicLoop& Q, int k) {
  // Nodes per face, in 3D; two nodes of one face are joined by a straight segment.
  std::vector<Vec3> pts;
  std::vector<char> target;
  std::vector<std::vector<int>> face_nodes(P.num_faces());
  std::map<int, int> vertex_node;
  auto vnode = [&](int u) {
    auto it = vertex_node.find(u);
    if (it != vertex_node.end()) return it->second;
    pts.push_back(P.vertex(u));
    target.push_back(0);
    return vertex_node[u] = static_cast<int>(pts.size()) - 1;
  };
  std::vector<std::vector<int>> edge_nodes(P.num_halfedges());
  for (int h = 0; h < P.num_halfedges(); ++h) {
    if (P.canonical(h) != h) continue;
    const Vec3 a = P.vertex(P.origin(h)), b = P.vertex(P.dest(h));
    for (int i = 1; i < k; ++i) {
      pts.push_back(a + (b - a) * (double(i) / k));
      target.push_back(0);
      edge_nodes[h].push_back(static_cast<int>(pts.size()) - 1);
    }
  }
  for (int f = 0; f < P.num_faces(); ++f)
    for (int c = 0; c < 3; ++c) {
      const int h = Polyhedron::halfedge(f, c);
      face_nodes[f].push_back(vnode(P.origin(h)));
      for (int n : edge_nodes[P.canonical(h)]) face_nodes[f].push_back(n);
    }
  for (const auto& s : Q.segments) {
    std::vector<int> faces{s.face};
    int h;
    if (is_edge_lying(P, s, &h)) faces.push_back(Polyhedron::face_of(P.twin(h)));
    const Vec3 a = P.to_3d(s.face, s.a), b = P.to_3d(s.face, s.b);
    for (int i = 0; i <= k; ++i) {
      pts.push_back(a + (b - a) * (double(i) / k));
      target.push_back(1);
      for (int f : faces) face_nodes[f].push_back(static_cast<int>(pts.size()) - 1);
    }
  }
  std::vector<std::vector<int>> node_faces(pts.size());
  for (int f = 0; f < P.num_faces(); ++f)
    for (int n : face_nodes[f]) node_faces[n].push_back(f);

  std::vector<double> dist(pts.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const int src = vnode(v);
  dist.resize(pts.size(), std::numeric_limits<double>::infinity());
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    const auto [d, n] = pq.top();
    pq.pop();
    if (d > dist[n]) continue;
    if (target[n]) return d;
    for (int f : node_faces[n])
      for (int m : face_nodes[f]) {
        const double nd = d + (pts[m] - pts[n]).norm();
        if (nd < dist[m]) {
          dist[m] = nd;
          pq.emplace(nd, m);
        }
      }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace qstar::testing
