#include "qstar/polyhedron.hpp"

#include <Eigen/Geometry>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "qstar/errors.hpp"

namespace qstar {

Tolerances Tolerances::for_diagonal(double diag) {
  Tolerances t;
  t.planar = 1e-9 * diag;
  t.point = 1e-12 * diag;
  t.angle = 1e-9;
  t.area = 1e-12 * diag * diag;
  return t;
}

namespace {

std::string fmt_index(const char* what, int i) { return std::string(what) + " " + std::to_string(i); }

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

}  // namespace

Polyhedron Polyhedron::build(const PolygonSoup& soup, const LoadOptions& opts) {
  Polyhedron P;
  P.vertices_ = soup.vertices;
  const int nv = static_cast<int>(P.vertices_.size());
  if (nv < 4) throw ParseError("mesh has fewer than 4 vertices");
  for (const auto& v : P.vertices_)
    if (!v.allFinite()) throw ParseError("non-finite vertex coordinate");

  Vec3 lo = P.vertices_[0], hi = P.vertices_[0];
  for (const auto& v : P.vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  P.diagonal_ = (hi - lo).norm();
  P.tol_ = Tolerances::for_diagonal(P.diagonal_);
  if (opts.tol_angle) P.tol_.angle = *opts.tol_angle;
  if (opts.tol_point) P.tol_.point = *opts.tol_point * P.diagonal_;

  // Fan triangulation from the lowest-index vertex.
  std::vector<std::pair<int, int>> flat_edges;
  for (int pi = 0; pi < static_cast<int>(soup.polygons.size()); ++pi) {
    const auto& poly = soup.polygons[pi];
    const int k = static_cast<int>(poly.size());
    if (k < 3) throw ParseError(fmt_index("polygon with fewer than 3 vertices:", pi));
    for (int i : poly)
      if (i < 0 || i >= nv) throw ParseError(fmt_index("vertex index out of range in polygon", pi));
    const int start = static_cast<int>(std::min_element(poly.begin(), poly.end()) - poly.begin());
    std::vector<int> r(k);
    for (int i = 0; i < k; ++i) r[i] = poly[(start + i) % k];
    for (int i = 1; i + 1 < k; ++i) {
      P.faces_.push_back({r[0], r[i], r[i + 1]});
      P.source_face_.push_back(pi);
    }
    for (int i = 2; i + 1 < k; ++i) flat_edges.emplace_back(std::min(r[0], r[i]), std::max(r[0], r[i]));
  }
  for (const auto& f : P.faces_)
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) throw DegenerateFace("face repeats a vertex");

  // Orient outward.
  double vol = 0.0;
  for (const auto& f : P.faces_) vol += P.vertices_[f[0]].dot(P.vertices_[f[1]].cross(P.vertices_[f[2]]));
  if (vol < 0.0)
    for (auto& f : P.faces_) std::swap(f[1], f[2]);

  // Twins.
  const int nh = P.num_halfedges();
  P.twin_.assign(nh, -1);
  std::map<std::pair<int, int>, int> directed;
  for (int h = 0; h < nh; ++h) {
    auto key = std::make_pair(P.origin(h), P.dest(h));
    if (!directed.emplace(key, h).second)
      throw NotManifold("directed edge " + std::to_string(key.first) + "->" + std::to_string(key.second) +
                        " appears twice (non-manifold or inconsistent orientation)");
  }
  for (int h = 0; h < nh; ++h) {
    auto it = directed.find({P.dest(h), P.origin(h)});
    if (it == directed.end())
      throw NotManifold("edge " + std::to_string(P.origin(h)) + "-" + std::to_string(P.dest(h)) +
                        " has only one incident face");
    P.twin_[h] = it->second;
  }
  P.flat_.assign(nh, false);
  for (const auto& [a, b] : flat_edges) {
    auto it = directed.find({a, b});
    if (it != directed.end()) {
      const int h = it->second;
      P.flat_[h] = true;
      P.flat_[P.twin_[h]] = true;
    }
  }

  // Vertex fans must be single cycles.
  std::vector<int> out_count(nv, 0), first_out(nv, -1);
  for (int h = 0; h < nh; ++h) {
    const int v = P.origin(h);
    ++out_count[v];
    if (first_out[v] < 0) first_out[v] = h;
  }
  P.fans_.assign(nv, {});
  for (int v = 0; v < nv; ++v) {
    if (first_out[v] < 0) throw NotManifold(fmt_index("isolated vertex", v));
    int h = first_out[v];
    do {
      P.fans_[v].push_back(h);
      h = P.twin_[prev(h)];
    } while (h != first_out[v] && static_cast<int>(P.fans_[v].size()) <= out_count[v]);
    if (static_cast<int>(P.fans_[v].size()) != out_count[v])
      throw NotManifold(fmt_index("faces around vertex do not form a single fan at vertex", v));
  }
  const int euler = nv - P.num_edges() + P.num_faces();
  if (euler != 2) throw NotManifold("Euler characteristic is " + std::to_string(euler) + ", expected 2");

  // Frames, angles, areas.
  const int nf = P.num_faces();
  P.frame_.resize(nf);
  P.angle_.resize(nf);
  P.area_.resize(nf);
  P.normal_.resize(nf);
  P.axis_x_.resize(nf);
  P.axis_y_.resize(nf);
  for (int f = 0; f < nf; ++f) {
    const Vec3& a = P.vertices_[P.faces_[f][0]];
    const Vec3& b = P.vertices_[P.faces_[f][1]];
    const Vec3& c = P.vertices_[P.faces_[f][2]];
    const Vec3 n = (b - a).cross(c - a);
    const double area = 0.5 * n.norm();
    if (!(area > P.tol_.area)) throw DegenerateFace(fmt_index("face has near-zero area:", f));
    P.area_[f] = area;
    P.surface_area_ += area;
    P.normal_[f] = n.normalized();
    const Vec3 ex = (b - a).normalized();
    const Vec3 ey = P.normal_[f].cross(ex);
    P.axis_x_[f] = ex;
    P.axis_y_[f] = ey;
    P.frame_[f][0] = Vec2::Zero();
    P.frame_[f][1] = Vec2((b - a).norm(), 0.0);
    P.frame_[f][2] = Vec2((c - a).dot(ex), (c - a).dot(ey));
    P.angle_[f][0] = angle_between(b - a, c - a);
    P.angle_[f][1] = angle_between(c - b, a - b);
    P.angle_[f][2] = angle_between(a - c, b - c);
  }

  // Convexity: every vertex on or below every face plane.
  double worst = -1.0;
  int worst_v = -1, worst_f = -1;
  for (int f = 0; f < nf; ++f) {
    const Vec3& a = P.vertices_[P.faces_[f][0]];
    for (int v = 0; v < nv; ++v) {
      const double d = P.normal_[f].dot(P.vertices_[v] - a);
      if (d > worst) {
        worst = d;
        worst_v = v;
        worst_f = f;
      }
    }
  }
  if (worst > P.tol_.planar) {
    std::ostringstream os;
    os << "vertex " << worst_v << " lies " << worst << " above the plane of face " << worst_f;
    throw NotConvex(os.str(), worst_v, worst_f, worst);
  }

  P.edge_transform_.resize(nh);
  for (int h = 0; h < nh; ++h) {
    const int t = P.twin_[h];
    P.edge_transform_[h] = Rigid2::aligning(P.head(t), P.tail(t), P.tail(h), P.head(h));
  }

  P.fan_offset_.assign(nh, 0.0);
  P.curvature_.assign(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    double acc = 0.0;
    for (int h : P.fans_[v]) {
      P.fan_offset_[h] = acc;
      acc += P.corner_angle(h);
    }
    P.curvature_[v] = kTwoPi - acc;
  }
  const double total = std::accumulate(P.curvature_.begin(), P.curvature_.end(), 0.0);
  if (std::abs(total - 2.0 * kTwoPi) > 1e-9 * std::max(1, nv))
    throw NotManifold("total curvature " + std::to_string(total) + " differs from 4pi");
  return P;
}

int Polyhedron::find_halfedge(int a, int b) const {
  if (a < 0 || a >= num_vertices()) return -1;
  for (int h : fans_[a])
    if (dest(h) == b) return h;
  return -1;
}

int Polyhedron::corner_index(int f, int v) const {
  for (int k = 0; k < 3; ++k)
    if (faces_[f][k] == v) return k;
  return -1;
}

Vec3 Polyhedron::to_3d(int f, const Vec2& p) const {
  return vertices_[faces_[f][0]] + p.x() * axis_x_[f] + p.y() * axis_y_[f];
}

double vertex_curvature(const Polyhedron& P, int v) {
  if (v < 0 || v >= P.num_vertices()) throw IndexOutOfRange(fmt_index("vertex index out of range:", v));
  return P.curvature(v);
}

// ---------------------------------------------------------------------------
// File formats

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool next_content_line(std::istream& in, std::string& out, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      out = line;
      return true;
    }
  }
  return false;
}

[[noreturn]] void parse_fail(int lineno, const std::string& msg) {
  throw ParseError("line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

PolygonSoup read_off(std::istream& in) {
  PolygonSoup soup;
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) throw ParseError("empty OFF stream");
  std::istringstream head(line);
  std::string magic;
  head >> magic;
  if (magic != "OFF") parse_fail(lineno, "expected 'OFF' header");
  long nv = -1, nf = -1, ne = 0;
  if (!(head >> nv)) {
    if (!next_content_line(in, line, lineno)) throw ParseError("missing OFF counts");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) parse_fail(lineno, "malformed counts");
    counts >> ne;
  } else if (!(head >> nf)) {
    parse_fail(lineno, "malformed counts");
  }
  if (nv < 0 || nf < 0) parse_fail(lineno, "negative counts");
  soup.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line, lineno)) throw ParseError("unexpected end of file in vertex list");
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x >> y >> z)) parse_fail(lineno, "malformed vertex");
    soup.vertices.emplace_back(x, y, z);
  }
  soup.polygons.reserve(nf);
  for (long i = 0; i < nf; ++i) {
    if (!next_content_line(in, line, lineno)) throw ParseError("unexpected end of file in face list");
    std::istringstream ls(line);
    long k;
    if (!(ls >> k) || k < 3) parse_fail(lineno, "malformed face");
    std::vector<int> poly(k);
    for (long j = 0; j < k; ++j) {
      long idx;
      if (!(ls >> idx)) parse_fail(lineno, "face has fewer indices than declared");
      if (idx < 0 || idx >= nv) parse_fail(lineno, "face index out of range");
      poly[j] = static_cast<int>(idx);
    }
    soup.polygons.push_back(std::move(poly));
  }
  return soup;
}

PolygonSoup read_obj(std::istream& in) {
  PolygonSoup soup;
  std::string line;
  int lineno = 0;
  std::vector<std::pair<std::vector<long>, int>> raw;
  while (next_content_line(in, line, lineno)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) parse_fail(lineno, "malformed vertex");
      soup.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<long> idx;
      std::string tok;
      while (ls >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        try {
          size_t used = 0;
          long i = std::stol(head, &used);
          if (used != head.size() || i == 0) parse_fail(lineno, "malformed face index '" + tok + "'");
          idx.push_back(i);
        } catch (const std::logic_error&) {
          parse_fail(lineno, "malformed face index '" + tok + "'");
        }
      }
      if (idx.size() < 3) parse_fail(lineno, "face with fewer than 3 vertices");
      raw.emplace_back(std::move(idx), lineno);
    }
  }
  const long nv = static_cast<long>(soup.vertices.size());
  for (const auto& [idx, ln] : raw) {
    std::vector<int> poly;
    for (long i : idx) {
      const long r = i > 0 ? i - 1 : nv + i;
      if (r < 0 || r >= nv) parse_fail(ln, "face index out of range");
      poly.push_back(static_cast<int>(r));
    }
    soup.polygons.push_back(std::move(poly));
  }
  if (soup.vertices.empty()) throw ParseError("OBJ stream has no vertices");
  return soup;
}

void write_off(std::ostream& out, const PolygonSoup& soup) {
  out << "OFF\n" << soup.vertices.size() << ' ' << soup.polygons.size() << " 0\n";
  out.precision(17);
  for (const auto& v : soup.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& p : soup.polygons) {
    out << p.size();
    for (int i : p) out << ' ' << i;
    out << '\n';
  }
}

Polyhedron load_polyhedron(std::istream& in, MeshFormat format, const LoadOptions& opts) {
  PolygonSoup soup = format == MeshFormat::OFF ? read_off(in) : read_obj(in);
  return Polyhedron::build(soup, opts);
}

Polyhedron load_polyhedron_file(const std::string& path, std::optional<MeshFormat> format, const LoadOptions& opts) {
  if (!format) {
    const auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "off")
      format = MeshFormat::OFF;
    else if (ext == "obj")
      format = MeshFormat::OBJ;
    else
      throw ParseError("cannot infer mesh format from '" + path + "'");
  }
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  return load_polyhedron(in, *format, opts);
}

}  // namespace qstar
