#include "qstar/serialize.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>

namespace qstar {

using nlohmann::json;

namespace {

json vec_json(const Vec2& p) { return json::array({p.x(), p.y()}); }

json vec_json(const Vec3& p) { return json::array({p.x(), p.y(), p.z()}); }

json placement_json(const Rigid2& T) {
  return json::array({json::array({T.rotation(0, 0), T.rotation(0, 1), T.translation.x()}),
                      json::array({T.rotation(1, 0), T.rotation(1, 1), T.translation.y()})});
}

}  // namespace

json point_json(const Polyhedron& P, const SurfacePoint& sp) {
  json j{{"locus", locus_name(sp.kind)}, {"index", sp.index}};
  if (sp.is_edge()) j["t"] = sp.t;
  if (sp.is_face()) j["bary"] = sp.bary;
  j["xyz"] = vec_json(position_3d(P, sp));
  return j;
}

json loop_json(const Polyhedron& P, const QuasigeodesicLoop& Q) {
  json corners = json::array();
  for (int i = 0; i < Q.size(); ++i) {
    json c = point_json(P, Q.corners[i]);
    c["left"] = Q.left[i];
    c["right"] = Q.right[i];
    corners.push_back(c);
  }
  json passages = json::array();
  for (const auto& p : Q.trace.passages)
    passages.push_back({{"branch", p.branch}, {"vertex", p.vertex}, {"left", p.left}, {"right", p.right}});
  return json{{"corners", corners},
              {"loop_point", Q.loop_point},
              {"beta", Q.beta()},
              {"q", Q.q},
              {"length", Q.length},
              {"turn", {{"left", Q.turn_left}, {"right", Q.turn_right}}},
              {"closure", Q.trace.traced ? json(Q.trace.closure) : json(nullptr)},
              {"policy", policy_name(Q.trace.policy)},
              {"passages", passages}};
}

json lemma_json(const LemmaReport& rep) {
  return json{{"passed", rep.passed},
              {"max_alpha_error", rep.max_alpha_error},
              {"crossing_pairs", rep.crossing_pairs},
              {"alpha_failures", rep.alpha_failures},
              {"problems", rep.problems}};
}

json unfolding_json(const Polyhedron& P, const StarUnfolding& R, bool timing) {
  const Unfolding& U = R.unfolding;
  json poly = json::array();
  for (const Vec2& p : U.polygon) poly.push_back(vec_json(p));
  json markers = json::array();
  for (const Marker& m : U.markers) {
    json j{{"kind", marker_name(m.kind)}, {"position", vec_json(m.position)}};
    if (m.vertex >= 0) j["vertex"] = m.vertex;
    markers.push_back(j);
  }
  json halves = json::array();
  for (const PlanarDevelopment* d : {&U.dev1, &U.dev2}) {
    json faces = json::array();
    for (const auto& pl : d->placements) faces.push_back({{"face_id", pl.face}, {"placement", placement_json(pl.placement)}});
    halves.push_back({{"side", side_name(d->side)}, {"faces", faces}});
  }
  json s{{"from", vec_json(U.s.from)},
         {"to", vec_json(U.s.to)},
         {"arc", {U.s.arc_from, U.s.arc_to}},
         {"from_point", point_json(P, U.s.from_point)},
         {"to_point", point_json(P, U.s.to_point)},
         {"supporting", U.s.supports}};
  json stats{{"n", U.stats.n},
             {"q", U.stats.q},
             {"m", U.stats.m},
             {"runtime_ms", timing ? json(U.stats.runtime_ms) : json(nullptr)}};
  return json{{"polygon", poly}, {"s", s}, {"markers", markers}, {"halves", halves}, {"stats", stats},
              {"area", U.area}};
}

std::string unfolding_svg(const Unfolding& U) {
  double x0 = U.polygon.front().x(), x1 = x0, y0 = U.polygon.front().y(), y1 = y0;
  for (const Vec2& p : U.polygon) {
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  }
  const double mx = 0.05 * (x1 - x0), my = 0.05 * (y1 - y0);
  const double w = x1 - x0 + 2 * mx, h = y1 - y0 + 2 * my;
  const double stroke = 0.003 * std::max(w, h);
  // SVG's y axis points down; flip so the drawing matches the plane.
  auto X = [&](double x) { return x; };
  auto Y = [&](double y) { return -y; };

  std::ostringstream os;
  os << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">)",
                    x0 - mx, -(y1 + my), w, h, w, h)
     << "\n";
  os << R"(  <path fill="#f2efe6" stroke="#222" stroke-linejoin="round" stroke-width=")" << stroke << R"(" d=")";
  for (size_t i = 0; i < U.polygon.size(); ++i)
    os << (i == 0 ? "M" : " L") << fmt::format("{} {}", X(U.polygon[i].x()), Y(U.polygon[i].y()));
  os << " Z\"/>\n";
  os << fmt::format(R"(  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#d03030" stroke-width="{}"/>)", X(U.s.from.x()),
                    Y(U.s.from.y()), X(U.s.to.x()), Y(U.s.to.y()), 3 * stroke)
     << "\n";
  for (const Marker& m : U.markers) {
    const char* color = "#333";
    switch (m.kind) {
      case MarkerKind::LoopPoint: color = "#d03030"; break;
      case MarkerKind::VertexImage: color = "#2060c0"; break;
      case MarkerKind::Projection: color = "#20a060"; break;
      case MarkerKind::LoopCorner: color = "#c08020"; break;
      case MarkerKind::TriangleApex: color = "#808080"; break;
    }
    os << fmt::format(R"(  <circle cx="{}" cy="{}" r="{}" fill="{}"><title>{}{}</title></circle>)", X(m.position.x()),
                      Y(m.position.y()), 2.5 * stroke, color, marker_name(m.kind),
                      m.vertex >= 0 ? fmt::format(" {}", m.vertex) : std::string())
       << "\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qstar
