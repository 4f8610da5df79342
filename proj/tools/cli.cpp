#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qstar/errors.hpp"
#include "qstar/log.hpp"
#include "qstar/serialize.hpp"

namespace qstar::cli {

using nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  std::string input;
  std::string format = "auto";
  std::string face = "auto";
  std::vector<double> bary;
  std::string dir = "auto";
  std::string policy = "bisector";
  double max_length = 0.0;
  int oracle_k = 64;
  std::string json_path;
  std::string svg_path;
  std::optional<double> tol_angle;
  std::optional<double> tol_point;
  std::uint64_t rng_seed = 0;
  std::vector<int> loop_vertices;
  bool timing = false;
};

// Raised for bad option values; maps to a validation failure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const NotManifold*>(&e)) return "NotManifold";
  if (dynamic_cast<const NotConvex*>(&e)) return "NotConvex";
  if (dynamic_cast<const DegenerateFace*>(&e)) return "DegenerateFace";
  if (dynamic_cast<const IndexOutOfRange*>(&e)) return "IndexOutOfRange";
  if (dynamic_cast<const MismatchedLocus*>(&e)) return "MismatchedLocus";
  if (dynamic_cast<const NoIntersection*>(&e)) return "NoIntersection";
  if (dynamic_cast<const StartAtVertex*>(&e)) return "StartAtVertex";
  if (dynamic_cast<const LoopConstructionError*>(&e)) return "LoopConstructionError";
  if (dynamic_cast<const StalledTrace*>(&e)) return "StalledTrace";
  if (dynamic_cast<const NonAdjacentFaces*>(&e)) return "NonAdjacentFaces";
  if (dynamic_cast<const SubdivisionFailure*>(&e)) return "SubdivisionFailure";
  if (dynamic_cast<const PropagationFailure*>(&e)) return "PropagationFailure";
  if (dynamic_cast<const NonDiskResult*>(&e)) return "NonDiskResult";
  if (dynamic_cast<const OverlapDetected*>(&e)) return "OverlapDetected";
  if (dynamic_cast<const NoSupportingSegment*>(&e)) return "NoSupportingSegment";
  if (dynamic_cast<const LemmaViolation*>(&e)) return "LemmaViolation";
  if (dynamic_cast<const InvariantViolation*>(&e)) return "InvariantViolation";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const std::ios_base::failure*>(&e)) return "IoError";
  return "Error";
}

// Bad input or options; everything else that goes wrong inside the pipeline maps to exit 2.
bool is_validation_error(const Error& e) {
  return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const NotManifold*>(&e) ||
         dynamic_cast<const NotConvex*>(&e) || dynamic_cast<const DegenerateFace*>(&e) ||
         dynamic_cast<const IndexOutOfRange*>(&e) || dynamic_cast<const MismatchedLocus*>(&e) ||
         dynamic_cast<const NoIntersection*>(&e) || dynamic_cast<const StartAtVertex*>(&e) ||
         dynamic_cast<const LoopConstructionError*>(&e) || dynamic_cast<const ConfigError*>(&e);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write '" + path + "'");
  f << text;
  if (!f) throw std::ios_base::failure("cannot write '" + path + "'");
}

void write_json(const RunConfig& cfg, const json& j) {
  if (!cfg.json_path.empty()) write_file(cfg.json_path, j.dump(2) + "\n");
}

// Written next to the JSON output, or to qstar-witness.json without one.
void write_witness(const RunConfig& cfg, const char* kind, const std::string& message, const std::string& witness,
                   std::ostream& err) {
  const std::string path = cfg.json_path.empty() ? "qstar-witness.json" : cfg.json_path + ".witness.json";
  json w{{"error", kind}, {"message", message}, {"witness", nullptr}};
  if (!witness.empty()) {
    try {
      w["witness"] = json::parse(witness);
    } catch (const json::exception&) {
      w["witness"] = witness;
    }
  }
  try {
    write_file(path, w.dump(2) + "\n");
    fmt::print(err, "witness written to {}\n", path);
  } catch (const std::ios_base::failure& io) {
    fmt::print(err, "{}\n", io.what());
  }
}

Polyhedron load(const RunConfig& cfg) {
  std::optional<MeshFormat> fmt;
  if (cfg.format == "off") fmt = MeshFormat::OFF;
  if (cfg.format == "obj") fmt = MeshFormat::OBJ;
  LoadOptions opts;
  opts.tol_angle = cfg.tol_angle;
  opts.tol_point = cfg.tol_point;
  return load_polyhedron_file(cfg.input, fmt, opts);
}

// Seed point and direction from the options; "auto" picks the largest face,
// its centroid and a direction drawn from the RNG seed.
TangentDirection seed(const Polyhedron& P, const RunConfig& cfg) {
  int f = 0;
  if (cfg.face == "auto") {
    for (int g = 1; g < P.num_faces(); ++g)
      if (P.face_area(g) > P.face_area(f)) f = g;
  } else {
    try {
      size_t used = 0;
      f = std::stoi(cfg.face, &used);
      if (used != cfg.face.size()) throw std::invalid_argument(cfg.face);
    } catch (const std::logic_error&) {
      throw ConfigError("--face must be a face index or 'auto'");
    }
    if (f < 0 || f >= P.num_faces()) throw ConfigError(fmt::format("--face {} is out of range", f));
  }
  std::array<double, 3> b{1.0 / 3, 1.0 / 3, 1.0 / 3};
  if (!cfg.bary.empty()) {
    if (cfg.bary.size() != 3) throw ConfigError("--bary needs three values");
    const double s = cfg.bary[0] + cfg.bary[1] + cfg.bary[2];
    if (cfg.bary[0] <= 0 || cfg.bary[1] <= 0 || cfg.bary[2] <= 0 || std::abs(s - 1.0) > 1e-9)
      throw ConfigError("--bary values must be positive and sum to 1");
    b = {cfg.bary[0], cfg.bary[1], cfg.bary[2]};
  }
  double theta = 0.0;
  if (cfg.dir == "auto") {
    std::mt19937_64 rng(cfg.rng_seed);
    theta = static_cast<double>(rng() >> 11) * 0x1.0p-53 * kTwoPi;
  } else {
    try {
      size_t used = 0;
      theta = std::stod(cfg.dir, &used);
      if (used != cfg.dir.size()) throw std::invalid_argument(cfg.dir);
    } catch (const std::logic_error&) {
      throw ConfigError("--dir must be an angle in radians or 'auto'");
    }
  }
  const SurfacePoint p = canonicalize(P, SurfacePoint::at_face(f, b));
  return {p, f, Vec2(std::cos(theta), std::sin(theta))};
}

QuasigeodesicLoop make_loop(const Polyhedron& P, const RunConfig& cfg, std::ostream& out) {
  if (!cfg.loop_vertices.empty()) {
    std::vector<SurfacePoint> corners;
    for (int v : cfg.loop_vertices) {
      if (v < 0 || v >= P.num_vertices()) throw ConfigError(fmt::format("loop vertex {} is out of range", v));
      corners.push_back(SurfacePoint::at_vertex(v));
    }
    return loop_from_corners(P, corners);
  }
  const TangentDirection u = seed(P, cfg);
  fmt::print(out, "seed: face {} at ({:.6f}, {:.6f}, {:.6f}), direction {:.6f} rad\n", u.face,
             position_3d(P, u.at).x(), position_3d(P, u.at).y(), position_3d(P, u.at).z(),
             std::atan2(u.dir.y(), u.dir.x()));
  LoopOptions opts;
  opts.policy = cfg.policy == "leftmost" ? VertexPolicy::LeftmostAdmissible : VertexPolicy::Bisector;
  opts.max_length = cfg.max_length;
  return construct_loop(P, u.at, u, opts);
}

void print_loop(const Polyhedron& P, const QuasigeodesicLoop& Q, std::ostream& out) {
  fmt::print(out, "loop: {} corners, q = {}, length {:.9f}\n", Q.size(), Q.q, Q.length);
  const Vec3 x = position_3d(P, Q.corners[Q.loop_point]);
  fmt::print(out, "loop point ({:.6f}, {:.6f}, {:.6f}): L = {:.9f}, R = {:.9f}, beta = {:.6f} deg\n", x.x(), x.y(),
             x.z(), Q.left[Q.loop_point], Q.right[Q.loop_point], Q.beta() * 180.0 / kPi);
  fmt::print(out, "turn: left {:.9f}, right {:.9f}\n", Q.turn_left, Q.turn_right);
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const Polyhedron P = load(cfg);
  double total = 0.0;
  json omega = json::array();
  fmt::print(out, "{:>6}  {:>14}  {:>12}\n", "vertex", "omega (rad)", "omega (deg)");
  for (int v = 0; v < P.num_vertices(); ++v) {
    const double w = P.curvature(v);
    total += w;
    omega.push_back(w);
    fmt::print(out, "{:>6}  {:>14.10f}  {:>12.6f}\n", v, w, w * 180.0 / kPi);
  }
  fmt::print(out, "vertices {}, faces {}, total curvature {:.12f} (4pi {:+.3e})\n", P.num_vertices(), P.num_faces(),
             total, total - 4 * kPi);
  fmt::print(out, "valid convex polyhedron\n");
  write_json(cfg, json{{"valid", true},
                       {"vertices", P.num_vertices()},
                       {"faces", P.num_faces()},
                       {"surface_area", P.surface_area()},
                       {"total_curvature", total},
                       {"omega", omega}});
  return Success;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out) {
  const Polyhedron P = load(cfg);
  QuasigeodesicLoop Q;
  try {
    Q = make_loop(P, cfg, out);
  } catch (const NoIntersection& e) {
    fmt::print(out, "no intersection: branches traced {:.6f} without meeting\n", e.traced_length());
    write_json(cfg, json{{"error", "NoIntersection"}, {"message", e.what()}, {"traced_length", e.traced_length()}});
    return ValidationFailure;
  }
  print_loop(P, Q, out);
  const ValidationReport rep = validate_loop(P, Q);
  fmt::print(out, "quasigeodesic loop: {}\n", rep.valid ? "yes" : "no");
  for (const auto& p : rep.problems) fmt::print(out, "  {}\n", p);
  json j = loop_json(P, Q);
  j["valid"] = rep.valid;
  j["problems"] = rep.problems;
  write_json(cfg, j);
  return rep.valid ? Success : ValidationFailure;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  if (cfg.oracle_k < 1) throw ConfigError("--oracle-k must be at least 1");
  const Polyhedron P = load(cfg);
  const QuasigeodesicLoop Q = make_loop(P, cfg, out);
  const ValidationReport rep = validate_loop(P, Q);
  if (!rep.valid) throw LoopConstructionError("loop is not a quasigeodesic loop");
  const HalfSplit S = split_halves(P, Q);
  std::vector<VertexCut> cuts = compute_cuts(P, Q, S.left);
  for (auto& c : compute_cuts(P, Q, S.right)) cuts.push_back(std::move(c));
  std::sort(cuts.begin(), cuts.end(), [](const VertexCut& a, const VertexCut& b) { return a.vertex < b.vertex; });

  bool ok = true;
  json rows = json::array();
  fmt::print(out, "{:>6}  {:>5}  {:>16}  {:>16}  {:>10}\n", "vertex", "side", "exact", "oracle", "gap");
  for (const auto& c : cuts) {
    const double o = oracle_distance(P, c.vertex, Q, cfg.oracle_k);
    const double gap = (o - c.length) / c.length;
    const bool below = o < c.length - 1e-9 * P.diagonal();
    const bool loose = cfg.oracle_k >= 64 && gap > 0.01;
    ok = ok && !below && !loose;
    fmt::print(out, "{:>6}  {:>5}  {:>16.12f}  {:>16.12f}  {:>9.4f}%{}\n", c.vertex, side_name(c.side), c.length, o,
               100 * gap, below ? "  below exact" : loose ? "  above 1%" : "");
    rows.push_back({{"vertex", c.vertex}, {"side", side_name(c.side)}, {"exact", c.length}, {"oracle", o}, {"gap", gap}});
  }
  fmt::print(out, "k = {}: {}\n", cfg.oracle_k, ok ? "ok" : "FAILED");
  write_json(cfg, json{{"k", cfg.oracle_k}, {"ok", ok}, {"rows", rows}});
  return ok ? Success : ValidationFailure;
}

int cmd_unfold(const RunConfig& cfg, std::ostream& out) {
  const Polyhedron P = load(cfg);
  const QuasigeodesicLoop Q = make_loop(P, cfg, out);
  print_loop(P, Q, out);
  UnfoldOptions opts;
  const StarUnfolding R = star_unfold(P, Q, opts);
  const Unfolding& U = R.unfolding;
  for (int s = 0; s < 2; ++s) {
    const Half& H = R.halves->half(s == 0 ? Side::Left : Side::Right);
    fmt::print(out, "{} half: {} cuts, turn + curvature = {:.12f} (2pi {:+.2e}), development area {:.12f}\n",
               side_name(H.side), R.cuts[s].size(), R.gauss_bonnet[s], R.gauss_bonnet[s] - kTwoPi, R.bare[s].area);
    fmt::print(out, "  vertex-image angle error {:.2e}; loop-point angles sum {:.6f} deg\n", R.angles[s].max_error,
               R.angles[s].loop_point_total * 180.0 / kPi);
    if (R.convex_half[s])
      fmt::print(out, "  with curvature triangles: max angle {:.9f}, total turn {:.12f}, convex {}\n",
                 R.convex[s].max_angle, R.convex[s].total_turn, R.convex[s].convex ? "yes" : "no");
  }
  fmt::print(out, "cut lemmas: {} (max |alpha - pi/2| {:.2e})\n", R.lemmas.passed ? "pass" : "FAIL",
             R.lemmas.max_alpha_error);
  int supporting = 0;
  for (const auto& c : R.support.candidates) supporting += c.supports;
  fmt::print(out, "supporting segment: arc [{:.9f}, {:.9f}] ({} of {} candidates support){}\n", U.s.arc_from,
             U.s.arc_to, supporting, R.support.candidates.size(),
             U.s.supports ? "" : "; joined along a non-supporting arc, polygon certified simple");
  fmt::print(out, "polygon: {} vertices, area {:.12f} (surface {:.12f}), simple: {}\n", U.polygon.size(), U.area,
             P.surface_area(), U.certificate ? "yes" : "no");
  fmt::print(out, "stats: n = {}, q = {}, m = {}\n", U.stats.n, U.stats.q, U.stats.m);
  if (cfg.timing) fmt::print(out, "runtime {:.3f} ms\n", U.stats.runtime_ms);
  json j = unfolding_json(P, R, cfg.timing);
  j["loop"] = loop_json(P, Q);
  j["lemmas"] = lemma_json(R.lemmas);
  write_json(cfg, j);
  if (!cfg.svg_path.empty()) write_file(cfg.svg_path, unfolding_svg(U));
  return U.certificate ? Success : InvariantFailure;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool seeded) {
  sub->add_option("--input,-i", cfg.input, "Mesh file (OFF or OBJ)")->required();
  sub->add_option("--format", cfg.format, "off, obj or auto")->check(CLI::IsMember({"auto", "off", "obj"}));
  sub->add_option("--tol-angle", cfg.tol_angle, "Angle tolerance in radians");
  sub->add_option("--tol-point", cfg.tol_point, "Point tolerance, relative to the bounding-box diagonal");
  sub->add_option("--json", cfg.json_path, "Write a JSON report here");
  if (!seeded) return;
  sub->add_option("--face", cfg.face, "Seed face index or 'auto'");
  sub->add_option("--bary", cfg.bary, "Barycentric seed coordinates a,b,c")->delimiter(',')->expected(3);
  sub->add_option("--dir", cfg.dir, "Seed direction in radians in the seed face's frame, or 'auto'");
  sub->add_option("--policy", cfg.policy, "bisector or leftmost")->check(CLI::IsMember({"bisector", "leftmost"}));
  sub->add_option("--max-length", cfg.max_length, "Per-branch length bound (0: 50 x diagonal)");
  sub->add_option("--rng-seed", cfg.rng_seed, "Seed for an 'auto' direction");
  sub->add_option("--loop-vertices", cfg.loop_vertices, "Use the loop through these vertices instead of tracing")
      ->delimiter(',');
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Star unfolding of convex polyhedra along quasigeodesic loops", "qstar"};
  app.require_subcommand(1);
  auto* validate = app.add_subcommand("validate", "Check a mesh and print its vertex curvatures");
  auto* unfold = app.add_subcommand("unfold", "Build the star unfolding");
  auto* oracle = app.add_subcommand("oracle", "Compare exact cut lengths with a Steiner-graph bound");
  auto* trace = app.add_subcommand("trace", "Construct a loop without unfolding");
  add_common(validate, cfg, false);
  for (auto* sub : {unfold, oracle, trace}) add_common(sub, cfg, true);
  unfold->add_option("--svg", cfg.svg_path, "Write an SVG drawing here");
  unfold->add_flag("--timing", cfg.timing, "Report the runtime (also in the JSON output)");
  oracle->add_option("--oracle-k", cfg.oracle_k, "Edge subdivisions of the oracle graph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Success;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return ValidationFailure;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    if (cfg.command == "validate") return cmd_validate(cfg, out);
    if (cfg.command == "trace") return cmd_trace(cfg, out);
    if (cfg.command == "oracle") return cmd_oracle(cfg, out);
    return cmd_unfold(cfg, out);
  } catch (const std::ios_base::failure& e) {
    fmt::print(err, "{}: {}\n", error_kind(e), e.what());
    return IoFailure;
  } catch (const Error& e) {
    fmt::print(err, "{}: {}\n", error_kind(e), e.what());
    if (const auto* nc = dynamic_cast<const NotConvex*>(&e))
      fmt::print(err, "  vertex {} lies {:.3e} above the plane of face {}\n", nc->vertex(), nc->distance(), nc->face());
    if (is_validation_error(e)) return ValidationFailure;
    const auto* iv = dynamic_cast<const InvariantViolation*>(&e);
    write_witness(cfg, error_kind(e), e.what(), iv ? iv->witness() : std::string(), err);
    return InvariantFailure;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    write_witness(cfg, "Error", e.what(), std::string(), err);
    log().debug("command '{}' failed", cfg.command);
    return InvariantFailure;
  }
}

}  // namespace qstar::cli
