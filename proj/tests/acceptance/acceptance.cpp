// Acceptance checks; prints one PASS/FAIL line per criterion.
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "qstar/errors.hpp"
#include "qstar/serialize.hpp"
#include "qstar/unfolding.hpp"

using namespace qstar;
using namespace qstar::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

struct NamedLoop {
  std::string name;
  const Polyhedron* P;
  QuasigeodesicLoop Q;
};

// First valid loop over a fixed list of seeds.
bool traced_loop(const Polyhedron& P, QuasigeodesicLoop& out) {
  for (int f = 0; f < std::min(P.num_faces(), 4); ++f)
    for (int k = 0; k < 8; ++k) {
      const SurfacePoint p = canonicalize(P, SurfacePoint::at_face(f, {0.3, 0.3, 0.4}));
      try {
        QuasigeodesicLoop Q = construct_loop(P, p, direction_at(P, p, 0.37 + 0.71 * k));
        if (validate_loop(P, Q).valid) {
          out = std::move(Q);
          return true;
        }
      } catch (const Error&) {
      }
    }
  return false;
}

std::string digest(const Polyhedron& P, const StarUnfolding& R) { return unfolding_json(P, R).dump(2) + "\n"; }

Outcome latin_cross(const Polyhedron& cube, std::string& json) {
  Outcome o;
  const auto t = Clock::now();
  const StarUnfolding R = star_unfold(cube, cube_bottom_loop(cube));
  const double secs = seconds_since(t);
  const Unfolding& U = R.unfolding;
  o.check(bool(U.certificate), "polygon not simple");
  o.check(std::abs(U.area - 6.0) <= 1e-8, fmt::format("area {:.12f}", U.area));
  // Six unit squares: grid corners and exactly six covered unit cells.
  bool grid = true;
  for (const Vec2& p : U.polygon)
    grid = grid && std::abs(p.x() - std::round(p.x())) < 1e-9 && std::abs(p.y() - std::round(p.y())) < 1e-9;
  o.check(grid, "corners off the unit grid");
  int cells = 0;
  double lo_x = 1e9, lo_y = 1e9, hi_x = -1e9, hi_y = -1e9;
  for (const Vec2& p : U.polygon) {
    lo_x = std::min(lo_x, p.x()), lo_y = std::min(lo_y, p.y());
    hi_x = std::max(hi_x, p.x()), hi_y = std::max(hi_y, p.y());
  }
  for (double x = std::floor(lo_x); x < hi_x; x += 1)
    for (double y = std::floor(lo_y); y < hi_y; y += 1) {
      const Vec2 c(x + 0.5, y + 0.5);
      int crossings = 0;
      const size_t n = U.polygon.size();
      for (size_t i = 0; i < n; ++i) {
        const Vec2 &a = U.polygon[i], &b = U.polygon[(i + 1) % n];
        if ((a.y() > c.y()) != (b.y() > c.y()) && c.x() < a.x() + (c.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y()))
          ++crossings;
      }
      cells += crossings % 2;
    }
  o.check(cells == 6, fmt::format("{} unit cells covered", cells));
  o.check(secs < 1.0, fmt::format("runtime {:.3f} s", secs));
  json = digest(cube, R);
  return o;
}

Outcome fig1(const Polyhedron& cube, std::string& json) {
  Outcome o;
  const auto Q = cube_geodesic_loop(cube);
  o.check(std::abs(Q.right[Q.loop_point] - 1.5 * kPi) <= 1e-7, fmt::format("R(x) {:.12f}", Q.right[Q.loop_point]));
  o.check(std::abs(Q.left[Q.loop_point] - 0.5 * kPi) <= 1e-7, fmt::format("L(x) {:.12f}", Q.left[Q.loop_point]));
  const StarUnfolding R = star_unfold(cube, Q);
  std::multiset<long> curv;
  for (int s = 0; s < 2; ++s) {
    const Half& H = R.halves->half(s == 0 ? Side::Left : Side::Right);
    curv.insert(std::lround(H.enclosed_curvature / (0.5 * kPi)));
    o.check(std::abs(R.gauss_bonnet[s] - kTwoPi) <= 1e-8, fmt::format("Gauss-Bonnet {:.12f}", R.gauss_bonnet[s]));
  }
  o.check(curv == std::multiset<long>{3, 5}, "half curvatures are not 3pi/2 and 5pi/2");
  o.check(R.support.accepted >= 0, "no supporting segment");
  o.check(bool(R.unfolding.certificate), "polygon not simple");
  o.check(std::abs(R.unfolding.area - 6.0) <= 1e-8, fmt::format("area {:.12f}", R.unfolding.area));
  json = digest(cube, R);
  return o;
}

Outcome fig3(const Polyhedron& cube, std::string& json) {
  Outcome o;
  const auto Q = cube_corner_loop(cube);
  const StarUnfolding R = star_unfold(cube, Q);
  std::map<int, int> ties;
  for (int s = 0; s < 2; ++s)
    for (const auto& c : R.cuts[s]) ties[c.vertex] = c.tie_count;
  o.check(ties.count(2) && ties[2] == 3, fmt::format("v2 ties {}", ties.count(2) ? ties[2] : -1));
  o.check(ties.count(4) && ties[4] == 3, fmt::format("v4 ties {}", ties.count(4) ? ties[4] : -1));
  int flat = -1;
  for (int s = 0; s < 2; ++s) {
    const Half& H = R.halves->half(s == 0 ? Side::Left : Side::Right);
    if (std::abs(H.enclosed_curvature - kTwoPi) < 1e-9) flat = s;
  }
  o.check(flat >= 0, "no half with curvature 2pi");
  if (flat >= 0) {
    o.check(R.convex_half[flat] && R.convex[flat].convex, "with-triangles development not convex");
    o.check(R.convex[flat].max_angle <= kPi + 1e-7, fmt::format("max angle {:.12f}", R.convex[flat].max_angle));
  }
  bool found = false;
  for (const auto& c : R.support.candidates) {
    const bool from_v5 = c.from.is_vertex() && c.from.index == 5;
    const bool to_v6_image = (position_3d(cube, c.to) - Vec3(0.5, 0.5, 1.0)).norm() < 1e-9;
    found = found || (from_v5 && to_v6_image && c.supports);
  }
  o.check(found, "v5 to v6' is not a supporting candidate");
  o.check(bool(R.unfolding.certificate), "polygon not simple");
  json = digest(cube, R);
  return o;
}

Outcome fig9(const Polyhedron& tetra, std::string& json) {
  Outcome o;
  const double deg = 180.0 / kPi;
  const auto Q = tetra_apex_loop(tetra);
  o.check(std::abs(Q.beta() * deg - 330.0) <= 0.1, fmt::format("beta {:.6f} deg", Q.beta() * deg));
  o.check(std::abs(tetra.curvature(0) * deg - 90.0) <= 1e-7, fmt::format("omega(v0) {:.9f}", tetra.curvature(0) * deg));
  const StarUnfolding R = star_unfold(tetra, Q);
  o.check(bool(R.unfolding.certificate), "polygon not simple");
  const int wide = Q.left[Q.loop_point] > kPi ? 0 : 1;
  const double total = R.angles[wide].loop_point_total * deg;
  o.check(std::abs(total - 330.0) <= 0.1, fmt::format("x-image angles sum {:.6f} deg", total));
  json = digest(tetra, R);
  return o;
}

Outcome lemmas(const std::vector<NamedLoop>& loops) {
  Outcome o;
  for (const auto& L : loops) {
    const HalfSplit S = split_halves(*L.P, L.Q);
    std::vector<VertexCut> cuts = compute_cuts(*L.P, L.Q, S.left);
    for (auto& c : compute_cuts(*L.P, L.Q, S.right)) cuts.push_back(std::move(c));
    const LemmaReport rep = verify_cut_lemmas(*L.P, cuts, L.Q);
    o.check(rep.max_alpha_error <= 1e-7, fmt::format("{}: |alpha - pi/2| {:.2e}", L.name, rep.max_alpha_error));
    o.check(rep.crossing_pairs.empty(), fmt::format("{}: {} crossing pairs", L.name, rep.crossing_pairs.size()));
    o.check(rep.passed, fmt::format("{}: lemma check failed", L.name));
  }
  return o;
}

Outcome oracle(const std::vector<NamedLoop>& loops) {
  Outcome o;
  for (const auto& L : loops) {
    const auto t = Clock::now();
    const HalfSplit S = split_halves(*L.P, L.Q);
    std::vector<VertexCut> cuts = compute_cuts(*L.P, L.Q, S.left);
    for (auto& c : compute_cuts(*L.P, L.Q, S.right)) cuts.push_back(std::move(c));
    const double tol = 1e-9 * L.P->diagonal();
    for (int k : {1, 4, 16, 64})
      for (const auto& c : cuts) {
        const double bound = oracle_distance(*L.P, c.vertex, L.Q, k);
        o.check(c.length <= bound + tol, fmt::format("{}: v{} exact above bound at k={}", L.name, c.vertex, k));
        if (k == 64)
          o.check(bound - c.length <= 0.01 * c.length,
                  fmt::format("{}: v{} gap {:.3f}% at k=64", L.name, c.vertex, 100 * (bound - c.length) / c.length));
      }
    const double secs = seconds_since(t);
    o.check(secs < 30.0, fmt::format("{}: {:.1f} s", L.name, secs));
  }
  return o;
}

Outcome random_hulls() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(8, 30);
  const auto t = Clock::now();
  int built = 0, overlaps = 0, unsupported = 0;
  for (int i = 0; i < 100; ++i) {
    const Polyhedron P = Polyhedron::build(random_hull(rng, count(rng)));
    const int f = std::uniform_int_distribution<int>(0, P.num_faces() - 1)(rng);
    const double a = 0.05 + 0.9 * u(rng), b = (1.0 - a) * (0.05 + 0.9 * u(rng));
    const SurfacePoint p = canonicalize(P, SurfacePoint::at_face(f, {a, b, 1.0 - a - b}));
    const double theta = kTwoPi * u(rng);
    QuasigeodesicLoop Q;
    try {
      Q = construct_loop(P, p, direction_at(P, p, theta));
    } catch (const Error&) {
      continue;
    }
    ++built;
    try {
      const StarUnfolding R = star_unfold(P, Q);
      const Unfolding& U = R.unfolding;
      unsupported += !U.s.supports;
      o.check(bool(U.certificate), fmt::format("hull {}: not simple", i));
      o.check(std::abs(U.area - P.surface_area()) <= 1e-6 * P.surface_area(), fmt::format("hull {}: area", i));
      for (int s = 0; s < 2; ++s)
        o.check(std::abs(R.gauss_bonnet[s] - kTwoPi) <= 1e-7, fmt::format("hull {}: Gauss-Bonnet", i));
    } catch (const OverlapDetected& e) {
      ++overlaps;
      o.check(false, fmt::format("hull {}: overlap", i));
    } catch (const Error& e) {
      o.check(false, fmt::format("hull {}: {}", i, e.what()));
    }
  }
  const double secs = seconds_since(t);
  o.check(overlaps == 0, fmt::format("{} overlaps", overlaps));
  o.check(secs < 600.0, fmt::format("runtime {:.1f} s", secs));
  o.notes.insert(o.notes.begin(), fmt::format("{} of 100 loops built, {} joined without a supporting arc, {:.2f} s", built, unsupported, secs));
  return o;
}

}  // namespace

int main() {
  const Polyhedron cube = load_fixture("cube.off");
  const Polyhedron tetra = load_fixture("right_tetra.off");
  int failures = 0;
  auto report = [&](int id, const std::string& title, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(e.what());
    }
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    fmt::print("{} {} {}{}\n", o.pass ? "PASS" : "FAIL", id, title, detail.empty() ? "" : "  (" + detail + ")");
    failures += !o.pass;
  };

  std::string runs[2][4];
  report(1, "latin cross", [&] { return latin_cross(cube, runs[0][0]); });
  report(2, "geodesic loop on the cube", [&] { return fig1(cube, runs[0][1]); });
  report(3, "corner loop on the cube", [&] { return fig3(cube, runs[0][2]); });
  report(4, "right tetrahedron apex loop", [&] { return fig9(tetra, runs[0][3]); });

  std::vector<NamedLoop> loops{{"cube/bottom", &cube, cube_bottom_loop(cube)},
                               {"cube/geodesic", &cube, cube_geodesic_loop(cube)},
                               {"cube/corner", &cube, cube_corner_loop(cube)},
                               {"cube/girth", &cube, cube_girth_loop(cube)},
                               {"right_tetra/apex", &tetra, tetra_apex_loop(tetra)}};
  std::vector<Polyhedron> others;
  const std::vector<std::string> names{"dodecahedron.off", "regular_tetra.obj"};
  others.reserve(names.size());
  for (const auto& n : names) others.push_back(load_fixture(n));
  for (size_t i = 0; i < names.size(); ++i) {
    QuasigeodesicLoop Q;
    if (traced_loop(others[i], Q)) loops.push_back({names[i], &others[i], std::move(Q)});
  }

  report(5, "cut lemmas", [&] { return lemmas(loops); });
  report(6, "oracle bounds", [&] { return oracle(loops); });
  report(7, "random hulls", [&] { return random_hulls(); });
  report(8, "determinism", [&] {
    Outcome o;
    latin_cross(cube, runs[1][0]);
    fig1(cube, runs[1][1]);
    fig3(cube, runs[1][2]);
    fig9(tetra, runs[1][3]);
    for (int i = 0; i < 4; ++i) {
      o.check(!runs[0][i].empty(), fmt::format("criterion {} produced no JSON", i + 1));
      o.check(runs[0][i] == runs[1][i], fmt::format("criterion {} JSON differs", i + 1));
    }
    return o;
  });
  fmt::print("fixtures in lemma and oracle checks: {}\n", loops.size());
  return failures == 0 ? 0 : 1;
}
