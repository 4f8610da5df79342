#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qstar/unfolding.hpp"

namespace qstar {

nlohmann::json point_json(const Polyhedron& P, const SurfacePoint& sp);

/// Corners, side angles, turns and closure data of a loop.
nlohmann::json loop_json(const Polyhedron& P, const QuasigeodesicLoop& Q);

nlohmann::json lemma_json(const LemmaReport& rep);

/// {polygon, s, markers, halves, stats}. `runtime_ms` is null unless
/// `timing` is set, so that repeated runs give identical output.
nlohmann::json unfolding_json(const Polyhedron& P, const StarUnfolding& R, bool timing = false);

/// Boundary path, marker circles and the joining segment, one user unit
/// per length unit, with a 5% margin around the polygon.
std::string unfolding_svg(const Unfolding& U);

}  // namespace qstar
