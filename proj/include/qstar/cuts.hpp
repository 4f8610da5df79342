#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qstar/overlay.hpp"

namespace qstar {

/// Shortest path from a vertex to the loop.
struct VertexCut {
  int vertex = -1;
  Side side = Side::Left;
  GeodesicPath path;  // from the vertex to the projection
  SurfacePoint projection;
  int loop_segment = 0;  // projection = point at `param` on this loop segment
  double param = 0.0;
  double arc = 0.0;  // arc position of the projection from the loop point
  double length = 0.0;
  /// Angles between the path and the loop at the projection, toward the
  /// loop's forward and backward directions.
  double alpha_forward = 0.0;
  double alpha_backward = 0.0;
  /// Equal-length shortest paths found (all endpoints).
  int tie_count = 1;
  /// Equal-length shortest paths ending at the chosen projection.
  int paths_to_projection = 1;
  /// The projection is the loop point or a corner where the loop bends.
  bool at_marked_corner = false;
  /// Number of windows processed.
  long windows = 0;
};

struct CutOptions {
  long max_windows = 4000000;
  /// Steiner subdivision used for the initial pruning bound.
  int bound_k = 4;
  bool parallel = true;
};

VertexCut shortest_path_to_loop(const Polyhedron& P, int v, const QuasigeodesicLoop& Q, const Half& half,
                                const CutOptions& opts = {});

/// One cut per interior vertex of the half, ordered by vertex index.
std::vector<VertexCut> compute_cuts(const Polyhedron& P, const QuasigeodesicLoop& Q, const Half& half,
                                    const CutOptions& opts = {});

/// Steiner-graph upper bound on the distance from v to the loop. Edges are
/// split into k parts and loop segments sampled at k + 1 points.
double oracle_distance(const Polyhedron& P, int v, const QuasigeodesicLoop& Q, int k);

struct LemmaReport {
  bool passed = true;
  double max_alpha_error = 0.0;  // over projections that are not marked corners
  std::vector<std::pair<int, int>> crossing_pairs;  // vertex indices
  std::vector<int> alpha_failures;                 // vertex indices
  std::vector<std::string> problems;
};

LemmaReport verify_cut_lemmas(const Polyhedron& P, const std::vector<VertexCut>& cuts, const QuasigeodesicLoop& Q);

/// Cut path in the form the overlay consumes.
Overlay::CutCurve as_curve(const VertexCut& cut);

}  // namespace qstar
