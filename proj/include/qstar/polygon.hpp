#pragma once

#include <vector>

#include "qstar/geometry.hpp"

namespace qstar {

using Polygon = std::vector<Vec2>;

/// Result of the exact simplicity test. On failure, `edge_i` and `edge_j`
/// name a pair of edges (edge k runs from vertex k to vertex k+1) that meet
/// where they should not.
struct SimplicityCertificate {
  bool simple = true;
  int edge_i = -1;
  int edge_j = -1;
  explicit operator bool() const { return simple; }
};

SimplicityCertificate certify_simple_polygon(const Polygon& poly);

double signed_area(const Polygon& poly);

/// Signed turn at each vertex (positive = left), in (-pi, pi].
std::vector<double> turn_angles(const Polygon& poly);

/// Interior angle at each vertex of a counterclockwise polygon, in [0, 2pi).
std::vector<double> interior_angles(const Polygon& poly);

}  // namespace qstar
