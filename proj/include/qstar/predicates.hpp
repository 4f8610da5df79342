#pragma once

#include "qstar/geometry.hpp"

namespace qstar {

/// Orientation of the triangle (a, b, c): positive when counterclockwise,
/// negative when clockwise, zero when collinear. The sign is exact for all
/// finite double inputs: a floating-point filter answers most queries and
/// an expansion-arithmetic evaluation resolves the rest.
double orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

/// Exact sign in {-1, 0, 1} of orient2d.
int orientation(const Vec2& a, const Vec2& b, const Vec2& c);

/// True iff the closed segments [a, b] and [c, d] share at least one point.
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// True iff `p` lies on the closed segment [a, b] (exact).
bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b);

}  // namespace qstar
