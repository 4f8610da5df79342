#include "qstar/polygon.hpp"

#include <algorithm>
#include <numeric>

#include "qstar/errors.hpp"
#include "qstar/predicates.hpp"

namespace qstar {

SimplicityCertificate certify_simple_polygon(const Polygon& poly) {
  const int n = static_cast<int>(poly.size());
  if (n < 3) throw Error("a polygon needs at least 3 vertices");
  SimplicityCertificate cert;
  auto fail = [&](int i, int j) {
    cert.simple = false;
    cert.edge_i = std::min(i, j);
    cert.edge_j = std::max(i, j);
  };
  for (int i = 0; i < n; ++i)
    if (poly[i] == poly[(i + 1) % n]) {
      fail(i, (i + 1) % n);
      return cert;
    }

  // Sweep over x-extents; only edges whose extents overlap are compared.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto lo = [&](int e) { return std::min(poly[e].x(), poly[(e + 1) % n].x()); };
  auto hi = [&](int e) { return std::max(poly[e].x(), poly[(e + 1) % n].x()); };
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lo(a) < lo(b) || (lo(a) == lo(b) && a < b); });
  for (int oi = 0; oi < n; ++oi) {
    const int i = order[oi];
    const Vec2 &a = poly[i], &b = poly[(i + 1) % n];
    for (int oj = oi + 1; oj < n && lo(order[oj]) <= hi(i); ++oj) {
      const int j = order[oj];
      const Vec2 &c = poly[j], &d = poly[(j + 1) % n];
      if ((i + 1) % n == j || (j + 1) % n == i) {
        // Adjacent edges share one vertex; they fail only if they fold back onto each other.
        const bool i_first = (i + 1) % n == j;
        const Vec2& shared = i_first ? b : a;
        const Vec2& p = i_first ? a : b;
        const Vec2& q = i_first ? d : c;
        if (orientation(shared, p, q) == 0 && (p - shared).dot(q - shared) > 0.0) {
          fail(i, j);
          return cert;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) {
        fail(i, j);
        return cert;
      }
    }
  }
  return cert;
}

double signed_area(const Polygon& poly) {
  double s = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * s;
}

std::vector<double> turn_angles(const Polygon& poly) {
  const size_t n = poly.size();
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    const Vec2& prev = poly[(i + n - 1) % n];
    const Vec2& next = poly[(i + 1) % n];
    out[i] = signed_angle(poly[i] - prev, next - poly[i]);
  }
  return out;
}

std::vector<double> interior_angles(const Polygon& poly) {
  auto t = turn_angles(poly);
  for (double& x : t) x = kPi - x;
  return t;
}

}  // namespace qstar
