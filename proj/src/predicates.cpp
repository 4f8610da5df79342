#include "qstar/predicates.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace qstar {
namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
constexpr double kCcwErrBoundA = (3.0 + 16.0 * kEpsilon) * kEpsilon;

// Error-free transformations (Knuth two-sum, FMA two-product).
inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  y = std::fma(a, b, -x);
}

// Nonoverlapping expansion with components in increasing magnitude.
struct Expansion {
  std::array<double, 16> c{};
  int n = 0;

  void grow(double b) {
    double q = b;
    for (int i = 0; i < n; ++i) {
      double sum, err;
      two_sum(q, c[i], sum, err);
      c[i] = err;
      q = sum;
    }
    c[n++] = q;
  }

  double most_significant() const {
    for (int i = n - 1; i >= 0; --i)
      if (c[i] != 0.0) return c[i];
    return 0.0;
  }
};

double orient2d_exact(const Vec2& a, const Vec2& b, const Vec2& c) {
  // (ax-cx)(by-cy) - (ay-cy)(bx-cx), expanded into exactly representable products.
  const double terms[6][2] = {
      {a.x(), b.y()}, {-a.x(), c.y()}, {-c.x(), b.y()}, {-a.y(), b.x()}, {a.y(), c.x()}, {c.y(), b.x()},
  };
  Expansion e;
  for (const auto& t : terms) {
    double hi, lo;
    two_product(t[0], t[1], hi, lo);
    e.grow(lo);
    e.grow(hi);
  }
  return e.most_significant();
}

}  // namespace

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det;
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det;
    detsum = -detleft - detright;
  } else {
    return orient2d_exact(a, b, c);
  }
  const double errbound = kCcwErrBoundA * detsum;
  if (det >= errbound || -det >= errbound) return det;
  return orient2d_exact(a, b, c);
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double o = orient2d(a, b, c);
  return (o > 0.0) - (o < 0.0);
}

bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  if (orientation(a, b, p) != 0) return false;
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
         p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  if (std::max(a.x(), b.x()) < std::min(c.x(), d.x()) || std::max(c.x(), d.x()) < std::min(a.x(), b.x()) ||
      std::max(a.y(), b.y()) < std::min(c.y(), d.y()) || std::max(c.y(), d.y()) < std::min(a.y(), b.y()))
    return false;
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(c, a, b)) return true;
  if (o2 == 0 && on_segment(d, a, b)) return true;
  if (o3 == 0 && on_segment(a, c, d)) return true;
  if (o4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

}  // namespace qstar
