#include "vtt/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace vtt {

double segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2) {
  const Vec3 d1 = p2 - p1;
  const Vec3 d2 = q2 - q1;
  const Vec3 r = p1 - q1;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  constexpr double kTiny = 1e-24;

  double s = 0.0;
  double t = 0.0;
  if (a <= kTiny && e <= kTiny) return r.norm();
  if (a <= kTiny) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kTiny) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 1e-14 * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p1 + s * d1) - (q1 + t * d2)).norm();
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double l2 = ab.squaredNorm();
  if (l2 <= 1e-24) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / l2, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double n2 = n.squaredNorm();
  if (n2 > 1e-24) {
    // Inside test on the projection via barycentric signs.
    const Vec3 proj = p - n * (n.dot(p - a) / n2);
    const double wa = n.dot((c - b).cross(proj - b));
    const double wb = n.dot((a - c).cross(proj - c));
    const double wc = n.dot((b - a).cross(proj - a));
    if (wa >= 0 && wb >= 0 && wc >= 0) return std::abs(n.dot(p - a)) / std::sqrt(n2);
  }
  return std::min({point_segment_distance(p, a, b), point_segment_distance(p, b, c),
                   point_segment_distance(p, c, a)});
}

double segment_triangle_distance(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b,
                                 const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double n2 = n.squaredNorm();
  if (n2 > 1e-24) {
    const double dp = n.dot(p - a);
    const double dq = n.dot(q - a);
    if ((dp <= 0 && dq >= 0) || (dp >= 0 && dq <= 0)) {
      const double denom = dp - dq;
      const Vec3 x = std::abs(denom) > 1e-300 ? Vec3(p + (q - p) * (dp / denom)) : p;
      const double wa = n.dot((c - b).cross(x - b));
      const double wb = n.dot((a - c).cross(x - c));
      const double wc = n.dot((b - a).cross(x - a));
      if (wa >= 0 && wb >= 0 && wc >= 0) return 0.0;
    }
  }
  return std::min({segment_distance(p, q, a, b), segment_distance(p, q, b, c),
                   segment_distance(p, q, c, a), point_triangle_distance(p, a, b, c),
                   point_triangle_distance(q, a, b, c)});
}

Hull2 convex_hull_2d(const std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    if (pts[i].x() != pts[j].x()) return pts[i].x() < pts[j].x();
    if (pts[i].y() != pts[j].y()) return pts[i].y() < pts[j].y();
    return i < j;
  });
  idx.erase(std::unique(idx.begin(), idx.end(), [&](int i, int j) { return pts[i] == pts[j]; }),
            idx.end());
  if (idx.size() < 3) throw GeometryError("convex hull needs at least 3 distinct points");

  // Andrew's monotone chain; collinear points are dropped.
  std::vector<int> hull(2 * idx.size());
  int k = 0;
  for (int i : idx) {
    while (k >= 2 && orient2d(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0) --k;
    hull[k++] = i;
  }
  for (int t = static_cast<int>(idx.size()) - 2, lower = k + 1; t >= 0; --t) {
    const int i = idx[t];
    while (k >= lower && orient2d(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw GeometryError("convex hull of collinear points");

  Hull2 out;
  out.index = hull;
  for (int i : hull) out.points.push_back(pts[i]);
  return out;
}

bool strictly_inside_convex(const std::vector<Vec2>& poly, const Vec2& p, double margin) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double len = (b - a).norm();
    if (len <= 0) return false;
    if (orient2d(a, b, p) / len <= margin) return false;
  }
  return true;
}

Eigen::Matrix3d axis_angle(const Vec3& k, double angle) {
  return Eigen::AngleAxisd(angle, k.normalized()).toRotationMatrix();
}

}  // namespace vtt
