// Low-level 3D and planar geometry used across the planners.
#pragma once

#include "vtt/truss.hpp"

#include <vector>

namespace vtt {

// Minimum distance between segments [p1,p2] and [q1,q2]. Zero-length
// segments are treated as points.
double segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2);

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Minimum distance between the segment [p,q] and the filled triangle abc.
double segment_triangle_distance(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b,
                                 const Vec3& c);

// Convex hull polygon with vertex indices into the input, counterclockwise.
struct Hull2 {
  std::vector<int> index;
  std::vector<Vec2> points;
};

// Throws GeometryError when fewer than 3 distinct points or all collinear.
Hull2 convex_hull_2d(const std::vector<Vec2>& pts);

// True iff p lies inside the counterclockwise convex polygon with a distance of
// at least `margin` from every edge line.
bool strictly_inside_convex(const std::vector<Vec2>& poly, const Vec2& p, double margin);

// Twice the signed area of triangle abc.
inline double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// Rotation about the unit axis `k` by `angle` (right-hand rule).
Eigen::Matrix3d axis_angle(const Vec3& k, double angle);

}  // namespace vtt
