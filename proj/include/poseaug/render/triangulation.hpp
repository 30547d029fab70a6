#pragma once

#include "Eigen/Core"

#include <array>
#include <span>
#include <vector>

namespace poseaug {

using Edge = std::array<int, 2>;
using Triangle = std::array<int, 3>;

/**
 * Constrained Delaunay triangulation of a planar point set.
 *
 * Every point becomes a vertex, the union of the returned triangles is the convex hull of the
 * input (collinear hull points included), and no triangle edge properly crosses a constraint
 * edge. Constraints passing exactly through other input points are split at those points.
 * Triangles are counter-clockwise in a y-up sense (positive signed area).
 *
 * Throws TriangulationError on duplicate points (the message names both indices), on fewer
 * than three points or on an all-collinear point set.
 */
std::vector<Triangle> triangulate(std::span<const Eigen::Vector2d> points, std::span<const Edge> constraints = {});

/// Convex hull as indices in counter-clockwise order. Collinear boundary points are kept when requested.
std::vector<int> convex_hull(std::span<const Eigen::Vector2d> points, bool keep_collinear);

/// Twice the signed area of (a, b, c); positive when counter-clockwise.
inline double orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c)
{
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

/// Point inside or on the boundary of a counter-clockwise convex polygon.
bool in_convex_polygon(std::span<const Eigen::Vector2d> polygon, const Eigen::Vector2d& p);

} // namespace poseaug
