#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace mmgen {

struct ConvexHull {
    /// Outward-oriented triangles referencing input point indices.
    std::vector<std::array<std::size_t, 3>> faces;
    /// Sorted, unique input indices that are hull vertices.
    std::vector<std::size_t> vertices;
    /// False when the input has no 3-D extent (fewer than 4 points, or all
    /// collinear / coplanar within tolerance).
    bool full_dimensional = false;
};

/// 3-D quickhull. Points within a relative tolerance of a hull face are
/// treated as interior; the output is deterministic for a fixed input order.
ConvexHull convex_hull(std::span<const Eigen::Vector3d> points);

}  // namespace mmgen
