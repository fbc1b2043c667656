#include "mmgen/geometry/hpr.hpp"

#include <cmath>
#include <numeric>

#include "mmgen/core/errors.hpp"
#include "mmgen/geometry/convex_hull.hpp"

namespace mmgen {

std::vector<std::size_t> hpr_visible(std::span<const Eigen::Vector3d> points, const Eigen::Vector3d& viewpoint,
                                     double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("hpr_visible: gamma must be positive");
    std::vector<std::size_t> all(points.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (points.size() < 4) return all;

    double max_norm = 0.0;
    for (const auto& p : points) max_norm = std::max(max_norm, (p - viewpoint).norm());
    if (max_norm == 0.0) return all;
    const double radius = std::pow(10.0, gamma) * max_norm;

    // Flipped cloud, with the viewpoint (now the origin) appended last.
    std::vector<Eigen::Vector3d> flipped;
    flipped.reserve(points.size() + 1);
    std::vector<char> at_viewpoint(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Eigen::Vector3d rel = points[i] - viewpoint;
        const double n = rel.norm();
        if (n == 0.0) {
            at_viewpoint[i] = 1;
            flipped.emplace_back(Eigen::Vector3d::Zero());
            continue;
        }
        flipped.push_back(rel + 2.0 * (radius - n) * rel / n);
    }
    flipped.emplace_back(Eigen::Vector3d::Zero());

    const ConvexHull hull = convex_hull(flipped);
    if (!hull.full_dimensional) return all;
    std::vector<char> visible(points.size(), 0);
    for (auto v : hull.vertices) {
        if (v < points.size()) visible[v] = 1;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (visible[i] || at_viewpoint[i]) out.push_back(i);
    }
    return out;
}

}  // namespace mmgen
