#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mmgen {

inline constexpr double kDefaultHprGamma = 2.0;

/**
 * Hidden point removal by spherical flipping.
 *
 * Each point p (relative to the viewpoint) is mirrored to
 * p + 2 (R - |p|) p / |p| with R = 10^gamma * max |p|; the points whose
 * flips lie on the convex hull of the flipped set plus the viewpoint are
 * visible. Returns ascending indices. With fewer than 4 points, or an input
 * with no 3-D extent, every point is reported visible. Points coinciding
 * with the viewpoint are reported visible.
 */
std::vector<std::size_t> hpr_visible(std::span<const Eigen::Vector3d> points, const Eigen::Vector3d& viewpoint,
                                     double gamma = kDefaultHprGamma);

}  // namespace mmgen
