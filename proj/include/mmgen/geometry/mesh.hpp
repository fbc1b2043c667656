#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "mmgen/core/material.hpp"

namespace mmgen {

using Vec3 = Eigen::Vector3d;
using Face = std::array<std::uint32_t, 3>;

/// Triangle mesh in metres with one material slot per face.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    /// Index into `materials` per face; empty means every face uses materials[0].
    std::vector<std::uint32_t> face_material;
    std::vector<Material> materials;
    /// Faces discarded at load time for having near-zero area.
    std::size_t dropped_degenerate = 0;

    [[nodiscard]] const Material& material_of(std::size_t face) const;
    /// Throws ConfigError for out-of-range indices or missing materials.
    void validate() const;
    [[nodiscard]] double total_area() const;
    /// Appends `other`, merging material slots by name.
    void append(const TriangleMesh& other);
};

/// One visible triangle reduced to its centroid.
struct ReflectionPoint {
    Vec3 centroid = Vec3::Zero();
    Vec3 unit_normal = Vec3::UnitZ();
    double area_m2 = 0.0;
    Material material;
    std::uint32_t source_face_id = 0;
};

inline constexpr double kDegenerateAreaM2 = 1e-12;

/// Triangle area from its three corners.
double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Radius of the inscribed circle of triangle abc.
double incircle_radius(const Vec3& a, const Vec3& b, const Vec3& c);

/// Drops faces with area below kDegenerateAreaM2, counting them.
void drop_degenerate_faces(TriangleMesh& mesh);

/// One point per face: centroid, winding-oriented unit normal, area.
std::vector<ReflectionPoint> facet_attributes(const TriangleMesh& mesh);

/// Same, with vertex positions overridden (shared topology).
std::vector<ReflectionPoint> facet_attributes(const TriangleMesh& topology, std::span<const Vec3> vertices);

/// Incircle radius per face.
std::vector<double> insphere_radii(const TriangleMesh& mesh);
std::vector<double> insphere_radii(const TriangleMesh& topology, std::span<const Vec3> vertices);

}  // namespace mmgen
