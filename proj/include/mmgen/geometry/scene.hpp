#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmgen/geometry/mesh.hpp"
#include "mmgen/geometry/mesh_sequence.hpp"

namespace mmgen {

struct Pose {
    Vec3 translation = Vec3::Zero();
    /// Applied as Rz * Ry * Rx (degrees).
    Vec3 rotation_deg = Vec3::Zero();

    [[nodiscard]] Vec3 apply(const Vec3& local) const;
};

enum class PrimitiveKind { rectangle, box, dihedral, mesh };

/**
 * One scene entry. Local frames:
 *  - rectangle: width along x, height along z, centred, normal -y;
 *  - box: centred, size (x, y, z), outward normals;
 *  - dihedral: two width x height plates hinged on the z axis, opening
 *    toward -y with the given interior angle, normals into the opening;
 *  - mesh: an OBJ/PLY file.
 */
struct SceneObject {
    std::string name;
    PrimitiveKind kind = PrimitiveKind::rectangle;
    Vec3 size = Vec3::Ones();
    double angle_deg = 90.0;
    std::array<int, 2> subdivisions{1, 1};
    std::filesystem::path mesh_path;
    Pose pose;
    std::string material;
};

struct SceneSpec {
    std::vector<SceneObject> objects;
};

/// Parses {"objects": [...]} with keys name, primitive|mesh, size, angle_deg,
/// subdivisions, pose {translation, rotation_deg}, material. Relative mesh
/// paths resolve against `base_dir`. Throws ConfigError on malformed input.
SceneSpec parse_scene_spec(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
SceneSpec load_scene_spec(const std::filesystem::path& path);
nlohmann::json scene_spec_to_json(const SceneSpec& spec);

/// Merged world-frame mesh with per-face material labels.
TriangleMesh build_primitive_scene(const SceneSpec& spec, const MaterialTable& table);

/// Closed ellipsoid: 2 poles + rings x segments vertices, 2 * rings * segments
/// faces, outward winding.
TriangleMesh make_ellipsoid(const Vec3& center, const Vec3& radii, int rings, int segments, const Material& material);

struct WalkParams {
    Vec3 start = {0.0, 3.0, -1.1};  // feet position; radar height 1.1 m
    Vec3 velocity = {0.0, 1.0, 0.0};
    std::size_t frames = 15;
    double frame_rate_hz = 15.0;
    double swing_deg = 25.0;   // limb swing amplitude; 0 = rigid translation
    double stride_hz = 0.9;
    int rings = 14;
    int segments = 20;
};

/// Six-ellipsoid body proxy (torso, head, arms, legs) facing -y.
TriangleMesh make_mannequin(const Vec3& feet, double phase_rad, double swing_deg, int rings, int segments);

/// Mannequin walking with constant velocity.
MeshSequence make_walk_sequence(const WalkParams& params);

}  // namespace mmgen
