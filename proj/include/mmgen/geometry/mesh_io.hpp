#pragma once

#include <filesystem>
#include <string>

#include "mmgen/geometry/mesh.hpp"

namespace mmgen {

/**
 * Loads a Wavefront OBJ or PLY (ascii / binary_little_endian) mesh.
 *
 * Polygons are fan-triangulated. OBJ `usemtl` names and a PLY face
 * property `material` (integer index into the table's sorted names) are
 * resolved against `table`; faces without a label get `default_material`.
 * Faces with area below 1e-12 m^2 are dropped and counted in
 * TriangleMesh::dropped_degenerate.
 *
 * Throws IoError on unreadable or malformed files (message carries the
 * line number or byte offset) and ConfigError on unknown materials or
 * out-of-range vertex indices.
 */
TriangleMesh load_mesh(const std::filesystem::path& path, const MaterialTable& table,
                       const std::string& default_material);

/// Writes v/f records plus `usemtl` groups.
void save_obj(const std::filesystem::path& path, const TriangleMesh& mesh);

}  // namespace mmgen
