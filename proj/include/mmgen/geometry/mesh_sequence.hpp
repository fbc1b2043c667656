#pragma once

#include <filesystem>
#include <vector>

#include "mmgen/core/radar_config.hpp"
#include "mmgen/geometry/mesh.hpp"

namespace mmgen {

/// Animated mesh: one topology, per-frame vertex positions.
struct MeshSequence {
    TriangleMesh topology;  // faces and materials; vertices unused
    std::vector<std::vector<Vec3>> frames;
    double frame_rate_hz = 15.0;
    double start_time_s = 0.0;

    [[nodiscard]] std::size_t size() const { return frames.size(); }
    [[nodiscard]] double timestamp(std::size_t frame) const {
        return start_time_s + static_cast<double>(frame) / frame_rate_hz;
    }
    /// Throws ConfigError on empty sequences or differing vertex counts.
    void validate() const;
};

/// Start times of each chirp of radar frame `frame_index`.
std::vector<double> chirp_times(const RadarConfig& config, std::size_t frame_index);

/// Vertices at time t: linear between bracketing frames, held outside the
/// sequence's time span.
std::vector<Vec3> vertices_at(const MeshSequence& seq, double t);

/// chirps_per_frame vertex arrays for one radar frame.
std::vector<std::vector<Vec3>> interpolate_to_chirps(const MeshSequence& seq, const RadarConfig& config,
                                                     std::size_t frame_index);

/// Reads a manifest {"frame_rate_hz": f, "frames": [paths...], "material": name}.
/// Paths are relative to the manifest's directory.
MeshSequence load_mesh_sequence(const std::filesystem::path& manifest, const MaterialTable& table);

/// Writes frame OBJs next to `manifest` and the manifest itself.
void save_mesh_sequence(const std::filesystem::path& manifest, const MeshSequence& seq);

}  // namespace mmgen
