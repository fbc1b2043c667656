#pragma once

#include <filesystem>

#include "mmgen/geometry/scene.hpp"

namespace mmgen {

/// 0.5 m plywood plate facing the radar at 2.05 m on boresight.
SceneSpec demo_plate_scene();

/// 6 x 8 x 3 m room (concrete walls, floor) with a plywood cabinet and a glass panel.
SceneSpec demo_room_scene();

/// Mannequin walking toward the radar from 4 m, 1.0 m/s, off boresight.
WalkParams demo_walk(std::size_t frames);

struct DemoBundle {
    std::filesystem::path manifest;
    std::filesystem::path radar_config;
    std::filesystem::path scene;
    std::filesystem::path human_sequence;
};

/// Writes radar.json, scene.json, a walk sequence and manifest.json
/// (plate scene, walking mannequin, all stages, `frames` frames).
DemoBundle write_demo_bundle(const std::filesystem::path& dir, std::size_t frames = 2);

}  // namespace mmgen
