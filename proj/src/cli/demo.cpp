#include "mmgen/cli/demo.hpp"

#include "mmgen/core/errors.hpp"
#include "mmgen/io/config_io.hpp"

namespace mmgen {

namespace {

SceneObject rectangle(std::string name, double w, double h, const Vec3& at, const Vec3& rot_deg, std::string material,
                      int nu, int nv) {
    SceneObject o;
    o.name = std::move(name);
    o.kind = PrimitiveKind::rectangle;
    o.size = {w, h, 0.0};
    o.pose.translation = at;
    o.pose.rotation_deg = rot_deg;
    o.material = std::move(material);
    o.subdivisions = {nu, nv};
    return o;
}

}  // namespace

SceneSpec demo_plate_scene() {
    SceneSpec spec;
    spec.objects.push_back(rectangle("plate", 0.5, 0.5, {0.0, 2.05, 0.0}, Vec3::Zero(), "plywood", 1, 1));
    return spec;
}

SceneSpec demo_room_scene() {
    SceneSpec spec;
    const double floor_z = -1.1;
    const double mid_z = floor_z + 1.5;
    spec.objects.push_back(rectangle("back_wall", 6.0, 3.0, {0.0, 7.0, mid_z}, Vec3::Zero(), "concrete", 12, 6));
    spec.objects.push_back(rectangle("left_wall", 8.0, 3.0, {-3.0, 3.0, mid_z}, {0, 0, 90}, "concrete", 16, 6));
    spec.objects.push_back(rectangle("right_wall", 8.0, 3.0, {3.0, 3.0, mid_z}, {0, 0, -90}, "concrete", 16, 6));
    spec.objects.push_back(rectangle("floor", 6.0, 8.0, {0.0, 3.0, floor_z}, {-90, 0, 0}, "concrete", 12, 16));
    SceneObject cabinet;
    cabinet.name = "cabinet";
    cabinet.kind = PrimitiveKind::box;
    cabinet.size = {1.0, 0.5, 1.2};
    cabinet.pose.translation = {-2.0, 5.0, floor_z + 0.6};
    cabinet.material = "plywood";
    cabinet.subdivisions = {4, 4};
    spec.objects.push_back(cabinet);
    spec.objects.push_back(rectangle("glass_panel", 1.2, 1.0, {2.0, 4.5, 0.0}, {0, 0, -20}, "glass", 6, 5));
    return spec;
}

WalkParams demo_walk(std::size_t frames) {
    WalkParams p;
    p.start = {0.8, 4.0, -1.1};
    p.velocity = {0.0, -1.0, 0.0};
    p.frames = frames;
    p.rings = 16;
    p.segments = 24;
    return p;
}

DemoBundle write_demo_bundle(const std::filesystem::path& dir, std::size_t frames) {
    if (frames == 0) throw ConfigError("demo: frames must be positive");
    std::error_code ec;
    std::filesystem::create_directories(dir / "walk", ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    DemoBundle b;
    b.radar_config = dir / "radar.json";
    b.scene = dir / "scene.json";
    b.human_sequence = dir / "walk" / "sequence.json";
    b.manifest = dir / "manifest.json";
    save_radar_config(b.radar_config, RadarConfig::defaults());
    write_json_file(b.scene, scene_spec_to_json(demo_plate_scene()));
    // One mesh frame beyond the last radar frame keeps interpolation inside the sequence.
    save_mesh_sequence(b.human_sequence, make_walk_sequence(demo_walk(frames + 1)));
    nlohmann::json m = {
        {"radar_config", "radar.json"},
        {"scene", "scene.json"},
        {"human_sequence", "walk/sequence.json"},
        {"output_dir", "out"},
        {"frames", frames},
        {"stages", {{"human", true}, {"environment", true}, {"multipath", true}}},
        {"knobs", {{"gamma", 2.0}, {"cone_deg", 15.0}, {"hpr_mode", "chirp"}}},
    };
    write_json_file(b.manifest, m);
    return b;
}

}  // namespace mmgen
