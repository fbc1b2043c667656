#include "mmgen/geometry/mesh_sequence.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "mmgen/core/errors.hpp"
#include "mmgen/geometry/mesh_io.hpp"

namespace mmgen {

void MeshSequence::validate() const {
    if (frames.empty()) throw ConfigError("mesh sequence is empty");
    if (!(frame_rate_hz > 0.0)) throw ConfigError("mesh sequence frame rate must be positive");
    const auto n = frames.front().size();
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].size() != n) {
            throw ConfigError("mesh sequence frame " + std::to_string(i) + " has " + std::to_string(frames[i].size()) +
                              " vertices, expected " + std::to_string(n));
        }
    }
    for (const auto& f : topology.faces) {
        for (auto idx : f) {
            if (idx >= n) throw ConfigError("mesh sequence face index out of range");
        }
    }
}

std::vector<double> chirp_times(const RadarConfig& config, std::size_t frame_index) {
    std::vector<double> t(config.chirps_per_frame);
    const double start = static_cast<double>(frame_index) / config.frame_rate_hz;
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = start + static_cast<double>(k) * config.chirp_period_s();
    return t;
}

std::vector<Vec3> vertices_at(const MeshSequence& seq, double t) {
    if (seq.frames.empty()) throw ConfigError("vertices_at: empty mesh sequence");
    const double pos = (t - seq.start_time_s) * seq.frame_rate_hz;
    if (!(pos > 0.0)) return seq.frames.front();
    const double last = static_cast<double>(seq.frames.size() - 1);
    if (pos >= last) return seq.frames.back();
    const auto i0 = static_cast<std::size_t>(std::floor(pos));
    const double alpha = pos - static_cast<double>(i0);
    const auto& a = seq.frames[i0];
    const auto& b = seq.frames[i0 + 1];
    if (alpha == 0.0) return a;
    std::vector<Vec3> out(a.size());
    for (std::size_t v = 0; v < a.size(); ++v) out[v] = (1.0 - alpha) * a[v] + alpha * b[v];
    return out;
}

std::vector<std::vector<Vec3>> interpolate_to_chirps(const MeshSequence& seq, const RadarConfig& config,
                                                     std::size_t frame_index) {
    if (seq.frames.empty()) throw ConfigError("interpolate_to_chirps: empty mesh sequence");
    std::vector<std::vector<Vec3>> out;
    out.reserve(config.chirps_per_frame);
    for (double t : chirp_times(config, frame_index)) out.push_back(vertices_at(seq, t));
    return out;
}

MeshSequence load_mesh_sequence(const std::filesystem::path& manifest, const MaterialTable& table) {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot open mesh sequence manifest " + manifest.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(manifest.string() + ": " + e.what());
    }
    MeshSequence seq;
    std::vector<std::string> files;
    std::string material;
    try {
        seq.frame_rate_hz = j.at("frame_rate_hz").get<double>();
        seq.start_time_s = j.value("start_time_s", 0.0);
        files = j.at("frames").get<std::vector<std::string>>();
        material = j.value("material", std::string("human"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(manifest.string() + ": " + e.what());
    }
    if (files.empty()) throw ConfigError(manifest.string() + ": no frames listed");
    const auto base = manifest.parent_path();
    for (std::size_t i = 0; i < files.size(); ++i) {
        TriangleMesh mesh = load_mesh(base / files[i], table, material);
        if (i == 0) {
            seq.topology = mesh;
            seq.topology.vertices.clear();
        } else if (mesh.faces != seq.topology.faces) {
            throw ConfigError(files[i] + ": face list differs from the first frame");
        }
        seq.frames.push_back(std::move(mesh.vertices));
    }
    seq.validate();
    return seq;
}

void save_mesh_sequence(const std::filesystem::path& manifest, const MeshSequence& seq) {
    seq.validate();
    const auto base = manifest.parent_path();
    const auto stem = manifest.stem().string();
    nlohmann::json j;
    j["frame_rate_hz"] = seq.frame_rate_hz;
    j["start_time_s"] = seq.start_time_s;
    j["material"] = seq.topology.materials.empty() ? "human" : seq.topology.materials.front().name;
    j["frames"] = nlohmann::json::array();
    TriangleMesh mesh = seq.topology;
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%04zu.obj", stem.c_str(), i);
        mesh.vertices = seq.frames[i];
        save_obj(base / name, mesh);
        j["frames"].push_back(name);
    }
    std::ofstream out(manifest);
    if (!out) throw IoError("cannot write " + manifest.string());
    out << j.dump(2) << '\n';
}

}  // namespace mmgen
