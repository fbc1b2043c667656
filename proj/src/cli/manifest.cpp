#include "mmgen/cli/manifest.hpp"

#include <set>

#include "mmgen/core/constants.hpp"
#include "mmgen/core/errors.hpp"
#include "mmgen/io/config_io.hpp"

namespace mmgen {

void Knobs::merge(const Knobs& over) {
    if (over.gamma) gamma = over.gamma;
    if (over.eta_deg) eta_deg = over.eta_deg;
    if (over.psi_deg) psi_deg = over.psi_deg;
    if (over.cone_deg) cone_deg = over.cone_deg;
    if (over.sigma_azimuth_deg) sigma_azimuth_deg = over.sigma_azimuth_deg;
    if (over.sigma_elevation_deg) sigma_elevation_deg = over.sigma_elevation_deg;
    if (over.hpr_mode) hpr_mode = over.hpr_mode;
    if (over.workers) workers = over.workers;
}

RunManifest RunManifest::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("manifest must be a JSON object");
    static const std::set<std::string> known = {"radar_config", "materials", "scene",  "human_sequence",
                                                "output_dir",   "frames",    "stages", "knobs"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw ConfigError("manifest: unknown key '" + key + "'");
    }
    RunManifest m;
    try {
        auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
            if (!j.contains(key) || j[key].is_null()) return std::nullopt;
            std::filesystem::path p = j[key].get<std::string>();
            return p.is_relative() ? base_dir / p : p;
        };
        m.radar_config = path_of("radar_config");
        m.materials = path_of("materials");
        m.scene = path_of("scene");
        m.human_sequence = path_of("human_sequence");
        const auto out = path_of("output_dir");
        if (!out) throw ConfigError("manifest: output_dir is required");
        m.output_dir = *out;
        if (j.contains("frames")) {
            if (!j["frames"].is_number_integer() || j["frames"].get<long long>() < 1) {
                throw ConfigError("manifest: frames must be a positive integer");
            }
            m.frames = j["frames"].get<std::size_t>();
        }
        if (j.contains("stages")) {
            const auto& s = j["stages"];
            m.human = s.value("human", true);
            m.environment = s.value("environment", true);
            m.multipath = s.value("multipath", true);
        }
        if (j.contains("knobs")) {
            const auto& k = j["knobs"];
            auto opt = [&](const char* key, std::optional<double>& field) {
                if (k.contains(key)) field = k[key].get<double>();
            };
            opt("gamma", m.knobs.gamma);
            opt("eta_deg", m.knobs.eta_deg);
            opt("psi_deg", m.knobs.psi_deg);
            opt("cone_deg", m.knobs.cone_deg);
            opt("sigma_azimuth_deg", m.knobs.sigma_azimuth_deg);
            opt("sigma_elevation_deg", m.knobs.sigma_elevation_deg);
            if (k.contains("hpr_mode")) m.knobs.hpr_mode = k["hpr_mode"].get<std::string>();
            if (k.contains("workers")) m.knobs.workers = k["workers"].get<std::size_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    return m;
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
    try {
        return from_json(read_json_file(path), path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    auto put = [&](const char* key, const std::optional<std::filesystem::path>& p) {
        if (p) j[key] = p->string();
    };
    put("radar_config", radar_config);
    put("materials", materials);
    put("scene", scene);
    put("human_sequence", human_sequence);
    j["output_dir"] = output_dir.string();
    j["frames"] = frames;
    j["stages"] = {{"human", human}, {"environment", environment}, {"multipath", multipath}};
    nlohmann::json k = nlohmann::json::object();
    if (knobs.gamma) k["gamma"] = *knobs.gamma;
    if (knobs.eta_deg) k["eta_deg"] = *knobs.eta_deg;
    if (knobs.psi_deg) k["psi_deg"] = *knobs.psi_deg;
    if (knobs.cone_deg) k["cone_deg"] = *knobs.cone_deg;
    if (knobs.sigma_azimuth_deg) k["sigma_azimuth_deg"] = *knobs.sigma_azimuth_deg;
    if (knobs.sigma_elevation_deg) k["sigma_elevation_deg"] = *knobs.sigma_elevation_deg;
    if (knobs.hpr_mode) k["hpr_mode"] = *knobs.hpr_mode;
    if (knobs.workers) k["workers"] = *knobs.workers;
    j["knobs"] = k;
    return j;
}

void RunManifest::validate() const {
    if (!human && !environment && !multipath) throw ConfigError("manifest: at least one stage must be enabled");
    for (const auto* p : {&radar_config, &materials, &scene, &human_sequence}) {
        if (*p && !std::filesystem::exists(**p)) throw ConfigError("manifest: missing input " + (*p)->string());
    }
    if (frames == 0) throw ConfigError("manifest: frames must be positive");
}

void apply_knobs(const Knobs& knobs, RadarConfig& config, SynthesisOptions& options) {
    if (knobs.gamma) {
        if (!(*knobs.gamma > 0.0)) throw ConfigError("gamma must be positive");
        options.hpr_gamma = *knobs.gamma;
    }
    if (knobs.eta_deg) config.specular_spread_rad = deg_to_rad(*knobs.eta_deg);
    if (knobs.psi_deg) {
        if (*knobs.psi_deg < 0.0 || *knobs.psi_deg > 90.0) throw ConfigError("psi must lie in [0, 90] degrees");
        options.psi_rad = deg_to_rad(*knobs.psi_deg);
    }
    if (knobs.cone_deg) {
        if (!(*knobs.cone_deg > 0.0 && *knobs.cone_deg <= 180.0)) throw ConfigError("cone angle must lie in (0, 180]");
        options.cone_deg = *knobs.cone_deg;
    }
    if (knobs.sigma_azimuth_deg) config.gain_sigma_azimuth_rad = deg_to_rad(*knobs.sigma_azimuth_deg);
    if (knobs.sigma_elevation_deg) config.gain_sigma_elevation_rad = deg_to_rad(*knobs.sigma_elevation_deg);
    if (knobs.hpr_mode) {
        if (*knobs.hpr_mode == "chirp") {
            options.hpr_mode = HprMode::per_chirp;
        } else if (*knobs.hpr_mode == "frame") {
            options.hpr_mode = HprMode::per_frame;
        } else {
            throw ConfigError("hpr_mode must be 'chirp' or 'frame'");
        }
    }
    if (knobs.workers) options.workers = std::max<std::size_t>(1, *knobs.workers);
    config.validate();
}

}  // namespace mmgen
