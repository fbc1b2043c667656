#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "mmgen/core/radar_config.hpp"
#include "mmgen/synthesizer/synthesizer.hpp"

namespace mmgen {

/// Physics and execution knobs; unset values fall through to the next level.
struct Knobs {
    std::optional<double> gamma;
    std::optional<double> eta_deg;
    std::optional<double> psi_deg;
    std::optional<double> cone_deg;
    std::optional<double> sigma_azimuth_deg;
    std::optional<double> sigma_elevation_deg;
    std::optional<std::string> hpr_mode;  // "chirp" or "frame"
    std::optional<std::size_t> workers;

    /// Values set in `over` replace those here.
    void merge(const Knobs& over);
};

/**
 * Synthesis job. JSON keys (paths relative to the manifest file):
 *   radar_config, materials, scene, human_sequence   (optional paths)
 *   output_dir                                        (required)
 *   frames                                            (default 1)
 *   stages: {human, environment, multipath}           (default all true)
 *   knobs: {gamma, eta_deg, psi_deg, cone_deg, sigma_azimuth_deg,
 *           sigma_elevation_deg, hpr_mode, workers}
 */
struct RunManifest {
    std::optional<std::filesystem::path> radar_config;
    std::optional<std::filesystem::path> materials;
    std::optional<std::filesystem::path> scene;
    std::optional<std::filesystem::path> human_sequence;
    std::filesystem::path output_dir;
    std::size_t frames = 1;
    bool human = true;
    bool environment = true;
    bool multipath = true;
    Knobs knobs;

    static RunManifest from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
    static RunManifest load(const std::filesystem::path& path);
    [[nodiscard]] nlohmann::json to_json() const;
    /// Throws ConfigError if a referenced input is missing or no stage is enabled.
    void validate() const;
};

/// Applies knobs to a radar config (eta, sigmas) and synthesis options.
void apply_knobs(const Knobs& knobs, RadarConfig& config, SynthesisOptions& options);

}  // namespace mmgen
