#pragma once

#include <filesystem>

#include <json.hpp>

#include "mmgen/core/material.hpp"
#include "mmgen/core/radar_config.hpp"

namespace mmgen {

/**
 * Radar config JSON. Every key is optional and falls back to
 * RadarConfig::defaults(); unknown keys are rejected. Angles are degrees.
 *
 *   start_frequency_hz, bandwidth_hz, ramp_time_s, idle_time_s,
 *   chirps_per_frame, samples_per_chirp, sample_rate_hz, frame_rate_hz,
 *   tx_power, tx_gain, rx_gain, num_tx, num_rx,
 *   antenna_layout_wavelengths: {"tx": [[x,y,z],...], "rx": [[x,y,z],...]},
 *   gain_sigma_azimuth_deg, gain_sigma_elevation_deg, specular_spread_deg
 */
RadarConfig radar_config_from_json(const nlohmann::json& j);
nlohmann::json radar_config_to_json(const RadarConfig& config);
RadarConfig load_radar_config(const std::filesystem::path& path);
void save_radar_config(const std::filesystem::path& path, const RadarConfig& config);

/// {"materials": [{"name", "relative_permittivity", "conductivity_s_per_m"}]}.
/// Entries override (or extend) MaterialTable::defaults() when `merge_defaults`.
MaterialTable material_table_from_json(const nlohmann::json& j, bool merge_defaults = true);
nlohmann::json material_table_to_json(const MaterialTable& table);
MaterialTable load_material_table(const std::filesystem::path& path, bool merge_defaults = true);

/// Parses a JSON file, mapping open failures to IoError and syntax errors to ConfigError.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace mmgen
