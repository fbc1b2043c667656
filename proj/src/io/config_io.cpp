#include "mmgen/io/config_io.hpp"

#include <fstream>
#include <set>

#include "mmgen/core/constants.hpp"
#include "mmgen/core/errors.hpp"

namespace mmgen {

namespace {

std::vector<Vec3> read_positions(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string("antenna_layout_wavelengths.") + what + " must be an array");
    std::vector<Vec3> out;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 3) {
            throw ConfigError(std::string("antenna_layout_wavelengths.") + what + ": positions need 3 numbers");
        }
        out.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    return out;
}

nlohmann::json positions_json(const std::vector<Vec3>& v, std::size_t begin, std::size_t end) {
    auto arr = nlohmann::json::array();
    for (std::size_t i = begin; i < end && i < v.size(); ++i) arr.push_back({v[i].x(), v[i].y(), v[i].z()});
    return arr;
}

}  // namespace

RadarConfig radar_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("radar config must be a JSON object");
    static const std::set<std::string> known = {
        "start_frequency_hz", "bandwidth_hz",     "ramp_time_s",    "idle_time_s",
        "chirps_per_frame",   "samples_per_chirp", "sample_rate_hz", "frame_rate_hz",
        "tx_power",           "tx_gain",           "rx_gain",        "num_tx",
        "num_rx",             "antenna_layout_wavelengths",          "gain_sigma_azimuth_deg",
        "gain_sigma_elevation_deg",                "specular_spread_deg"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw ConfigError("radar config: unknown key '" + key + "'");
    }
    RadarConfig c = RadarConfig::defaults();
    try {
        auto num = [&](const char* key, double& field) {
            if (j.contains(key)) field = j.at(key).get<double>();
        };
        auto count = [&](const char* key, std::size_t& field) {
            if (!j.contains(key)) return;
            const auto& v = j.at(key);
            if (!v.is_number_integer() || v.get<long long>() <= 0) {
                throw ConfigError(std::string("radar config: ") + key + " must be a positive integer");
            }
            field = v.get<std::size_t>();
        };
        auto angle = [&](const char* key, double& field) {
            if (j.contains(key)) field = deg_to_rad(j.at(key).get<double>());
        };
        num("start_frequency_hz", c.start_frequency_hz);
        num("bandwidth_hz", c.bandwidth_hz);
        num("ramp_time_s", c.ramp_time_s);
        num("idle_time_s", c.idle_time_s);
        count("chirps_per_frame", c.chirps_per_frame);
        count("samples_per_chirp", c.samples_per_chirp);
        num("sample_rate_hz", c.sample_rate_hz);
        num("frame_rate_hz", c.frame_rate_hz);
        num("tx_power", c.tx_power);
        num("tx_gain", c.tx_gain);
        num("rx_gain", c.rx_gain);
        count("num_tx", c.num_tx);
        count("num_rx", c.num_rx);
        angle("gain_sigma_azimuth_deg", c.gain_sigma_azimuth_rad);
        angle("gain_sigma_elevation_deg", c.gain_sigma_elevation_rad);
        angle("specular_spread_deg", c.specular_spread_rad);
        if (j.contains("antenna_layout_wavelengths")) {
            const auto& layout = j.at("antenna_layout_wavelengths");
            if (!layout.is_object() || !layout.contains("tx") || !layout.contains("rx")) {
                throw ConfigError("antenna_layout_wavelengths needs 'tx' and 'rx' arrays");
            }
            c.antenna_layout = read_positions(layout.at("tx"), "tx");
            const auto rx = read_positions(layout.at("rx"), "rx");
            c.antenna_layout.insert(c.antenna_layout.end(), rx.begin(), rx.end());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("radar config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json radar_config_to_json(const RadarConfig& c) {
    return {
        {"start_frequency_hz", c.start_frequency_hz},
        {"bandwidth_hz", c.bandwidth_hz},
        {"ramp_time_s", c.ramp_time_s},
        {"idle_time_s", c.idle_time_s},
        {"chirps_per_frame", c.chirps_per_frame},
        {"samples_per_chirp", c.samples_per_chirp},
        {"sample_rate_hz", c.sample_rate_hz},
        {"frame_rate_hz", c.frame_rate_hz},
        {"tx_power", c.tx_power},
        {"tx_gain", c.tx_gain},
        {"rx_gain", c.rx_gain},
        {"num_tx", c.num_tx},
        {"num_rx", c.num_rx},
        {"antenna_layout_wavelengths",
         {{"tx", positions_json(c.antenna_layout, 0, c.num_tx)},
          {"rx", positions_json(c.antenna_layout, c.num_tx, c.num_tx + c.num_rx)}}},
        {"gain_sigma_azimuth_deg", rad_to_deg(c.gain_sigma_azimuth_rad)},
        {"gain_sigma_elevation_deg", rad_to_deg(c.gain_sigma_elevation_rad)},
        {"specular_spread_deg", rad_to_deg(c.specular_spread_rad)},
    };
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

RadarConfig load_radar_config(const std::filesystem::path& path) {
    try {
        return radar_config_from_json(read_json_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void save_radar_config(const std::filesystem::path& path, const RadarConfig& config) {
    write_json_file(path, radar_config_to_json(config));
}

MaterialTable material_table_from_json(const nlohmann::json& j, bool merge_defaults) {
    MaterialTable table = merge_defaults ? MaterialTable::defaults() : MaterialTable{};
    if (!j.is_object() || !j.contains("materials") || !j["materials"].is_array()) {
        throw ConfigError("material table needs a 'materials' array");
    }
    std::set<std::string> seen;
    for (const auto& m : j["materials"]) {
        Material mat;
        try {
            mat.name = m.at("name").get<std::string>();
            mat.relative_permittivity = m.at("relative_permittivity").get<double>();
            mat.conductivity_s_per_m = m.at("conductivity_s_per_m").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("material entry: ") + e.what());
        }
        if (!seen.insert(mat.name).second) throw ConfigError("material '" + mat.name + "' listed twice");
        mat.validate();
        table.set(mat);
    }
    return table;
}

nlohmann::json material_table_to_json(const MaterialTable& table) {
    nlohmann::json j;
    j["materials"] = nlohmann::json::array();
    for (const auto& name : table.names()) {
        const Material& m = table.at(name);
        j["materials"].push_back({{"name", m.name},
                                  {"relative_permittivity", m.relative_permittivity},
                                  {"conductivity_s_per_m", m.conductivity_s_per_m}});
    }
    return j;
}

MaterialTable load_material_table(const std::filesystem::path& path, bool merge_defaults) {
    return material_table_from_json(read_json_file(path), merge_defaults);
}

}  // namespace mmgen
