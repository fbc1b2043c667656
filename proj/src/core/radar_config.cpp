#include "mmgen/core/radar_config.hpp"

#include <cmath>
#include <string>

#include "mmgen/core/constants.hpp"
#include "mmgen/core/errors.hpp"

namespace mmgen {

RadarConfig RadarConfig::defaults() {
    RadarConfig c;
    // TX0 and TX2 span the azimuth aperture 2 wavelengths apart; TX1 is
    // raised half a wavelength for elevation. RX at half-wavelength pitch.
    c.antenna_layout = {
        {0.0, 0.0, 0.0}, {1.0, 0.0, 0.5}, {2.0, 0.0, 0.0},
        {0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.5, 0.0, 0.0},
    };
    return c;
}

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw ConfigError(std::string("radar config: ") + name + " must be positive");
    }
}

}  // namespace

void RadarConfig::validate() const {
    require_positive(start_frequency_hz, "start_frequency_hz");
    require_positive(bandwidth_hz, "bandwidth_hz");
    require_positive(ramp_time_s, "ramp_time_s");
    require_positive(idle_time_s, "idle_time_s");
    require_positive(sample_rate_hz, "sample_rate_hz");
    require_positive(frame_rate_hz, "frame_rate_hz");
    require_positive(tx_power, "tx_power");
    require_positive(tx_gain, "tx_gain");
    require_positive(rx_gain, "rx_gain");
    require_positive(gain_sigma_azimuth_rad, "gain_sigma_azimuth");
    require_positive(gain_sigma_elevation_rad, "gain_sigma_elevation");
    require_positive(specular_spread_rad, "specular_spread");
    if (chirps_per_frame == 0) throw ConfigError("radar config: chirps_per_frame must be positive");
    if (samples_per_chirp == 0) throw ConfigError("radar config: samples_per_chirp must be positive");
    if (num_tx == 0 || num_rx == 0) throw ConfigError("radar config: num_tx and num_rx must be positive");
    if (static_cast<double>(samples_per_chirp) / sample_rate_hz > ramp_time_s * (1.0 + 1e-12)) {
        throw ConfigError("radar config: sampling window exceeds the chirp ramp time");
    }
    if (antenna_layout.size() != num_tx + num_rx) {
        throw ConfigError("radar config: antenna_layout needs num_tx + num_rx entries, got " +
                          std::to_string(antenna_layout.size()));
    }
    for (const auto& p : antenna_layout) {
        if (!p.allFinite()) throw ConfigError("radar config: non-finite antenna position");
    }
}

double RadarConfig::wavelength_m() const { return kSpeedOfLight / start_frequency_hz; }

Vec3 RadarConfig::tx_position_m(std::size_t tx) const { return antenna_layout.at(tx) * wavelength_m(); }

Vec3 RadarConfig::rx_position_m(std::size_t rx) const {
    return antenna_layout.at(num_tx + rx) * wavelength_m();
}

DerivedMetrics derive_radar_metrics(const RadarConfig& config) {
    if (!(config.sample_rate_hz > 0.0)) throw ConfigError("derive_radar_metrics: sample rate must be positive");
    if (config.chirps_per_frame == 0 || config.samples_per_chirp == 0 || config.num_tx == 0) {
        throw ConfigError("derive_radar_metrics: chirp, sample and TX counts must be positive");
    }
    if (!(config.ramp_time_s > 0.0) || !(config.start_frequency_hz > 0.0) || !(config.bandwidth_hz > 0.0)) {
        throw ConfigError("derive_radar_metrics: frequencies and ramp time must be positive");
    }
    DerivedMetrics m;
    const auto n = static_cast<double>(config.samples_per_chirp);
    m.slope_hz_per_s = config.bandwidth_hz / config.ramp_time_s;
    m.wavelength_m = kSpeedOfLight / config.start_frequency_hz;
    m.sampled_bandwidth_hz = m.slope_hz_per_s * (n / config.sample_rate_hz);
    m.range_resolution_m = kSpeedOfLight / (2.0 * m.sampled_bandwidth_hz);
    // Complex sampling: all N bins are positive beat frequencies.
    m.max_range_m = n * m.range_resolution_m;
    m.max_speed_mps = m.wavelength_m /
                      (4.0 * static_cast<double>(config.num_tx) * (config.ramp_time_s + config.idle_time_s));
    m.speed_resolution_mps = 2.0 * m.max_speed_mps / static_cast<double>(config.chirps_per_frame);
    m.if_bin_hz = config.sample_rate_hz / n;
    return m;
}

std::vector<Vec3> virtual_array(const RadarConfig& config) {
    if (config.antenna_layout.size() != config.num_tx + config.num_rx) {
        throw ConfigError("virtual_array: antenna_layout length does not match num_tx + num_rx");
    }
    std::vector<Vec3> out;
    out.reserve(config.num_virtual());
    for (std::size_t t = 0; t < config.num_tx; ++t) {
        for (std::size_t r = 0; r < config.num_rx; ++r) {
            out.push_back(config.antenna_layout[t] + config.antenna_layout[config.num_tx + r]);
        }
    }
    return out;
}

}  // namespace mmgen
