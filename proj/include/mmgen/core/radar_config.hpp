#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace mmgen {

using Vec3 = Eigen::Vector3d;

/**
 * FMCW chirp, frame and antenna parameters.
 *
 * The radar sits at the origin with boresight +y and up +z. Antenna
 * positions are given in wavelengths, TX elements first, then RX.
 */
struct RadarConfig {
    double start_frequency_hz = 60e9;
    double bandwidth_hz = 4e9;
    double ramp_time_s = 28e-6;
    double idle_time_s = 7e-6;
    std::size_t chirps_per_frame = 255;
    std::size_t samples_per_chirp = 256;
    double sample_rate_hz = 10e6;
    double frame_rate_hz = 15.0;
    double tx_power = 1.0;
    double tx_gain = 1.0;
    double rx_gain = 1.0;
    std::size_t num_tx = 3;
    std::size_t num_rx = 4;
    std::vector<Vec3> antenna_layout;
    double gain_sigma_azimuth_rad = 35.0 * 3.14159265358979323846 / 180.0;
    double gain_sigma_elevation_rad = 35.0 * 3.14159265358979323846 / 180.0;
    double specular_spread_rad = 0.3;

    /// IWR6843ISK-style defaults: 60 GHz, 4 GHz sweep, 3 TX x 4 RX.
    static RadarConfig defaults();

    /// Throws ConfigError on any violated invariant.
    void validate() const;

    [[nodiscard]] std::size_t num_virtual() const { return num_tx * num_rx; }
    [[nodiscard]] double chirp_period_s() const { return ramp_time_s + idle_time_s; }
    [[nodiscard]] double wavelength_m() const;
    [[nodiscard]] double slope_hz_per_s() const { return bandwidth_hz / ramp_time_s; }
    /// TX element active during chirp k under the TDM schedule.
    [[nodiscard]] std::size_t active_tx(std::size_t chirp) const { return chirp % num_tx; }
    [[nodiscard]] std::size_t tx_of_virtual(std::size_t v) const { return v / num_rx; }
    [[nodiscard]] std::size_t rx_of_virtual(std::size_t v) const { return v % num_rx; }
    [[nodiscard]] Vec3 tx_position_m(std::size_t tx) const;
    [[nodiscard]] Vec3 rx_position_m(std::size_t rx) const;
};

struct DerivedMetrics {
    double slope_hz_per_s = 0;
    double wavelength_m = 0;
    double sampled_bandwidth_hz = 0;
    double range_resolution_m = 0;
    double max_range_m = 0;
    double max_speed_mps = 0;
    double speed_resolution_mps = 0;
    double if_bin_hz = 0;
};

DerivedMetrics derive_radar_metrics(const RadarConfig& config);

/// Virtual element positions (wavelengths), TX-major: v = tx * num_rx + rx.
std::vector<Vec3> virtual_array(const RadarConfig& config);

}  // namespace mmgen
