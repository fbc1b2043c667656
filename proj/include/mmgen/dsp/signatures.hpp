#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mmgen/core/frame_cube.hpp"
#include "mmgen/core/radar_config.hpp"
#include "mmgen/dsp/heatmap.hpp"

namespace mmgen {

enum class Window { rect, hann };

/// Periodic (false) or symmetric (true) Hann window; rect returns ones.
std::vector<double> make_window(Window kind, std::size_t n, bool symmetric = false);

/// Range spectra indexed [chirp][virtual][range bin].
struct RangeProfiles {
    std::size_t chirps = 0;
    std::size_t virtuals = 0;
    std::size_t bins = 0;
    std::vector<std::complex<double>> data;

    RangeProfiles() = default;
    RangeProfiles(std::size_t c, std::size_t v, std::size_t b) : chirps(c), virtuals(v), bins(b), data(c * v * b) {}

    std::complex<double>& at(std::size_t c, std::size_t v, std::size_t b) { return data[(c * virtuals + v) * bins + b]; }
    [[nodiscard]] const std::complex<double>& at(std::size_t c, std::size_t v, std::size_t b) const {
        return data[(c * virtuals + v) * bins + b];
    }
    [[nodiscard]] double energy() const;
};

/// FFT over samples, length samples_per_chirp; bin b is range b * range_resolution.
RangeProfiles range_fft(const FrameCube& cube, Window window = Window::rect);

/// |range spectrum| summed over virtual channels: rows range, columns chirp.
Heatmap range_heatmap(const RangeProfiles& profiles, const RadarConfig& config);

/// Velocity step of the Doppler axis.
double doppler_resolution(const RadarConfig& config, bool per_tx = true);

/**
 * Range-Doppler map. With per_tx, channel v is transformed over the chirps
 * its TX fired (chirps / num_tx of them); otherwise over all chirps. The
 * spectrum is fftshifted so index L/2 is zero velocity, positive velocity
 * meaning increasing range, and magnitudes are summed over channels.
 */
Heatmap doppler_fft(const RangeProfiles& profiles, const RadarConfig& config, bool per_tx = true,
                    Window window = Window::rect);

/// Virtual channels forming the azimuth uniform linear array, by ascending x.
struct AzimuthArray {
    std::vector<std::size_t> virtuals;
    double spacing_wavelengths = 0.5;
};

/// Largest group of virtual elements sharing (y, z); throws ConfigError if it
/// is not uniformly spaced or has fewer than 2 elements.
AzimuthArray azimuth_array(const RadarConfig& config);

/**
 * Range-angle map: per TDM loop (one chirp of every TX), the azimuth
 * elements are zero-padded to `padded_bins` and transformed so that bin b
 * (after fftshift) corresponds to sin(theta) = (b - M/2) / (M d). Magnitudes
 * are summed over loops. Columns are labelled in degrees.
 */
Heatmap angle_fft(const RangeProfiles& profiles, const RadarConfig& config, std::size_t padded_bins = 64);

/// Subtracts, per (range bin, virtual channel), the slow-time mean over the
/// chirps in which the channel's TX fired. Throws ConfigError with fewer
/// than two such chirps.
RangeProfiles static_clutter_removal(const RangeProfiles& profiles, const RadarConfig& config);

enum class RangeSelection { max_variance, sum_bins };

struct MicroDopplerOptions {
    std::size_t window = 256;
    std::size_t hop = 64;
    std::size_t fft_size = 256;
    RangeSelection selection = RangeSelection::max_variance;
    double db_floor = 1e-15;
};

/// Hann-windowed STFT magnitudes: result[window][bin], fftshifted.
std::vector<std::vector<double>> stft_magnitude(std::span<const std::complex<double>> series, std::size_t window,
                                                std::size_t hop, std::size_t fft_size);

/**
 * Micro-Doppler spectrogram of consecutive frames. Each chirp contributes
 * the SCR-filtered range profile of channel (active TX, RX 0); the slow-time
 * series of each STFT window is taken from the range bin with the largest
 * variance in that window (or magnitudes summed over bins). Rows are
 * velocity (m/s, per chirp period), columns window centre time (s); values
 * in dB.
 */
Heatmap micro_doppler(std::span<const FrameCube> cubes, const RadarConfig& config,
                      const MicroDopplerOptions& options = {});

}  // namespace mmgen
