#include "mmgen/dsp/signatures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mmgen/core/constants.hpp"
#include "mmgen/core/errors.hpp"
#include "mmgen/dsp/fft.hpp"

namespace mmgen {

namespace {

void check_profiles(const RangeProfiles& p, const RadarConfig& config) {
    if (p.virtuals != config.num_virtual()) throw ConfigError("range profiles: virtual count does not match config");
    if (p.chirps == 0 || p.bins == 0) throw ConfigError("range profiles: empty");
}

Axis range_axis(const RadarConfig& config, std::size_t bins) {
    const double res = derive_radar_metrics(config).range_resolution_m;
    Axis a{"range", "m", {}};
    for (std::size_t b = 0; b < bins; ++b) a.values.push_back(static_cast<double>(b) * res);
    return a;
}

}  // namespace

std::vector<double> make_window(Window kind, std::size_t n, bool symmetric) {
    std::vector<double> w(n, 1.0);
    if (kind == Window::rect || n < 2) return w;
    const double denom = symmetric ? static_cast<double>(n - 1) : static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / denom);
    return w;
}

double RangeProfiles::energy() const {
    double e = 0.0;
    for (const auto& x : data) e += std::norm(x);
    return e;
}

RangeProfiles range_fft(const FrameCube& cube, Window window) {
    const std::size_t n = cube.samples();
    RangeProfiles out(cube.chirps(), cube.virtuals(), n);
    if (n == 0) return out;
    const Fft fft(n);
    const std::vector<double> w = make_window(window, n);
    std::vector<std::complex<double>> buf(n);
    for (std::size_t c = 0; c < cube.chirps(); ++c) {
        for (std::size_t v = 0; v < cube.virtuals(); ++v) {
            const auto row = cube.row(c, v);
            for (std::size_t i = 0; i < n; ++i) buf[i] = std::complex<double>(row[i]) * w[i];
            fft.transform(buf, {&out.at(c, v, 0), n});
        }
    }
    return out;
}

Heatmap range_heatmap(const RangeProfiles& profiles, const RadarConfig& config) {
    check_profiles(profiles, config);
    Heatmap h(profiles.bins, profiles.chirps);
    h.axis0 = range_axis(config, profiles.bins);
    h.axis1 = {"chirp", "index", {}};
    for (std::size_t c = 0; c < profiles.chirps; ++c) {
        h.axis1.values.push_back(static_cast<double>(c));
        for (std::size_t v = 0; v < profiles.virtuals; ++v) {
            for (std::size_t b = 0; b < profiles.bins; ++b) h.at(b, c) += std::abs(profiles.at(c, v, b));
        }
    }
    return h;
}

double doppler_resolution(const RadarConfig& config, bool per_tx) {
    const std::size_t slots = per_tx ? config.num_tx : 1;
    const std::size_t length = per_tx ? config.chirps_per_frame / config.num_tx : config.chirps_per_frame;
    return config.wavelength_m() / (2.0 * static_cast<double>(length * slots) * config.chirp_period_s());
}

Heatmap doppler_fft(const RangeProfiles& profiles, const RadarConfig& config, bool per_tx, Window window) {
    check_profiles(profiles, config);
    const std::size_t num_tx = config.num_tx;
    if (per_tx && profiles.chirps % num_tx != 0) {
        throw ConfigError("doppler_fft: chirp count must be divisible by num_tx for per-TX processing");
    }
    const std::size_t length = per_tx ? profiles.chirps / num_tx : profiles.chirps;
    const Fft fft(length);
    const std::vector<double> w = make_window(window, length);
    Heatmap h(profiles.bins, length);
    h.axis0 = range_axis(config, profiles.bins);
    h.axis1 = {"velocity", "m/s", {}};
    const double res = doppler_resolution(config, per_tx);
    for (std::size_t i = 0; i < length; ++i) {
        h.axis1.values.push_back((static_cast<double>(i) - static_cast<double>(length / 2)) * res);
    }
    std::vector<std::complex<double>> buf(length);
    for (std::size_t v = 0; v < profiles.virtuals; ++v) {
        const std::size_t tx = config.tx_of_virtual(v);
        for (std::size_t b = 0; b < profiles.bins; ++b) {
            for (std::size_t m = 0; m < length; ++m) {
                const std::size_t chirp = per_tx ? m * num_tx + tx : m;
                buf[m] = profiles.at(chirp, v, b) * w[m];
            }
            fft.transform(buf, buf);
            fftshift(std::span<std::complex<double>>(buf));
            for (std::size_t m = 0; m < length; ++m) h.at(b, m) += std::abs(buf[m]);
        }
    }
    return h;
}

AzimuthArray azimuth_array(const RadarConfig& config) {
    const std::vector<Vec3> pos = virtual_array(config);
    auto key = [](double x) { return std::llround(x * 1e6); };
    std::map<std::pair<long long, long long>, std::vector<std::size_t>> rows;
    for (std::size_t v = 0; v < pos.size(); ++v) rows[{key(pos[v].y()), key(pos[v].z())}].push_back(v);

    const std::vector<std::size_t>* best = nullptr;
    for (const auto& [k, members] : rows) {
        if (!best || members.size() > best->size()) best = &members;
    }
    AzimuthArray out;
    if (!best) throw ConfigError("azimuth array: no virtual elements");
    // Sort by x, dropping elements that duplicate an earlier position.
    std::vector<std::size_t> sorted = *best;
    std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) { return pos[a].x() < pos[b].x(); });
    for (std::size_t v : sorted) {
        if (!out.virtuals.empty() && key(pos[v].x()) == key(pos[out.virtuals.back()].x())) continue;
        out.virtuals.push_back(v);
    }
    if (out.virtuals.size() < 2) throw ConfigError("azimuth array: fewer than two distinct elements");
    out.spacing_wavelengths = pos[out.virtuals[1]].x() - pos[out.virtuals[0]].x();
    for (std::size_t i = 1; i < out.virtuals.size(); ++i) {
        const double gap = pos[out.virtuals[i]].x() - pos[out.virtuals[i - 1]].x();
        if (std::abs(gap - out.spacing_wavelengths) > 1e-6) {
            throw ConfigError("azimuth array: elements are not uniformly spaced");
        }
    }
    return out;
}

Heatmap angle_fft(const RangeProfiles& profiles, const RadarConfig& config, std::size_t padded_bins) {
    check_profiles(profiles, config);
    const AzimuthArray array = azimuth_array(config);
    if (padded_bins < array.virtuals.size()) throw ConfigError("angle_fft: padded_bins smaller than the array");
    const std::size_t loops = profiles.chirps / config.num_tx;
    if (loops == 0) throw ConfigError("angle_fft: fewer chirps than transmitters");
    const Fft fft(padded_bins, FftSign::backward);
    Heatmap h(profiles.bins, padded_bins);
    h.axis0 = range_axis(config, profiles.bins);
    h.axis1 = {"azimuth", "deg", {}};
    const double m = static_cast<double>(padded_bins);
    for (std::size_t b = 0; b < padded_bins; ++b) {
        const double s = (static_cast<double>(b) - static_cast<double>(padded_bins / 2)) / (m * array.spacing_wavelengths);
        h.axis1.values.push_back(rad_to_deg(std::asin(std::clamp(s, -1.0, 1.0))));
    }
    std::vector<std::complex<double>> buf(padded_bins);
    for (std::size_t r = 0; r < profiles.bins; ++r) {
        for (std::size_t loop = 0; loop < loops; ++loop) {
            std::fill(buf.begin(), buf.end(), std::complex<double>{});
            for (std::size_t e = 0; e < array.virtuals.size(); ++e) {
                const std::size_t v = array.virtuals[e];
                buf[e] = profiles.at(loop * config.num_tx + config.tx_of_virtual(v), v, r);
            }
            fft.transform(buf, buf);
            fftshift(std::span<std::complex<double>>(buf));
            for (std::size_t b = 0; b < padded_bins; ++b) h.at(r, b) += std::abs(buf[b]);
        }
    }
    return h;
}

RangeProfiles static_clutter_removal(const RangeProfiles& profiles, const RadarConfig& config) {
    check_profiles(profiles, config);
    const std::size_t num_tx = config.num_tx;
    RangeProfiles out = profiles;
    std::vector<std::complex<double>> mean(profiles.bins);
    for (std::size_t v = 0; v < profiles.virtuals; ++v) {
        const std::size_t tx = config.tx_of_virtual(v);
        std::size_t count = 0;
        std::fill(mean.begin(), mean.end(), std::complex<double>{});
        for (std::size_t c = tx; c < profiles.chirps; c += num_tx) {
            ++count;
            for (std::size_t b = 0; b < profiles.bins; ++b) mean[b] += profiles.at(c, v, b);
        }
        if (count < 2) throw ConfigError("static_clutter_removal: need at least two chirps per TX slot");
        for (auto& m : mean) m /= static_cast<double>(count);
        for (std::size_t c = tx; c < profiles.chirps; c += num_tx) {
            for (std::size_t b = 0; b < profiles.bins; ++b) out.at(c, v, b) -= mean[b];
        }
    }
    return out;
}

std::vector<std::vector<double>> stft_magnitude(std::span<const std::complex<double>> series, std::size_t window,
                                                std::size_t hop, std::size_t fft_size) {
    if (window == 0 || hop == 0 || fft_size < window) throw ConfigError("stft: invalid window/hop/fft size");
    if (series.size() < window) throw ConfigError("stft: series shorter than one window");
    const std::vector<double> w = make_window(Window::hann, window, true);
    const Fft fft(fft_size);
    std::vector<std::complex<double>> buf(fft_size);
    std::vector<std::vector<double>> out;
    for (std::size_t start = 0; start + window <= series.size(); start += hop) {
        std::fill(buf.begin(), buf.end(), std::complex<double>{});
        for (std::size_t i = 0; i < window; ++i) buf[i] = series[start + i] * w[i];
        fft.transform(buf, buf);
        fftshift(std::span<std::complex<double>>(buf));
        std::vector<double> mag(fft_size);
        for (std::size_t i = 0; i < fft_size; ++i) mag[i] = std::abs(buf[i]);
        out.push_back(std::move(mag));
    }
    return out;
}

Heatmap micro_doppler(std::span<const FrameCube> cubes, const RadarConfig& config, const MicroDopplerOptions& options) {
    if (options.window == 0 || options.hop == 0 || options.fft_size < options.window) {
        throw ConfigError("micro_doppler: invalid window/hop/fft size");
    }
    // Slow-time matrix [chirp][range bin] over all frames.
    std::size_t bins = 0;
    std::vector<std::vector<std::complex<double>>> slow;
    std::vector<double> times;
    for (const FrameCube& cube : cubes) {
        const RangeProfiles p = static_clutter_removal(range_fft(cube), config);
        bins = p.bins;
        for (std::size_t c = 0; c < p.chirps; ++c) {
            const std::size_t v = config.active_tx(c) * config.num_rx;
            slow.emplace_back(p.bins);
            for (std::size_t b = 0; b < p.bins; ++b) slow.back()[b] = p.at(c, v, b);
            times.push_back(cube.timestamp_s + static_cast<double>(c) * config.chirp_period_s());
        }
    }
    if (slow.size() < options.window) throw ConfigError("micro_doppler: sequence shorter than one STFT window");

    const std::size_t n_windows = (slow.size() - options.window) / options.hop + 1;
    const std::size_t f = options.fft_size;
    Heatmap h(f, n_windows);
    h.axis0 = {"velocity", "m/s", {}};
    h.axis1 = {"time", "s", {}};
    const double lambda = config.wavelength_m();
    for (std::size_t i = 0; i < f; ++i) {
        const double freq = (static_cast<double>(i) - static_cast<double>(f / 2)) /
                            (static_cast<double>(f) * config.chirp_period_s());
        h.axis0.values.push_back(freq * lambda / 2.0);
    }
    std::vector<std::complex<double>> series(options.window);
    for (std::size_t w = 0; w < n_windows; ++w) {
        const std::size_t start = w * options.hop;
        h.axis1.values.push_back(times[start + options.window / 2]);
        std::vector<double> column(f, 0.0);
        auto add_bin = [&](std::size_t b) {
            for (std::size_t i = 0; i < options.window; ++i) series[i] = slow[start + i][b];
            const auto mag = stft_magnitude(series, options.window, options.window, f);
            for (std::size_t i = 0; i < f; ++i) column[i] += mag[0][i];
        };
        if (options.selection == RangeSelection::sum_bins) {
            for (std::size_t b = 0; b < bins; ++b) add_bin(b);
        } else {
            std::size_t best = 0;
            double best_var = -1.0;
            for (std::size_t b = 0; b < bins; ++b) {
                std::complex<double> mean{};
                for (std::size_t i = 0; i < options.window; ++i) mean += slow[start + i][b];
                mean /= static_cast<double>(options.window);
                double var = 0.0;
                for (std::size_t i = 0; i < options.window; ++i) var += std::norm(slow[start + i][b] - mean);
                if (var > best_var) {
                    best_var = var;
                    best = b;
                }
            }
            add_bin(best);
        }
        for (std::size_t i = 0; i < f; ++i) h.at(i, w) = 20.0 * std::log10(std::max(column[i], options.db_floor));
    }
    h.db = true;
    return h;
}

}  // namespace mmgen
