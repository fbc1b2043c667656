#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "mmgen/core/frame_cube.hpp"
#include "mmgen/core/radar_config.hpp"

namespace mmgen {

/// Little-endian MMGN layout: "MMGN", u16 version, u32 n_frames,
/// u32 n_chirps, u16 n_virtual, u32 n_samples, f64 f0, B, T_c, idle, f_s,
/// then complex samples as (f32 re, f32 im) ordered frame, chirp,
/// virtual, sample.
struct SignalHeader {
    std::uint32_t n_frames = 0;
    std::uint32_t n_chirps = 0;
    std::uint16_t n_virtual = 0;
    std::uint32_t n_samples = 0;
    double start_frequency_hz = 0.0;
    double bandwidth_hz = 0.0;
    double ramp_time_s = 0.0;
    double idle_time_s = 0.0;
    double sample_rate_hz = 0.0;

    static SignalHeader from_config(const RadarConfig& config, std::uint32_t frames);
    /// Throws ConfigError naming the first field that differs from `config`.
    void check_matches(const RadarConfig& config) const;
    [[nodiscard]] std::uint64_t frame_bytes() const;
};

inline constexpr std::uint16_t kMmgnVersion = 1;
inline constexpr std::size_t kMmgnHeaderBytes = 60;

/// Streams frames to disk; close() checks that the announced count was written.
class MmgnWriter {
public:
    MmgnWriter(const std::filesystem::path& path, const SignalHeader& header);
    void write(const FrameCube& cube);
    void close();

private:
    std::filesystem::path path_;
    SignalHeader header_;
    std::ofstream out_;
    std::uint32_t written_ = 0;
};

void write_mmgn(const std::filesystem::path& path, std::span<const FrameCube> frames, const RadarConfig& config);

struct SignalFile {
    SignalHeader header;
    std::vector<FrameCube> frames;
};

/// Throws IoError on bad magic, unsupported version or truncation. Frame
/// timestamps are frame_index / frame_rate_hz when a rate is given.
SignalHeader read_mmgn_header(const std::filesystem::path& path);
SignalFile read_mmgn(const std::filesystem::path& path, double frame_rate_hz = 0.0);

}  // namespace mmgen
