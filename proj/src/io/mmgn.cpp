#include "mmgen/io/mmgn.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>

#include "mmgen/core/errors.hpp"

namespace mmgen {

namespace {

template <typename T>
void put(std::vector<char>& buf, T value) {
    std::array<char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    buf.insert(buf.end(), bytes.begin(), bytes.end());
}

template <typename T>
T get(const char*& p) {
    std::array<char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    p += sizeof(T);
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

std::vector<char> encode_header(const SignalHeader& h) {
    std::vector<char> buf{'M', 'M', 'G', 'N'};
    put(buf, kMmgnVersion);
    put(buf, h.n_frames);
    put(buf, h.n_chirps);
    put(buf, h.n_virtual);
    put(buf, h.n_samples);
    put(buf, h.start_frequency_hz);
    put(buf, h.bandwidth_hz);
    put(buf, h.ramp_time_s);
    put(buf, h.idle_time_s);
    put(buf, h.sample_rate_hz);
    return buf;
}

SignalHeader decode_header(std::istream& in, const std::filesystem::path& path) {
    std::array<char, kMmgnHeaderBytes> raw{};
    in.read(raw.data(), raw.size());
    if (in.gcount() >= 4 && std::memcmp(raw.data(), "MMGN", 4) != 0) {
        throw IoError(path.string() + ": bad magic (not an MMGN file)");
    }
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw IoError(path.string() + ": truncated header (" + std::to_string(in.gcount()) + " of " +
                      std::to_string(raw.size()) + " bytes)");
    }
    const char* p = raw.data() + 4;
    const auto version = get<std::uint16_t>(p);
    if (version != kMmgnVersion) throw IoError(path.string() + ": unsupported version " + std::to_string(version));
    SignalHeader h;
    h.n_frames = get<std::uint32_t>(p);
    h.n_chirps = get<std::uint32_t>(p);
    h.n_virtual = get<std::uint16_t>(p);
    h.n_samples = get<std::uint32_t>(p);
    h.start_frequency_hz = get<double>(p);
    h.bandwidth_hz = get<double>(p);
    h.ramp_time_s = get<double>(p);
    h.idle_time_s = get<double>(p);
    h.sample_rate_hz = get<double>(p);
    return h;
}

}  // namespace

SignalHeader SignalHeader::from_config(const RadarConfig& config, std::uint32_t frames) {
    if (config.num_virtual() > 0xFFFF) throw ConfigError("MMGN: more than 65535 virtual channels");
    SignalHeader h;
    h.n_frames = frames;
    h.n_chirps = static_cast<std::uint32_t>(config.chirps_per_frame);
    h.n_virtual = static_cast<std::uint16_t>(config.num_virtual());
    h.n_samples = static_cast<std::uint32_t>(config.samples_per_chirp);
    h.start_frequency_hz = config.start_frequency_hz;
    h.bandwidth_hz = config.bandwidth_hz;
    h.ramp_time_s = config.ramp_time_s;
    h.idle_time_s = config.idle_time_s;
    h.sample_rate_hz = config.sample_rate_hz;
    return h;
}

void SignalHeader::check_matches(const RadarConfig& config) const {
    auto fail = [](const char* field) { throw ConfigError(std::string("signal header does not match config: ") + field); };
    if (n_chirps != config.chirps_per_frame) fail("n_chirps");
    if (n_virtual != config.num_virtual()) fail("n_virtual");
    if (n_samples != config.samples_per_chirp) fail("n_samples");
    if (start_frequency_hz != config.start_frequency_hz) fail("f0");
    if (bandwidth_hz != config.bandwidth_hz) fail("B");
    if (ramp_time_s != config.ramp_time_s) fail("T_c");
    if (idle_time_s != config.idle_time_s) fail("idle");
    if (sample_rate_hz != config.sample_rate_hz) fail("f_s");
}

std::uint64_t SignalHeader::frame_bytes() const {
    return static_cast<std::uint64_t>(n_chirps) * n_virtual * n_samples * 8u;
}

MmgnWriter::MmgnWriter(const std::filesystem::path& path, const SignalHeader& header)
    : path_(path), header_(header), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot write " + path.string());
    const auto bytes = encode_header(header_);
    out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void MmgnWriter::write(const FrameCube& cube) {
    if (cube.chirps() != header_.n_chirps || cube.virtuals() != header_.n_virtual || cube.samples() != header_.n_samples) {
        throw ConfigError("MMGN: frame dimensions do not match the header");
    }
    if (written_ >= header_.n_frames) throw ConfigError("MMGN: more frames than announced in the header");
    std::vector<char> buf;
    buf.reserve(cube.size() * 8);
    for (const auto& s : cube.data()) {
        put(buf, s.real());
        put(buf, s.imag());
    }
    out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out_) throw IoError("write failed: " + path_.string());
    ++written_;
}

void MmgnWriter::close() {
    if (written_ != header_.n_frames) {
        throw IoError("MMGN: wrote " + std::to_string(written_) + " of " + std::to_string(header_.n_frames) +
                          " frames");
    }
    out_.close();
    if (!out_) throw IoError("close failed: " + path_.string());
}

void write_mmgn(const std::filesystem::path& path, std::span<const FrameCube> frames, const RadarConfig& config) {
    MmgnWriter writer(path, SignalHeader::from_config(config, static_cast<std::uint32_t>(frames.size())));
    for (const auto& f : frames) writer.write(f);
    writer.close();
}

SignalHeader read_mmgn_header(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return decode_header(in, path);
}

SignalFile read_mmgn(const std::filesystem::path& path, double frame_rate_hz) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    SignalFile file;
    file.header = decode_header(in, path);
    const SignalHeader& h = file.header;
    const std::uint64_t bytes = h.frame_bytes();
    std::vector<char> buf(bytes);
    for (std::uint32_t f = 0; f < h.n_frames; ++f) {
        in.read(buf.data(), static_cast<std::streamsize>(bytes));
        if (static_cast<std::uint64_t>(in.gcount()) != bytes) {
            throw IoError(path.string() + ": truncated payload in frame " + std::to_string(f) + " (byte offset " +
                          std::to_string(kMmgnHeaderBytes + f * bytes + static_cast<std::uint64_t>(in.gcount())) + ")");
        }
        FrameCube cube(h.n_chirps, h.n_virtual, h.n_samples);
        const char* p = buf.data();
        for (auto& s : cube.data()) {
            const float re = get<float>(p);
            const float im = get<float>(p);
            s = {re, im};
        }
        cube.frame_index = f;
        cube.timestamp_s = frame_rate_hz > 0.0 ? static_cast<double>(f) / frame_rate_hz : 0.0;
        file.frames.push_back(std::move(cube));
    }
    if (in.peek() != std::char_traits<char>::eof()) throw IoError(path.string() + ": trailing bytes after last frame");
    return file;
}

}  // namespace mmgen
