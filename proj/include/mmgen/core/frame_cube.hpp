#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mmgen {

/// Complex IF samples of one radar frame, indexed [chirp][virtual][sample].
class FrameCube {
public:
    using Sample = std::complex<float>;

    FrameCube() = default;
    FrameCube(std::size_t chirps, std::size_t virtuals, std::size_t samples);

    [[nodiscard]] std::size_t chirps() const { return chirps_; }
    [[nodiscard]] std::size_t virtuals() const { return virtuals_; }
    [[nodiscard]] std::size_t samples() const { return samples_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    Sample& at(std::size_t chirp, std::size_t v, std::size_t n) { return data_[index(chirp, v, n)]; }
    [[nodiscard]] const Sample& at(std::size_t chirp, std::size_t v, std::size_t n) const {
        return data_[index(chirp, v, n)];
    }

    std::span<Sample> row(std::size_t chirp, std::size_t v) {
        return {data_.data() + index(chirp, v, 0), samples_};
    }
    [[nodiscard]] std::span<const Sample> row(std::size_t chirp, std::size_t v) const {
        return {data_.data() + index(chirp, v, 0), samples_};
    }

    std::vector<Sample>& data() { return data_; }
    [[nodiscard]] const std::vector<Sample>& data() const { return data_; }

    [[nodiscard]] double energy() const;
    [[nodiscard]] bool all_finite() const;

    /// Sample-wise sum; throws std::invalid_argument on dimension mismatch.
    FrameCube& operator+=(const FrameCube& other);

    std::size_t frame_index = 0;
    double timestamp_s = 0.0;

private:
    [[nodiscard]] std::size_t index(std::size_t chirp, std::size_t v, std::size_t n) const {
        return (chirp * virtuals_ + v) * samples_ + n;
    }

    std::size_t chirps_ = 0;
    std::size_t virtuals_ = 0;
    std::size_t samples_ = 0;
    std::vector<Sample> data_;
};

}  // namespace mmgen
