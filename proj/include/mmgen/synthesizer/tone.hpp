#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mmgen/core/radar_config.hpp"

namespace mmgen {

/**
 * Double-precision accumulator for one chirp of one virtual channel.
 *
 * add() sums A * exp(j 2 pi theta(n / f_s)) over the chirp's samples,
 * theta being the IF phase of a return with delay tau. Successive samples
 * come from a phasor recurrence evaluated eight samples at a time.
 */
class ToneAccumulator {
public:
    explicit ToneAccumulator(std::size_t samples);

    void reset();
    void add(double amplitude, long double tau_s, const RadarConfig& config);
    /// this += scale * other.
    void add(const ToneAccumulator& other, double scale = 1.0);
    /// Overwrites `out` (size = samples()) with the accumulated values.
    void write(std::span<std::complex<float>> out) const;

    [[nodiscard]] std::size_t samples() const { return samples_; }
    [[nodiscard]] std::complex<double> sample(std::size_t n) const { return {re_[n], im_[n]}; }

private:
    std::size_t samples_;
    std::vector<double> re_;
    std::vector<double> im_;
};

/// Delay of the Tx element -> point -> Rx element path.
long double bistatic_delay(const Vec3& tx, const Vec3& point, const Vec3& rx);

}  // namespace mmgen
