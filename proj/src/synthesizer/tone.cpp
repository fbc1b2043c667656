#include "mmgen/synthesizer/tone.hpp"

#include <cmath>

#include "mmgen/core/constants.hpp"
#include "mmgen/reflectance/reflectance.hpp"

namespace mmgen {

namespace {

constexpr std::size_t kLanes = 8;

std::size_t padded(std::size_t n) { return (n + kLanes - 1) / kLanes * kLanes; }

}  // namespace

ToneAccumulator::ToneAccumulator(std::size_t samples)
    : samples_(samples), re_(padded(samples), 0.0), im_(padded(samples), 0.0) {}

void ToneAccumulator::reset() {
    std::fill(re_.begin(), re_.end(), 0.0);
    std::fill(im_.begin(), im_.end(), 0.0);
}

void ToneAccumulator::add(double amplitude, long double tau_s, const RadarConfig& config) {
    const PhaseRamp ramp = phase_ramp(tau_s, config);
    const double step = ramp.rate_hz / config.sample_rate_hz;  // cycles per sample
    const double step_frac = step - std::floor(step);

    double br[kLanes];
    double bi[kLanes];
    br[0] = amplitude * std::cos(kTwoPi * ramp.offset_cycles);
    bi[0] = amplitude * std::sin(kTwoPi * ramp.offset_cycles);
    const double wr = std::cos(kTwoPi * step_frac);
    const double wi = std::sin(kTwoPi * step_frac);
    for (std::size_t k = 1; k < kLanes; ++k) {
        br[k] = br[k - 1] * wr - bi[k - 1] * wi;
        bi[k] = br[k - 1] * wi + bi[k - 1] * wr;
    }
    const double block = kLanes * step_frac - std::floor(kLanes * step_frac);
    const double w8r = std::cos(kTwoPi * block);
    const double w8i = std::sin(kTwoPi * block);

    double* re = re_.data();
    double* im = im_.data();
    for (std::size_t j = 0; j < re_.size(); j += kLanes) {
        for (std::size_t k = 0; k < kLanes; ++k) {
            re[j + k] += br[k];
            im[j + k] += bi[k];
            const double r = br[k] * w8r - bi[k] * w8i;
            bi[k] = br[k] * w8i + bi[k] * w8r;
            br[k] = r;
        }
    }
}

void ToneAccumulator::add(const ToneAccumulator& other, double scale) {
    for (std::size_t n = 0; n < re_.size(); ++n) {
        re_[n] += scale * other.re_[n];
        im_[n] += scale * other.im_[n];
    }
}

void ToneAccumulator::write(std::span<std::complex<float>> out) const {
    for (std::size_t n = 0; n < samples_; ++n) {
        out[n] = {static_cast<float>(re_[n]), static_cast<float>(im_[n])};
    }
}

long double bistatic_delay(const Vec3& tx, const Vec3& point, const Vec3& rx) {
    const long double path = static_cast<long double>((point - tx).norm()) + (point - rx).norm();
    return path / static_cast<long double>(kSpeedOfLight);
}

}  // namespace mmgen
