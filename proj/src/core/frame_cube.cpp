#include "mmgen/core/frame_cube.hpp"

#include <cmath>
#include <stdexcept>

namespace mmgen {

FrameCube::FrameCube(std::size_t chirps, std::size_t virtuals, std::size_t samples)
    : chirps_(chirps), virtuals_(virtuals), samples_(samples), data_(chirps * virtuals * samples) {}

double FrameCube::energy() const {
    double e = 0.0;
    for (const auto& s : data_) e += std::norm(std::complex<double>(s));
    return e;
}

bool FrameCube::all_finite() const {
    for (const auto& s : data_) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) return false;
    }
    return true;
}

FrameCube& FrameCube::operator+=(const FrameCube& other) {
    if (other.chirps_ != chirps_ || other.virtuals_ != virtuals_ || other.samples_ != samples_) {
        throw std::invalid_argument("FrameCube dimensions differ");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

}  // namespace mmgen
