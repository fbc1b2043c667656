#include "mmgen/dsp/fft.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace mmgen {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan cached_plan(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    std::lock_guard lock(planner_mutex());
    auto it = cache.find({n, sign});
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fft: planner failed");
    cache.emplace(std::make_pair(n, sign), plan);
    return plan;
}

}  // namespace

Fft::Fft(std::size_t n, FftSign sign) : n_(n) {
    if (n == 0) throw std::invalid_argument("fft: zero length");
    plan_ = cached_plan(n, sign == FftSign::forward ? FFTW_FORWARD : FFTW_BACKWARD);
}

void Fft::transform(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("fft: length mismatch");
    if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
    fftw_execute_dft(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex*>(out.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

void fftshift(std::span<std::complex<double>> data) {
    std::rotate(data.begin(), data.begin() + static_cast<std::ptrdiff_t>((data.size() + 1) / 2), data.end());
}

void fftshift(std::span<double> data) {
    std::rotate(data.begin(), data.begin() + static_cast<std::ptrdiff_t>((data.size() + 1) / 2), data.end());
}

}  // namespace mmgen
