#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace mmgen {

enum class FftSign { forward = -1, backward = +1 };

/// Unnormalized 1-D complex DFT of fixed length, backed by FFTW. Plans are
/// created once per (length, sign) and shared; execution is thread-safe and
/// deterministic. `in` and `out` may alias.
class Fft {
public:
    explicit Fft(std::size_t n, FftSign sign = FftSign::forward);

    void transform(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
    [[nodiscard]] std::size_t size() const { return n_; }

private:
    std::size_t n_;
    void* plan_;
};

/// Rotates so that the zero-frequency bin lands at index n / 2.
void fftshift(std::span<std::complex<double>> data);
void fftshift(std::span<double> data);

}  // namespace mmgen
