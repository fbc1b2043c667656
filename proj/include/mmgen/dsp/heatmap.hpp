#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace mmgen {

struct Axis {
    std::string name;
    std::string unit;
    std::vector<double> values;
};

/// Real 2-D signature, row-major: rows follow axis0, columns axis1.
struct Heatmap {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    Axis axis0;
    Axis axis1;
    bool db = false;
    bool normalized = false;

    Heatmap() = default;
    Heatmap(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    /// Throws NumericError on non-finite values, ConfigError on axis/size mismatch.
    void validate() const;
    [[nodiscard]] std::size_t argmax() const;
    [[nodiscard]] double max_value() const;
};

/// Min-max scaling to [0, 1]; a constant heatmap maps to zeros.
Heatmap normalize(const Heatmap& h);

/// 20 log10(max(|x|, floor)).
Heatmap to_db(const Heatmap& h, double floor = 1e-15);

/// First line: "<axis0 name>[unit]\<axis1 name>[unit]" then axis1 values;
/// each following line: axis0 value then the row.
void write_csv(const std::filesystem::path& path, const Heatmap& h);
Heatmap read_csv(const std::filesystem::path& path);

/// 8-bit grayscale PNG of the min-max normalized values, row 0 at the top.
void write_png(const std::filesystem::path& path, const Heatmap& h);

}  // namespace mmgen
