#include "mmgen/dsp/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <png.h>

#include "mmgen/core/errors.hpp"

namespace mmgen {

namespace {

std::string axis_label(const Axis& a) { return a.name + "[" + a.unit + "]"; }

Axis parse_axis_label(const std::string& label) {
    Axis a;
    const auto open = label.find('[');
    const auto close = label.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        a.name = label;
        return a;
    }
    a.name = label.substr(0, open);
    a.unit = label.substr(open + 1, close - open - 1);
    return a;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    return out;
}

double parse_number(const std::string& s, const std::filesystem::path& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() && s.find_first_not_of(" \r\t", used) != std::string::npos) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
    }
}

}  // namespace

void Heatmap::validate() const {
    if (values.size() != rows * cols) throw ConfigError("heatmap: value count does not match dims");
    if (!axis0.values.empty() && axis0.values.size() != rows) throw ConfigError("heatmap: axis0 length mismatch");
    if (!axis1.values.empty() && axis1.values.size() != cols) throw ConfigError("heatmap: axis1 length mismatch");
    for (double v : values) {
        if (!std::isfinite(v)) throw NumericError("heatmap: non-finite value");
    }
}

std::size_t Heatmap::argmax() const {
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

double Heatmap::max_value() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

Heatmap normalize(const Heatmap& h) {
    Heatmap out = h;
    if (h.values.empty()) return out;
    const auto [lo, hi] = std::minmax_element(h.values.begin(), h.values.end());
    const double range = *hi - *lo;
    for (double& v : out.values) v = range > 0.0 ? (v - *lo) / range : 0.0;
    out.normalized = true;
    return out;
}

Heatmap to_db(const Heatmap& h, double floor) {
    Heatmap out = h;
    for (double& v : out.values) v = 20.0 * std::log10(std::max(std::abs(v), floor));
    out.db = true;
    return out;
}

void write_csv(const std::filesystem::path& path, const Heatmap& h) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    out << axis_label(h.axis0) << '\\' << axis_label(h.axis1);
    for (std::size_t c = 0; c < h.cols; ++c) {
        out << ',' << (c < h.axis1.values.size() ? h.axis1.values[c] : static_cast<double>(c));
    }
    out << '\n';
    for (std::size_t r = 0; r < h.rows; ++r) {
        out << (r < h.axis0.values.size() ? h.axis0.values[r] : static_cast<double>(r));
        for (std::size_t c = 0; c < h.cols; ++c) out << ',' << h.at(r, c);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

Heatmap read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
    const auto header = split(line, ',');
    if (header.empty()) throw ConfigError(path.string() + ":1: missing header");
    Heatmap h;
    const auto slash = header[0].find('\\');
    h.axis0 = parse_axis_label(header[0].substr(0, slash));
    if (slash != std::string::npos) h.axis1 = parse_axis_label(header[0].substr(slash + 1));
    for (std::size_t c = 1; c < header.size(); ++c) h.axis1.values.push_back(parse_number(header[c], path, 1));
    h.cols = header.size() - 1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line, ',');
        if (cells.size() != h.cols + 1) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(h.cols + 1) + " cells");
        }
        h.axis0.values.push_back(parse_number(cells[0], path, line_no));
        for (std::size_t c = 1; c < cells.size(); ++c) h.values.push_back(parse_number(cells[c], path, line_no));
        ++h.rows;
    }
    return h;
}

void write_png(const std::filesystem::path& path, const Heatmap& h) {
    if (h.rows == 0 || h.cols == 0) throw ConfigError("write_png: empty heatmap");
    const Heatmap n = normalize(h);
    std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!file) throw IoError("cannot write " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialisation failed");
    }
    std::vector<png_byte> pixels(h.rows * h.cols);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        pixels[i] = static_cast<png_byte>(std::lround(std::clamp(n.values[i], 0.0, 1.0) * 255.0));
    }
    std::vector<png_bytep> row_ptrs(h.rows);
    for (std::size_t r = 0; r < h.rows; ++r) row_ptrs[r] = pixels.data() + r * h.cols;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng write failed: " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(h.cols), static_cast<png_uint_32>(h.rows), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace mmgen
