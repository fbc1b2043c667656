#include "mmgen/metrics/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "mmgen/core/errors.hpp"

namespace mmgen {

namespace {

struct Image {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> px;

    double& at(std::size_t r, std::size_t c) { return px[r * cols + c]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return px[r * cols + c]; }
};

std::vector<double> gaussian_1d() {
    std::vector<double> g(kSsimWindow);
    double sum = 0.0;
    for (std::size_t i = 0; i < kSsimWindow; ++i) {
        const double x = static_cast<double>(i) - (static_cast<double>(kSsimWindow) - 1.0) / 2.0;
        g[i] = std::exp(-x * x / (2.0 * kSsimSigma * kSsimSigma));
        sum += g[i];
    }
    for (double& v : g) v /= sum;
    return g;
}

// Separable Gaussian filter keeping only fully overlapped positions.
Image filter_valid(const Image& in) {
    static const std::vector<double> g = gaussian_1d();
    const std::size_t k = kSsimWindow;
    Image tmp{in.rows, in.cols - k + 1, {}};
    tmp.px.assign(tmp.rows * tmp.cols, 0.0);
    for (std::size_t r = 0; r < tmp.rows; ++r) {
        for (std::size_t c = 0; c < tmp.cols; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += g[i] * in.at(r, c + i);
            tmp.at(r, c) = s;
        }
    }
    Image out{in.rows - k + 1, tmp.cols, {}};
    out.px.assign(out.rows * out.cols, 0.0);
    for (std::size_t r = 0; r < out.rows; ++r) {
        for (std::size_t c = 0; c < out.cols; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += g[i] * tmp.at(r + i, c);
            out.at(r, c) = s;
        }
    }
    return out;
}

Image map2(const Image& a, const Image& b, double (*fn)(double, double)) {
    Image out{a.rows, a.cols, std::vector<double>(a.px.size())};
    for (std::size_t i = 0; i < a.px.size(); ++i) out.px[i] = fn(a.px[i], b.px[i]);
    return out;
}

struct ScaleStats {
    double ssim = 0.0;
    double cs = 0.0;
};

ScaleStats ssim_scale(const Image& x, const Image& y) {
    const double c1 = kSsimK1 * kSsimK1;
    const double c2 = kSsimK2 * kSsimK2;
    const Image mx = filter_valid(x);
    const Image my = filter_valid(y);
    const Image mxy = filter_valid(map2(x, y, [](double a, double b) { return a * b; }));
    const Image msq = filter_valid(map2(x, y, [](double a, double b) { return a * a + b * b; }));
    double ssim_sum = 0.0;
    double cs_sum = 0.0;
    for (std::size_t i = 0; i < mx.px.size(); ++i) {
        const double num0 = mx.px[i] * my.px[i] * 2.0;
        const double den0 = mx.px[i] * mx.px[i] + my.px[i] * my.px[i];
        const double luminance = (num0 + c1) / (den0 + c1);
        const double num1 = mxy.px[i] * 2.0;
        const double den1 = msq.px[i];
        const double cs = (num1 - num0 + c2) / (den1 - den0 + c2);
        ssim_sum += luminance * cs;
        cs_sum += cs;
    }
    const double n = static_cast<double>(mx.px.size());
    return {ssim_sum / n, cs_sum / n};
}

Image downsample(const Image& in) {
    const std::size_t rows = (in.rows + 1) / 2;
    const std::size_t cols = (in.cols + 1) / 2;
    Image out{rows, cols, std::vector<double>(rows * cols)};
    auto px = [&](std::size_t r, std::size_t c) { return in.at(std::min(r, in.rows - 1), std::min(c, in.cols - 1)); };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            out.at(r, c) = (px(2 * r, 2 * c) + px(2 * r, 2 * c + 1) + px(2 * r + 1, 2 * c) + px(2 * r + 1, 2 * c + 1)) / 4.0;
        }
    }
    return out;
}

void check_same_dims(const Heatmap& a, const Heatmap& b) {
    if (a.rows != b.rows || a.cols != b.cols || a.values.size() != b.values.size()) {
        throw ConfigError("dimension mismatch: " + std::to_string(a.rows) + "x" + std::to_string(a.cols) + " vs " +
                          std::to_string(b.rows) + "x" + std::to_string(b.cols));
    }
}

std::pair<double, double> mean_sd(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

void aggregate(SimilarityReport& r, bool with_ssim) {
    std::vector<double> ssim;
    std::vector<double> mae;
    for (const auto& p : r.pairs) {
        if (!p.ok()) continue;
        ssim.push_back(p.ms_ssim);
        mae.push_back(p.mae);
    }
    r.pair_count = mae.size();
    std::tie(r.mae_mean, r.mae_sd) = mean_sd(mae);
    if (with_ssim) std::tie(r.ms_ssim_mean, r.ms_ssim_sd) = mean_sd(ssim);
}

}  // namespace

std::size_t ms_ssim_scale_count(std::size_t rows, std::size_t cols) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < 5; ++k) {
        if (std::min(rows, cols) < kSsimWindow) break;
        ++count;
        rows = (rows + 1) / 2;
        cols = (cols + 1) / 2;
    }
    return count;
}

double ms_ssim_normalized(std::span<const double> a, std::span<const double> b, std::size_t rows, std::size_t cols) {
    if (a.size() != rows * cols || b.size() != rows * cols) throw ConfigError("ms_ssim: size mismatch");
    const std::size_t scales = ms_ssim_scale_count(rows, cols);
    if (scales == 0) throw ConfigError("ms_ssim: images must be at least 11x11");
    // the standard weights sum to 1.0001; keep them as published at full depth
    double weight_sum = 1.0;
    if (scales < 5) {
        weight_sum = 0.0;
        for (std::size_t k = 0; k < scales; ++k) weight_sum += kMsSsimWeights[k];
    }

    Image x{rows, cols, {a.begin(), a.end()}};
    Image y{rows, cols, {b.begin(), b.end()}};
    double result = 1.0;
    for (std::size_t k = 0; k < scales; ++k) {
        if (k > 0) {
            x = downsample(x);
            y = downsample(y);
        }
        const ScaleStats s = ssim_scale(x, y);
        const double term = k + 1 == scales ? s.ssim : s.cs;
        result *= std::pow(std::max(term, 0.0), kMsSsimWeights[k] / weight_sum);
    }
    return result;
}

double ms_ssim(const Heatmap& a, const Heatmap& b) {
    check_same_dims(a, b);
    const Heatmap na = normalize(a);
    const Heatmap nb = normalize(b);
    return ms_ssim_normalized(na.values, nb.values, a.rows, a.cols);
}

double mean_absolute_error(const Heatmap& a, const Heatmap& b) {
    check_same_dims(a, b);
    if (a.values.empty()) throw ConfigError("mae: empty heatmaps");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) sum += std::abs(a.values[i] - b.values[i]);
    return sum / static_cast<double>(a.values.size());
}

SimilarityReport mae_sd(std::span<const HeatmapPair> pairs) {
    if (pairs.empty()) throw ConfigError("mae_sd: no pairs");
    SimilarityReport r;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        PairScore p;
        p.name = std::to_string(i);
        p.mae = mean_absolute_error(pairs[i].first, pairs[i].second);
        r.pairs.push_back(p);
    }
    aggregate(r, false);
    return r;
}

SimilarityReport compare_heatmaps(std::span<const HeatmapPair> pairs, std::span<const std::string> names) {
    if (pairs.empty()) throw ConfigError("compare: no pairs");
    SimilarityReport r;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        PairScore p;
        p.name = i < names.size() ? names[i] : std::to_string(i);
        try {
            p.ms_ssim = ms_ssim(pairs[i].first, pairs[i].second);
            p.mae = mean_absolute_error(normalize(pairs[i].first), normalize(pairs[i].second));
        } catch (const std::exception& e) {
            p.error = e.what();
        }
        r.pairs.push_back(p);
    }
    aggregate(r, true);
    return r;
}

nlohmann::json SimilarityReport::to_json() const {
    nlohmann::json j;
    j["pairs"] = nlohmann::json::array();
    for (const auto& p : pairs) {
        nlohmann::json e{{"name", p.name}};
        if (p.ok()) {
            e["ms_ssim"] = p.ms_ssim;
            e["mae"] = p.mae;
        } else {
            e["error"] = p.error;
        }
        j["pairs"].push_back(e);
    }
    j["pair_count"] = pair_count;
    j["ms_ssim_mean"] = ms_ssim_mean;
    j["ms_ssim_sd"] = ms_ssim_sd;
    j["mae_mean"] = mae_mean;
    j["mae_sd"] = mae_sd;
    return j;
}

}  // namespace mmgen
