#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mmgen/dsp/heatmap.hpp"

namespace mmgen {

inline constexpr std::size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;
inline constexpr double kMsSsimWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

/**
 * Multi-scale SSIM of two equally sized images with values in [0, 1]
 * (max_val = 1). Each scale filters with an 11x11 Gaussian (sigma 1.5,
 * valid region only); between scales odd dimensions are padded by
 * repeating the last row/column and the image is 2x2 average-pooled.
 * Contrast-structure terms of the first scales and the full SSIM of the
 * last scale are clipped at zero and combined with the standard weights.
 * Scales whose smaller side would fall below 11 are dropped and the
 * remaining weights rescaled to sum to one.
 */
double ms_ssim_normalized(std::span<const double> a, std::span<const double> b, std::size_t rows, std::size_t cols);

/// Number of scales used for an image of the given size (0 if too small).
std::size_t ms_ssim_scale_count(std::size_t rows, std::size_t cols);

/// Min-max normalizes each heatmap, then ms_ssim_normalized. Throws
/// ConfigError on dimension mismatch or images smaller than 11x11.
double ms_ssim(const Heatmap& a, const Heatmap& b);

/// mean |a - b|; dims must match.
double mean_absolute_error(const Heatmap& a, const Heatmap& b);

struct PairScore {
    std::string name;
    double ms_ssim = 0.0;
    double mae = 0.0;
    std::string error;  // non-empty when the pair could not be scored

    [[nodiscard]] bool ok() const { return error.empty(); }
};

struct SimilarityReport {
    std::vector<PairScore> pairs;
    double ms_ssim_mean = 0.0;
    double ms_ssim_sd = 0.0;
    double mae_mean = 0.0;
    double mae_sd = 0.0;
    std::size_t pair_count = 0;  // scored pairs

    [[nodiscard]] nlohmann::json to_json() const;
};

using HeatmapPair = std::pair<Heatmap, Heatmap>;

/// MAE per pair (inputs used as given, expected in [0, 1]) with mean and
/// population SD across pairs. Throws ConfigError for an empty list.
SimilarityReport mae_sd(std::span<const HeatmapPair> pairs);

/// MS-SSIM and MAE per pair on min-max normalized inputs. Pairs that fail
/// (e.g. mismatched dims) are kept as error entries and left out of the
/// aggregates.
SimilarityReport compare_heatmaps(std::span<const HeatmapPair> pairs, std::span<const std::string> names);

}  // namespace mmgen
