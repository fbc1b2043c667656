#include <doctest.h>

#include <cmath>

#include "mmgen/core/errors.hpp"
#include "mmgen/metrics/similarity.hpp"
#include "ms_ssim_pairs.hpp"
#include "test_support.hpp"

using namespace mmgen;

namespace {

using test::Image;
using test::kTfReference;
using test::make_pair;

/// Straightforward re-derivation: explicit 11x11 Gaussian sums per output pixel.
double oracle_ms_ssim(Image x, Image y) {
    double g[11][11], total = 0.0;
    for (int i = 0; i < 11; ++i) {
        for (int j = 0; j < 11; ++j) {
            g[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2.0 * 1.5 * 1.5));
            total += g[i][j];
        }
    }
    for (auto& row : g) {
        for (double& w : row) w /= total;
    }
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    const double weights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    double result = 1.0;
    for (int scale = 0; scale < 5; ++scale) {
        if (scale > 0) {
            auto down = [](const Image& im) {
                Image out;
                out.rows = (im.rows + 1) / 2;
                out.cols = (im.cols + 1) / 2;
                for (std::size_t r = 0; r < out.rows; ++r) {
                    for (std::size_t c = 0; c < out.cols; ++c) {
                        double s = 0.0;
                        for (std::size_t dr = 0; dr < 2; ++dr) {
                            for (std::size_t dc = 0; dc < 2; ++dc) {
                                s += im.at(std::min(2 * r + dr, im.rows - 1), std::min(2 * c + dc, im.cols - 1));
                            }
                        }
                        out.v.push_back(s / 4.0);
                    }
                }
                return out;
            };
            x = down(x);
            y = down(y);
        }
        double cs_sum = 0.0, ssim_sum = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r + 11 <= x.rows; ++r) {
            for (std::size_t c = 0; c + 11 <= x.cols; ++c) {
                double mx = 0, my = 0, xx = 0, yy = 0, xy = 0;
                for (int i = 0; i < 11; ++i) {
                    for (int j = 0; j < 11; ++j) {
                        const double a = x.at(r + i, c + j), b = y.at(r + i, c + j);
                        mx += g[i][j] * a;
                        my += g[i][j] * b;
                        xx += g[i][j] * a * a;
                        yy += g[i][j] * b * b;
                        xy += g[i][j] * a * b;
                    }
                }
                const double lum = (2 * mx * my + c1) / (mx * mx + my * my + c1);
                const double cs = (2 * (xy - mx * my) + c2) / ((xx - mx * mx) + (yy - my * my) + c2);
                cs_sum += cs;
                ssim_sum += lum * cs;
                ++count;
            }
        }
        const double term = std::max(0.0, (scale < 4 ? cs_sum : ssim_sum) / double(count));
        result *= std::pow(term, weights[scale]);
    }
    return result;
}

Heatmap to_heatmap(const Image& im) {
    Heatmap h(im.rows, im.cols);
    h.values = im.v;
    h.axis0 = {"row", "index", {}};
    h.axis1 = {"col", "index", {}};
    for (std::size_t r = 0; r < im.rows; ++r) h.axis0.values.push_back(double(r));
    for (std::size_t c = 0; c < im.cols; ++c) h.axis1.values.push_back(double(c));
    return h;
}

Heatmap random_heatmap(test::SplitMix64& rng, std::size_t rows, std::size_t cols) {
    Image im;
    im.rows = rows;
    im.cols = cols;
    for (std::size_t i = 0; i < rows * cols; ++i) im.v.push_back(rng.uniform());
    return to_heatmap(im);
}

Heatmap checkerboard(std::size_t n, std::size_t cell, bool invert) {
    Image im;
    im.rows = im.cols = n;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) im.v.push_back(((r / cell + c / cell) % 2 == 0) != invert ? 1.0 : 0.0);
    }
    return to_heatmap(im);
}

}  // namespace

TEST_CASE("ms-ssim of an image with itself is one") {
    const auto [a, b] = make_pair(3);
    CHECK(ms_ssim(to_heatmap(a), to_heatmap(a)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("inverted checkerboard scores low") {
    const double s = ms_ssim(checkerboard(192, 8, false), checkerboard(192, 8, true));
    CHECK(s < 0.2);
    CHECK(s >= 0.0);
}

TEST_CASE("ms-ssim matches TensorFlow on ten pairs") {
    for (int k = 0; k < 10; ++k) {
        const auto [a, b] = make_pair(k);
        INFO("pair " << k);
        CHECK(std::abs(ms_ssim_normalized(a.v, b.v, a.rows, a.cols) - kTfReference[k]) <= 1e-3);
    }
}

TEST_CASE("ms-ssim matches a direct-sum oracle") {
    for (int k : {0, 5, 9}) {
        const auto [a, b] = make_pair(k);
        CHECK(std::abs(ms_ssim_normalized(a.v, b.v, a.rows, a.cols) - oracle_ms_ssim(a, b)) <= 1e-9);
    }
}

TEST_CASE("ms-ssim is symmetric and affine invariant") {
    test::SplitMix64 rng(77);
    for (int i = 0; i < 5; ++i) {
        const Heatmap a = random_heatmap(rng, 180, 190);
        Heatmap b = a;
        for (double& v : b.values) v = std::clamp(v + 0.3 * (rng.uniform() - 0.5), 0.0, 1.0);
        const double ab = ms_ssim(a, b);
        CHECK(std::abs(ab - ms_ssim(b, a)) <= 1e-9);
        Heatmap sa = a, sb = b;
        const double scale = rng.uniform(0.1, 100.0), shift = rng.uniform(-50.0, 50.0);
        for (double& v : sa.values) v = scale * v + shift;
        for (double& v : sb.values) v = scale * v + shift;
        CHECK(std::abs(ms_ssim(sa, sb) - ab) <= 1e-9);
        CHECK((ab >= 0.0 && ab <= 1.0));
    }
}

TEST_CASE("small heatmaps drop scales") {
    CHECK(ms_ssim_scale_count(176, 176) == 5);
    CHECK(ms_ssim_scale_count(175, 400) == 5);
    CHECK(ms_ssim_scale_count(160, 400) == 4);
    CHECK(ms_ssim_scale_count(44, 44) == 3);
    CHECK(ms_ssim_scale_count(11, 11) == 1);
    CHECK(ms_ssim_scale_count(10, 50) == 0);
    test::SplitMix64 rng(5);
    const Heatmap a = random_heatmap(rng, 64, 85);
    CHECK(ms_ssim(a, a) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS((void)ms_ssim(random_heatmap(rng, 8, 8), random_heatmap(rng, 8, 8)), ConfigError);
    CHECK_THROWS_AS((void)ms_ssim(random_heatmap(rng, 64, 85), random_heatmap(rng, 64, 86)), ConfigError);
}

TEST_CASE("mae examples") {
    Heatmap zeros(20, 30), ones(20, 30);
    std::fill(ones.values.begin(), ones.values.end(), 1.0);
    CHECK(mean_absolute_error(zeros, ones) == 1.0);
    std::vector<HeatmapPair> same = {{ones, ones}, {zeros, zeros}};
    const SimilarityReport r = mae_sd(same);
    CHECK(r.mae_mean == 0.0);
    CHECK(r.mae_sd == 0.0);
    CHECK(r.pair_count == 2);
    CHECK_THROWS_AS((void)mae_sd(std::span<const HeatmapPair>{}), ConfigError);
}

TEST_CASE("mae matches a double-loop oracle") {
    test::SplitMix64 rng(12);
    std::vector<HeatmapPair> pairs;
    std::vector<double> expected;
    for (int i = 0; i < 8; ++i) {
        const std::size_t rows = 5 + i * 7, cols = 9 + i * 3;
        HeatmapPair p{random_heatmap(rng, rows, cols), random_heatmap(rng, rows, cols)};
        double s = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) s += std::abs(p.first.at(r, c) - p.second.at(r, c));
        }
        expected.push_back(s / double(rows * cols));
        pairs.push_back(std::move(p));
    }
    const SimilarityReport r = mae_sd(pairs);
    double mean = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(std::abs(r.pairs[i].mae - expected[i]) <= 1e-12);
        mean += expected[i];
    }
    mean /= double(expected.size());
    double var = 0.0;
    for (double e : expected) var += (e - mean) * (e - mean);
    CHECK(std::abs(r.mae_mean - mean) <= 1e-12);
    CHECK(std::abs(r.mae_sd - std::sqrt(var / double(expected.size()))) <= 1e-12);
}

TEST_CASE("mae obeys the triangle inequality") {
    test::SplitMix64 rng(19);
    for (int i = 0; i < 50; ++i) {
        const Heatmap a = random_heatmap(rng, 12, 17), b = random_heatmap(rng, 12, 17), c = random_heatmap(rng, 12, 17);
        CHECK(mean_absolute_error(a, c) <= mean_absolute_error(a, b) + mean_absolute_error(b, c) + 1e-12);
    }
    CHECK_THROWS_AS((void)mean_absolute_error(Heatmap(3, 4), Heatmap(4, 3)), ConfigError);
}

TEST_CASE("compare keeps failed pairs as error entries") {
    test::SplitMix64 rng(2);
    const Heatmap a = random_heatmap(rng, 40, 40);
    std::vector<HeatmapPair> pairs = {{a, a}, {a, random_heatmap(rng, 40, 41)}};
    const std::vector<std::string> names = {"rd", "ra"};
    const SimilarityReport r = compare_heatmaps(pairs, names);
    REQUIRE(r.pairs.size() == 2);
    CHECK(r.pairs[0].ok());
    CHECK(r.pairs[0].ms_ssim == doctest::Approx(1.0));
    CHECK_FALSE(r.pairs[1].ok());
    CHECK(r.pair_count == 1);
    CHECK(r.ms_ssim_mean == doctest::Approx(1.0));
    const nlohmann::json j = r.to_json();
    CHECK(j["pairs"].size() == 2);
    CHECK(j["pairs"][1].contains("error"));
    CHECK(j["pair_count"] == 1);
}
