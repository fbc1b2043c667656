#include "mmgen/synthesizer/synthesizer.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "mmgen/core/constants.hpp"
#include "mmgen/core/errors.hpp"
#include "mmgen/core/parallel.hpp"
#include "mmgen/reflectance/reflectance.hpp"

namespace mmgen {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> face_order(std::span<const ReflectionPoint> points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points[a].source_face_id < points[b].source_face_id;
    });
    return order;
}

std::vector<double> amplitudes_of(std::span<const ReflectionPoint> points, const RadarConfig& config,
                                  ReflectionMode mode, double psi) {
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = point_amplitude(points[i], config, mode, psi);
    return out;
}

std::vector<Vec3> centroids_of(std::span<const ReflectionPoint> points) {
    std::vector<Vec3> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = points[i].centroid;
    return out;
}

void accumulate_entries(std::span<const HrppEntry> entries, const RadarConfig& config, std::size_t v,
                        ToneAccumulator& acc, double sign) {
    const Vec3 tx = config.tx_position_m(config.tx_of_virtual(v));
    const Vec3 rx = config.rx_position_m(config.rx_of_virtual(v));
    for (const auto& e : entries) {
        const long double path = static_cast<long double>((e.first_point - tx).norm()) +
                                 (e.bounce_point - e.first_point).norm() + (rx - e.bounce_point).norm();
        acc.add(sign * multipath_amplitude(e, config), path / static_cast<long double>(kSpeedOfLight), config);
    }
}

}  // namespace

double point_amplitude(const ReflectionPoint& point, const RadarConfig& config, ReflectionMode mode, double psi_rad) {
    const PathGeometry g = monostatic_geometry(point.centroid, point.unit_normal);
    const double a_o = orientation_coeff(g, config.specular_spread_rad);
    const double a_m = material_coeff(fresnel_coeffs(point.material, config.wavelength_m(), g.grazing_angle_rad), psi_rad);
    return mode == ReflectionMode::human ? amplitude_human(g, point.area_m2, a_o, a_m, config)
                                         : amplitude_env(g, point.area_m2, a_o, a_m, config);
}

void accumulate_points(std::span<const ReflectionPoint> points, std::span<const double> amplitudes,
                       const RadarConfig& config, std::size_t v, ToneAccumulator& acc) {
    const Vec3 tx = config.tx_position_m(config.tx_of_virtual(v));
    const Vec3 rx = config.rx_position_m(config.rx_of_virtual(v));
    for (std::size_t i : face_order(points)) {
        acc.add(amplitudes[i], bistatic_delay(tx, points[i].centroid, rx), config);
    }
}

std::vector<std::vector<std::complex<float>>> synthesize_points(std::span<const ReflectionPoint> points,
                                                                const RadarConfig& config, ReflectionMode mode,
                                                                std::span<const std::size_t> virtuals,
                                                                double psi_rad) {
    const std::vector<double> amps = amplitudes_of(points, config, mode, psi_rad);
    ToneAccumulator acc(config.samples_per_chirp);
    std::vector<std::vector<std::complex<float>>> out;
    out.reserve(virtuals.size());
    for (std::size_t v : virtuals) {
        if (v >= config.num_virtual()) throw ConfigError("synthesize_points: virtual channel out of range");
        acc.reset();
        accumulate_points(points, amps, config, v, acc);
        out.emplace_back(config.samples_per_chirp);
        acc.write(out.back());
    }
    return out;
}

std::vector<std::vector<std::complex<float>>> synthesize_points(std::span<const ReflectionPoint> points,
                                                                const RadarConfig& config, ReflectionMode mode,
                                                                double psi_rad) {
    std::vector<std::size_t> all(config.num_virtual());
    std::iota(all.begin(), all.end(), 0);
    return synthesize_points(points, config, mode, all, psi_rad);
}

SceneState make_scene_state(const MeshSequence* human, const TriangleMesh* environment, double hpr_gamma) {
    SceneState state;
    state.human = human;
    if (human) human->validate();
    if (environment && !environment->faces.empty()) {
        const std::vector<ReflectionPoint> all = facet_attributes(*environment);
        const std::vector<double> radii = insphere_radii(*environment);
        for (std::size_t i : hpr_visible(centroids_of(all), state.radar_position, hpr_gamma)) {
            state.environment_points.push_back(all[i]);
            state.environment_radii.push_back(radii[i]);
        }
    }
    return state;
}

FrameSynthesizer::FrameSynthesizer(RadarConfig config, SceneState scene, SynthesisOptions options)
    : config_(std::move(config)), scene_(std::move(scene)), options_(options) {
    config_.validate();
    if (!options_.human && !options_.environment && !options_.multipath) {
        throw ConfigError("synthesis: at least one stage must be enabled");
    }
    if (scene_.environment_points.size() != scene_.environment_radii.size()) {
        throw ConfigError("synthesis: environment points and radii differ in length");
    }
    if (scene_.human) scene_.human->validate();
}

void FrameSynthesizer::prepare_environment() {
    if (env_ready_) return;
    const std::size_t nv = config_.num_virtual();
    env_rows_.assign(nv, std::vector<std::complex<float>>(config_.samples_per_chirp));
    const std::vector<double> amps =
        amplitudes_of(scene_.environment_points, config_, ReflectionMode::environment, options_.psi_rad);
    parallel_for(nv, options_.workers, [&](std::size_t v) {
        ToneAccumulator acc(config_.samples_per_chirp);
        accumulate_points(scene_.environment_points, amps, config_, v, acc);
        acc.write(env_rows_[v]);
    });
    env_ready_ = true;
}

void FrameSynthesizer::prepare_multipath() {
    if (multipath_ready_) return;
    HrppOptions hopt;
    hopt.cone_deg = options_.cone_deg;
    hopt.psi_rad = options_.psi_rad;
    hopt.radar_position = scene_.radar_position;
    hopt.workers = options_.workers;
    static_table_ = build_hrpp(scene_.environment_points, scene_.environment_radii, config_, hopt);
    const std::size_t nv = config_.num_virtual();
    static_multipath_.assign(nv, ToneAccumulator(config_.samples_per_chirp));
    parallel_for(nv, options_.workers, [&](std::size_t v) {
        accumulate_entries(static_table_.entries(), config_, v, static_multipath_[v], 1.0);
    });
    multipath_ready_ = true;
}

const HrppTable& FrameSynthesizer::static_hrpp() {
    prepare_multipath();
    return static_table_;
}

FrameComponents FrameSynthesizer::synthesize_components(std::size_t frame_index) {
    const std::size_t chirps = config_.chirps_per_frame;
    const std::size_t nv = config_.num_virtual();
    const std::size_t ns = config_.samples_per_chirp;
    const std::size_t nrx = config_.num_rx;
    const double frame_time = static_cast<double>(frame_index) / config_.frame_rate_hz;

    FrameComponents out;
    out.human = FrameCube(chirps, nv, ns);
    out.environment = FrameCube(chirps, nv, ns);
    out.multipath = FrameCube(chirps, nv, ns);

    // Environment: static, identical for every chirp of a TX slot.
    if (options_.environment) {
        const auto start = Clock::now();
        prepare_environment();
        for (std::size_t k = 0; k < chirps; ++k) {
            const std::size_t tx = config_.active_tx(k);
            for (std::size_t r = 0; r < nrx; ++r) {
                const std::size_t v = tx * nrx + r;
                std::copy(env_rows_[v].begin(), env_rows_[v].end(), out.environment.row(k, v).begin());
            }
        }
        out.timings.environment_s = seconds_since(start);
    }

    // Human: interpolate, cull and synthesize per chirp.
    const bool has_human = options_.human && scene_.human != nullptr && !scene_.human->frames.empty();
    const bool dynamic_paths = has_human && options_.multipath && options_.multipath_dynamic;
    std::vector<std::vector<ReflectionPoint>> human_points(has_human ? chirps : 0);
    std::vector<std::vector<double>> human_radii(dynamic_paths ? chirps : 0);
    if (has_human) {
        const auto start = Clock::now();
        const MeshSequence& seq = *scene_.human;
        const std::vector<double> times = chirp_times(config_, frame_index);
        std::vector<std::size_t> frame_visible;
        if (options_.hpr_mode == HprMode::per_frame) {
            const std::vector<Vec3> verts = vertices_at(seq, times.front());
            frame_visible = hpr_visible(centroids_of(facet_attributes(seq.topology, verts)), scene_.radar_position,
                                        options_.hpr_gamma);
        }
        parallel_for(chirps, options_.workers, [&](std::size_t k) {
            const std::vector<Vec3> verts = vertices_at(seq, times[k]);
            const std::vector<ReflectionPoint> all = facet_attributes(seq.topology, verts);
            const std::vector<std::size_t> visible =
                options_.hpr_mode == HprMode::per_frame
                    ? frame_visible
                    : hpr_visible(centroids_of(all), scene_.radar_position, options_.hpr_gamma);
            std::vector<ReflectionPoint>& pts = human_points[k];
            pts.reserve(visible.size());
            for (std::size_t i : visible) pts.push_back(all[i]);
            if (dynamic_paths) {
                const std::vector<double> radii = insphere_radii(seq.topology, verts);
                for (std::size_t i : visible) human_radii[k].push_back(radii[i]);
            }
            const std::vector<double> amps = amplitudes_of(pts, config_, ReflectionMode::human, options_.psi_rad);
            ToneAccumulator acc(ns);
            const std::size_t tx = config_.active_tx(k);
            for (std::size_t r = 0; r < nrx; ++r) {
                const std::size_t v = tx * nrx + r;
                acc.reset();
                accumulate_points(pts, amps, config_, v, acc);
                acc.write(out.human.row(k, v));
            }
        });
        for (const auto& pts : human_points) {
            out.max_visible_human_points = std::max(out.max_visible_human_points, pts.size());
        }
        out.timings.human_s = seconds_since(start);
    }

    // Multipath: cached static paths, plus paths through the moving body.
    if (options_.multipath) {
        const auto start = Clock::now();
        prepare_multipath();
        std::vector<std::size_t> entry_counts(chirps, static_table_.size());
        parallel_for(chirps, options_.workers, [&](std::size_t k) {
            const std::size_t tx = config_.active_tx(k);
            HrppTable table;
            if (dynamic_paths) {
                table = update_hrpp(static_table_, human_points[k], human_radii[k]);
                entry_counts[k] = table.size();
            }
            const std::vector<HrppEntry> added = dynamic_paths ? table.dynamic_entries() : std::vector<HrppEntry>{};
            ToneAccumulator acc(ns);
            for (std::size_t r = 0; r < nrx; ++r) {
                const std::size_t v = tx * nrx + r;
                acc.reset();
                acc.add(static_multipath_[v]);
                if (dynamic_paths) {
                    accumulate_entries(table.displaced_static_entries(), config_, v, acc, -1.0);
                    accumulate_entries(added, config_, v, acc, 1.0);
                }
                acc.write(out.multipath.row(k, v));
            }
        });
        out.max_multipath_entries = *std::max_element(entry_counts.begin(), entry_counts.end());
        out.timings.multipath_s = seconds_since(start);
    }

    out.total = out.human;
    out.total += out.environment;
    out.total += out.multipath;
    for (FrameCube* cube : {&out.human, &out.environment, &out.multipath, &out.total}) {
        cube->frame_index = frame_index;
        cube->timestamp_s = frame_time;
    }
    if (!out.total.all_finite()) throw NumericError("synthesis produced non-finite samples");
    return out;
}

FrameCube synthesize_frame(const MeshSequence* human_seq, const TriangleMesh* environment, const RadarConfig& config,
                           std::size_t frame_index, const SynthesisOptions& options) {
    FrameSynthesizer synth(config, make_scene_state(human_seq, environment, options.hpr_gamma), options);
    return synth.synthesize_frame(frame_index);
}

}  // namespace mmgen
