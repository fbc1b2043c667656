#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mmgen/core/frame_cube.hpp"
#include "mmgen/core/radar_config.hpp"
#include "mmgen/geometry/hpr.hpp"
#include "mmgen/geometry/mesh.hpp"
#include "mmgen/geometry/mesh_sequence.hpp"
#include "mmgen/multipath/hrpp.hpp"
#include "mmgen/synthesizer/tone.hpp"

namespace mmgen {

enum class ReflectionMode { human, environment };

/// Amplitude of one facet seen monostatically from the radar.
double point_amplitude(const ReflectionPoint& point, const RadarConfig& config, ReflectionMode mode,
                       double psi_rad = 0.0);

/// Adds every point's tone for virtual channel `v` to `acc`, in ascending
/// source_face_id order. `amplitudes` pairs with `points`.
void accumulate_points(std::span<const ReflectionPoint> points, std::span<const double> amplitudes,
                       const RadarConfig& config, std::size_t v, ToneAccumulator& acc);

/// One chirp of IF samples per listed virtual channel: sum over points of
/// A_i exp(j 2 pi theta_i(t)) with per-pair Tx -> facet -> Rx delays.
std::vector<std::vector<std::complex<float>>> synthesize_points(std::span<const ReflectionPoint> points,
                                                                const RadarConfig& config, ReflectionMode mode,
                                                                std::span<const std::size_t> virtuals,
                                                                double psi_rad = 0.0);
std::vector<std::vector<std::complex<float>>> synthesize_points(std::span<const ReflectionPoint> points,
                                                                const RadarConfig& config, ReflectionMode mode,
                                                                double psi_rad = 0.0);

/// Static part of a scene: visible environment facets and their insphere
/// radii, plus the (optional) animated human.
struct SceneState {
    const MeshSequence* human = nullptr;
    std::vector<ReflectionPoint> environment_points;
    std::vector<double> environment_radii;
    Vec3 radar_position = Vec3::Zero();
};

/// Runs HPR on the environment once and keeps the visible facets.
SceneState make_scene_state(const MeshSequence* human, const TriangleMesh* environment,
                            double hpr_gamma = kDefaultHprGamma);

enum class HprMode { per_chirp, per_frame };

struct SynthesisOptions {
    bool human = true;
    bool environment = true;
    bool multipath = true;
    /// Let human facets take part in two-bounce paths (updated per chirp).
    bool multipath_dynamic = true;
    double hpr_gamma = kDefaultHprGamma;
    HprMode hpr_mode = HprMode::per_chirp;
    double psi_rad = 0.0;
    double cone_deg = 15.0;
    std::size_t workers = 1;
};

struct StageTimings {
    double human_s = 0.0;
    double environment_s = 0.0;
    double multipath_s = 0.0;

    [[nodiscard]] double total_s() const { return human_s + environment_s + multipath_s; }
};

struct FrameComponents {
    FrameCube human;
    FrameCube environment;
    FrameCube multipath;
    /// human + environment + multipath, summed sample-wise in that order.
    FrameCube total;
    StageTimings timings;
    std::size_t max_visible_human_points = 0;
    std::size_t max_multipath_entries = 0;
};

/**
 * Builds FrameCubes under the TDM schedule: chirp k fires TX (k mod num_tx),
 * so only that TX's virtual channels are filled. Human facets are
 * re-interpolated and HPR-culled per chirp (or once per frame in
 * HprMode::per_frame). Environment and static-multipath signals are
 * computed once and reused.
 */
class FrameSynthesizer {
public:
    FrameSynthesizer(RadarConfig config, SceneState scene, SynthesisOptions options = {});

    FrameComponents synthesize_components(std::size_t frame_index);
    FrameCube synthesize_frame(std::size_t frame_index) { return synthesize_components(frame_index).total; }

    [[nodiscard]] const RadarConfig& config() const { return config_; }
    [[nodiscard]] const SceneState& scene() const { return scene_; }
    /// Environment-only two-bounce table (built on first use).
    const HrppTable& static_hrpp();

private:
    void prepare_environment();
    void prepare_multipath();

    RadarConfig config_;
    SceneState scene_;
    SynthesisOptions options_;

    bool env_ready_ = false;
    std::vector<std::vector<std::complex<float>>> env_rows_;  // per virtual

    bool multipath_ready_ = false;
    HrppTable static_table_;
    std::vector<ToneAccumulator> static_multipath_;  // per virtual
};

/// Convenience wrapper building a FrameSynthesizer for a single frame.
FrameCube synthesize_frame(const MeshSequence* human_seq, const TriangleMesh* environment, const RadarConfig& config,
                           std::size_t frame_index, const SynthesisOptions& options = {});

}  // namespace mmgen
