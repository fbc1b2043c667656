// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "mmgen/cli/commands.hpp"
#include "mmgen/cli/demo.hpp"
#include "mmgen/core/constants.hpp"
#include "mmgen/dsp/signatures.hpp"
#include "mmgen/geometry/hpr.hpp"
#include "mmgen/geometry/mesh_sequence.hpp"
#include "mmgen/geometry/scene.hpp"
#include "mmgen/io/config_io.hpp"
#include "mmgen/metrics/similarity.hpp"
#include "mmgen/multipath/hrpp.hpp"
#include "mmgen/reflectance/reflectance.hpp"
#include "mmgen/synthesizer/synthesizer.hpp"
#include "ms_ssim_pairs.hpp"
#include "quad_oracle.hpp"
#include "test_support.hpp"

using namespace mmgen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

const RadarConfig kConfig = RadarConfig::defaults();

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

long peak_row(const Heatmap& h) { return static_cast<long>(h.argmax() / h.cols); }
long peak_col(const Heatmap& h) { return static_cast<long>(h.argmax() % h.cols); }

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mmgen_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t all_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// 1. Derived metrics
Outcome derived_metrics() {
    const auto t0 = Clock::now();
    const DerivedMetrics m = derive_radar_metrics(kConfig);
    const double us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
    struct Want {
        const char* name;
        double got, want;
    };
    const Want w[] = {{"range_res", m.range_resolution_m, 0.041},
                      {"max_range", m.max_range_m, 10.49},
                      {"max_speed", m.max_speed_mps, 11.9},
                      {"speed_res", m.speed_resolution_mps, 0.093}};
    Outcome o{us < 1000.0, ""};
    for (const auto& x : w) {
        const double rel = std::abs(x.got / x.want - 1.0);
        o.pass = o.pass && rel <= 0.005;
        o.detail += std::string(x.name) + "=" + fmt("%.4g", x.got) + " ";
    }
    o.detail += fmt("(%.1f us)", us);
    return o;
}

// 2. Point target range bin
Outcome point_target() {
    const FrameCube cube = test::cube_from_points(
        kConfig, [](std::size_t, double) { return std::vector<ReflectionPoint>{test::facing_point({0, 2.05, 0})}; });
    const long bin = peak_row(range_heatmap(range_fft(cube), kConfig));
    return {std::abs(bin - 50) <= 1, "argmax bin " + std::to_string(bin) + " (expected 50 +/- 1)"};
}

// 3. Doppler
Outcome doppler() {
    const double res = doppler_resolution(kConfig, true);
    Outcome o{true, ""};
    for (double v : {-2.0, -1.0, 0.5, 1.0, 3.0}) {
        const Heatmap rd = doppler_fft(range_fft(test::radial_target_cube(kConfig, 3.0, v)), kConfig);
        const long want = static_cast<long>(rd.cols / 2) + std::lround(v / res);
        const long got = peak_col(rd);
        o.pass = o.pass && std::abs(got - want) <= 1;
        o.detail += fmt("%+.1f m/s", v) + "->" + std::to_string(got) + "/" + std::to_string(want) + " ";
    }
    return o;
}

// 4. Angle
Outcome angle() {
    const double r = test::range_of_bin(kConfig, 60);
    const AzimuthArray array = azimuth_array(kConfig);
    const double m = 64.0;
    Outcome o{true, ""};
    for (double deg : {-40.0, -20.0, 0.0, 20.0, 40.0}) {
        const Heatmap ra = angle_fft(range_fft(test::radial_target_cube(kConfig, r, 0.0, 0, deg_to_rad(deg))), kConfig);
        const double want = m / 2.0 + m * array.spacing_wavelengths * std::sin(deg_to_rad(deg));
        const long got = peak_col(ra);
        o.pass = o.pass && std::abs(static_cast<double>(got) - want) <= 1.0 && peak_row(ra) == 60;
        o.detail += fmt("%+.0f deg", deg) + "->" + std::to_string(got) + fmt("/%.1f ", want);
    }
    return o;
}

// 5. Multipath ghost on a 90 degree corner, radar 3 m away on the bisector
Outcome multipath_ghost() {
    SceneSpec spec;
    SceneObject corner;
    corner.name = "corner";
    corner.kind = PrimitiveKind::dihedral;
    corner.size = {1.0, 1.0, 0.0};
    corner.angle_deg = 90.0;
    corner.subdivisions = {80, 80};
    corner.material = "concrete";
    corner.pose.translation = {0.0, 3.0, 0.0};
    spec.objects.push_back(corner);
    const TriangleMesh mesh = build_primitive_scene(spec, MaterialTable::defaults());

    SynthesisOptions opt;
    opt.human = false;
    opt.environment = false;
    opt.multipath = true;
    opt.workers = all_workers();
    FrameSynthesizer synth(kConfig, make_scene_state(nullptr, &mesh), opt);
    const HrppTable& table = synth.static_hrpp();
    if (table.empty()) return {false, "no two-bounce paths"};

    // image-method oracle: reflect the specular ray off the other plate's plane
    const auto& points = synth.scene().environment_points;
    double worst = 0.0;
    const HrppEntry* strongest = &table.entries().front();
    for (const auto& e : table.entries()) {
        const Vec3 o1 = e.first_point;
        const Vec3 n1 = points[e.first].unit_normal;
        const Vec3 di = o1.normalized();
        const Vec3 ds = di - 2.0 * di.dot(n1) * n1;
        const Vec3 n2 = points[e.second].unit_normal;  // plane of the other plate
        const double t = (points[e.second].centroid - o1).dot(n2) / ds.dot(n2);
        const double oracle = o1.norm() + t + (o1 + t * ds).norm();
        worst = std::max(worst, std::abs(e.total_path_length_m - oracle));
        if (multipath_amplitude(e, kConfig) > multipath_amplitude(*strongest, kConfig)) strongest = &e;
    }
    const FrameComponents c = synth.synthesize_components(0);
    const long ghost = peak_row(range_heatmap(range_fft(c.multipath), kConfig));
    const double res = derive_radar_metrics(kConfig).range_resolution_m;
    const long want = std::lround(strongest->total_path_length_m / 2.0 / res);
    return {worst <= 0.01 && std::abs(ghost - want) <= 1,
            std::to_string(table.size()) + " paths, worst |D - D_image| = " + fmt("%.2f mm", worst * 1e3) +
                ", ghost bin " + std::to_string(ghost) + " (D/2 -> " + std::to_string(want) + ")"};
}

// 6. Inverse-square law of the received amplitude
Outcome inverse_square() {
    auto peak = [](double range) {
        const FrameCube cube = test::cube_from_points(
            kConfig, [&](std::size_t, double) { return std::vector<ReflectionPoint>{test::facing_point({0, range, 0})}; });
        const RangeProfiles p = range_fft(cube);
        double best = 0.0;
        for (std::size_t b = 0; b < p.bins; ++b) best = std::max(best, std::abs(p.at(0, 0, b)));
        return best;
    };
    const double d = test::range_of_bin(kConfig, 30);
    const double ratio = peak(d) / peak(2.0 * d);
    return {std::abs(ratio / 4.0 - 1.0) <= 0.01, fmt("ratio %.5f", ratio) + fmt(" at D = %.3f m", d)};
}

// 7. Fresnel against a quad-precision oracle
Outcome fresnel() {
    const double lambda = kConfig.wavelength_m();
    test::SplitMix64 rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Material m{"m", rng.uniform(1.0, 80.0), rng.uniform() < 0.2 ? 0.0 : std::pow(10.0, rng.uniform(-6, 3))};
        const double beta = rng.uniform(1e-3, kPi / 2);
        const FresnelPair f = fresnel_coeffs(m, lambda, beta);
        const auto o = test::fresnel_oracle(m, lambda, beta);
        for (auto [got, want] : {std::pair{f.vertical, test::to_complex(o.vertical)},
                                 std::pair{f.horizontal, test::to_complex(o.horizontal)}}) {
            const double scale = std::abs(want);
            worst = std::max(worst, scale > 0.0 ? std::abs(got - want) / scale : std::abs(got));
        }
    }
    bool vacuum = true;
    for (double beta = 0.01; beta <= kPi / 2; beta += 0.01) {
        const FresnelPair f = fresnel_coeffs({"air", 1.0, 0.0}, lambda, beta);
        vacuum = vacuum && f.vertical == 0.0 && f.horizontal == 0.0;
    }
    // |Gamma| -> 1 as sigma grows: monotone, and within 1e-3 once the conductor is deep enough
    bool monotone = true;
    double prev = 0.0;
    for (double sigma : {1e2, 1e4, 1e6, 1e8, 1e10, 1e12}) {
        const double g = std::abs(fresnel_coeffs({"metal", 1.0, sigma}, lambda, kPi / 2).vertical);
        monotone = monotone && g > prev;
        prev = g;
    }
    double conductor = 0.0;
    for (double beta = 0.01; beta <= kPi / 2; beta += 0.01) {
        const FresnelPair f = fresnel_coeffs({"metal", 1.0, 1e12}, lambda, beta);
        conductor = std::max({conductor, std::abs(std::abs(f.vertical) - 1.0), std::abs(std::abs(f.horizontal) - 1.0)});
    }
    return {worst <= 1e-9 && vacuum && monotone && conductor <= 1e-3,
            fmt("worst rel err %.2e", worst) + (vacuum ? ", vacuum 0" : ", vacuum NONZERO") +
                fmt(", sigma=1e12 max ||G|-1| = %.2e", conductor) + (monotone ? "" : ", NOT monotone")};
}

// 8. HPR against ray casting
Outcome hpr() {
    test::SplitMix64 rng(8);
    double worst = 1.0;
    for (int scene = 0; scene < 20; ++scene) {
        const Vec3 radii(rng.uniform(0.2, 1.2), rng.uniform(0.2, 1.2), rng.uniform(0.2, 1.2));
        const Vec3 dir = test::SplitMix64(rng.next()).unit_vector();
        const Vec3 centre = rng.uniform(3.0, 8.0) * dir;
        TriangleMesh mesh = make_ellipsoid(Vec3::Zero(), radii, 24, 32, human_material());
        const Eigen::Matrix3d rot =
            (Eigen::AngleAxisd(rng.uniform(0, 2 * kPi), Vec3::UnitZ()) *
             Eigen::AngleAxisd(rng.uniform(0, kPi), Vec3::UnitY()) * Eigen::AngleAxisd(rng.uniform(0, 2 * kPi), Vec3::UnitX()))
                .toRotationMatrix();
        for (auto& v : mesh.vertices) v = rot * v + centre;
        const auto visible = hpr_visible(mesh.vertices, Vec3::Zero());
        const auto oracle = test::raycast_vertex_visibility(mesh, Vec3::Zero());
        std::vector<bool> got(mesh.vertices.size(), false);
        for (auto i : visible) got[i] = true;
        std::size_t agree = 0;
        for (std::size_t i = 0; i < got.size(); ++i) agree += got[i] == oracle[i];
        worst = std::min(worst, static_cast<double>(agree) / static_cast<double>(got.size()));
    }
    // sphere: the far hemisphere must stay hidden
    test::SplitMix64 srng(1);
    std::vector<Vec3> sphere;
    for (int i = 0; i < 1000; ++i) sphere.push_back(srng.unit_vector());
    const Vec3 view(0, 0, 5);
    std::size_t below_m02 = 0, far_side = 0, horizon_band = 0;
    for (auto i : hpr_visible(sphere, view)) {
        const double z = sphere[i].z();
        below_m02 += z < -0.2;
        far_side += z < 0.0;
        horizon_band += z >= 0.0 && z < 0.2;  // past the tangent horizon at z = 1/5
    }
    return {worst >= 0.95 && below_m02 == 0 && far_side == 0,
            fmt("min agreement %.2f%% over 20 scenes", 100.0 * worst) + "; sphere: " + std::to_string(far_side) +
                " visible with z < 0, " + std::to_string(below_m02) + " with z < -0.2 (" +
                std::to_string(horizon_band) + " in the 0 <= z < 0.2 band)"};
}

// 9. Static clutter removal
Outcome clutter_removal() {
    const SceneSpec room = demo_room_scene();
    const TriangleMesh env = build_primitive_scene(room, MaterialTable::defaults());
    SynthesisOptions opt;
    opt.human = false;
    opt.workers = all_workers();
    FrameSynthesizer synth(kConfig, make_scene_state(nullptr, &env), opt);
    const FrameCube still = synth.synthesize_frame(0);
    const RangeProfiles p = range_fft(still);
    const double residual_db = 10.0 * std::log10(static_clutter_removal(p, kConfig).energy() / p.energy());

    const FrameCube mover = test::radial_target_cube(kConfig, 2.5, 1.5, 0, 0.0, 0.02);
    FrameCube both = still;
    both += mover;
    const Heatmap alone = doppler_fft(range_fft(mover), kConfig);
    const Heatmap filtered = doppler_fft(static_clutter_removal(range_fft(both), kConfig), kConfig);
    const std::size_t cell = alone.argmax();
    const double change_db = 20.0 * std::log10(filtered.values[cell] / alone.values[cell]);
    return {residual_db <= -40.0 && std::abs(change_db) <= 3.0 && filtered.argmax() == cell,
            fmt("static residual %.1f dB", residual_db) + fmt(", moving peak change %+.2f dB", change_db)};
}

// 10. MS-SSIM
Outcome ms_ssim_checks() {
    double worst_ref = 0.0, worst_sym = 0.0, worst_id = 0.0;
    for (int k = 0; k < 10; ++k) {
        const auto [a, b] = test::make_pair(k);
        worst_ref = std::max(worst_ref, std::abs(ms_ssim_normalized(a.v, b.v, a.rows, a.cols) - test::kTfReference[k]));
        worst_sym = std::max(worst_sym, std::abs(ms_ssim_normalized(a.v, b.v, a.rows, a.cols) -
                                                 ms_ssim_normalized(b.v, a.v, a.rows, a.cols)));
        worst_id = std::max(worst_id, std::abs(ms_ssim_normalized(a.v, a.v, a.rows, a.cols) - 1.0));
    }
    return {worst_id <= 1e-6 && worst_ref <= 1e-3 && worst_sym <= 1e-9,
            fmt("identity %.1e", worst_id) + fmt(", vs TensorFlow %.1e", worst_ref) + fmt(", symmetry %.1e", worst_sym)};
}

// 11. Determinism across reruns and worker counts
Outcome determinism() {
    const fs::path dir = scratch("determinism");
    const DemoBundle demo = write_demo_bundle(dir, 1);
    std::string reference;
    bool same = true;
    for (std::size_t workers : {1, 4, 8}) {
        for (int run = 0; run < 2; ++run) {
            SynthArgs args;
            args.manifest = demo.manifest;
            args.overrides.workers = workers;
            args.output_dir = dir / ("w" + std::to_string(workers) + "_" + std::to_string(run));
            std::ostringstream log;
            cmd_synth(args, log);
            const std::string bytes = slurp(*args.output_dir / "signal.mmgn");
            if (reference.empty()) reference = bytes;
            same = same && bytes == reference;
        }
    }
    fs::remove_all(dir);
    return {same && !reference.empty(),
            std::string(same ? "6 runs byte-identical" : "outputs differ") + " (" + std::to_string(reference.size()) +
                " bytes)"};
}

// 12. Throughput: room, walking body, one frame
Outcome throughput() {
    const fs::path dir = scratch("throughput");
    const DemoBundle demo = write_demo_bundle(dir, 1);
    write_json_file(dir / "room.json", scene_spec_to_json(demo_room_scene()));
    nlohmann::json manifest = read_json_file(demo.manifest);
    manifest["scene"] = "room.json";
    manifest["output_dir"] = "room_out";
    write_json_file(dir / "room_manifest.json", manifest);
    SynthArgs args;
    args.manifest = dir / "room_manifest.json";
    args.overrides.workers = all_workers();
    std::ostringstream log;
    cmd_synth(args, log);
    const nlohmann::json synth_log = read_json_file(dir / "room_out" / "synth_log.json");
    const auto& f = synth_log["frames"][0];
    const double wall = synth_log["wall_s"].get<double>();
    const std::size_t facets = f["visible_human_facets"].get<std::size_t>();
    fs::remove_all(dir);
    return {wall <= 6.0 && facets <= 2500 && facets > 0,
            fmt("%.2f s wall", wall) + fmt(" (human %.2f s", f["human_s"].get<double>()) +
                fmt(", environment %.2f s", f["environment_s"].get<double>()) +
                fmt(", multipath %.2f s)", f["multipath_s"].get<double>()) + ", " + std::to_string(facets) +
                " visible human facets, " + std::to_string(f["multipath_paths"].get<std::size_t>()) +
                " multipath paths, " + std::to_string(args.overrides.workers.value()) + " worker(s)"};
}

// 13. Micro-Doppler line of a constant-velocity walk
Outcome micro_doppler_line() {
    WalkParams walk;
    walk.start = {0.0, 4.0, -1.1};
    walk.velocity = {0.0, -1.0, 0.0};
    walk.frames = 15;
    walk.swing_deg = 0.0;
    const MeshSequence seq = make_walk_sequence(walk);
    SynthesisOptions opt;
    opt.environment = false;
    opt.multipath = false;
    opt.workers = all_workers();
    FrameSynthesizer synth(kConfig, make_scene_state(&seq, nullptr), opt);
    std::vector<FrameCube> cubes;
    for (std::size_t f = 0; f < walk.frames; ++f) cubes.push_back(synth.synthesize_frame(f));
    const MicroDopplerOptions md_opt;
    const Heatmap md = micro_doppler(cubes, kConfig, md_opt);
    const double bin_mps = md.axis0.values[1] - md.axis0.values[0];
    const long want = static_cast<long>(md.rows / 2) + std::lround(walk.velocity.y() / bin_mps);
    std::size_t hits = 0;
    for (std::size_t w = 0; w < md.cols; ++w) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < md.rows; ++i) {
            if (md.at(i, w) > md.at(best, w)) best = i;
        }
        hits += std::abs(static_cast<long>(best) - want) <= 1;
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(md.cols);
    return {frac >= 0.9, std::to_string(hits) + "/" + std::to_string(md.cols) + " windows within +/-1 bin of " +
                             std::to_string(want) + fmt(" (%.3f m/s per bin)", bin_mps)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "derived metrics", 0.001, derived_metrics},
        {2, "point target range bin", 5, point_target},
        {3, "Doppler bins", 30, doppler},
        {4, "angle bins", 30, angle},
        {5, "multipath ghost", 30, multipath_ghost},
        {6, "inverse-square law", 10, inverse_square},
        {7, "Fresnel oracle", 10, fresnel},
        {8, "HPR vs ray casting", 60, hpr},
        {9, "static clutter removal", 10, clutter_removal},
        {10, "MS-SSIM", 10, ms_ssim_checks},
        {11, "determinism", 60, determinism},
        {12, "throughput", 6, throughput},
        {13, "micro-Doppler line", 120, micro_doppler_line},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(Clock::now() - t0).count();
        // criterion 1 times the metric derivation itself; criterion 12 gates the synthesis wall time
        const bool in_time = c.id == 1 || c.id == 12 || s <= c.limit_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%s  %2d %-24s %s [%.2f s, limit %g s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), s,
                    c.limit_s);
        std::fflush(stdout);
    }
    std::printf("%d of 13 criteria passed\n", 13 - failed);
    return failed == 0 ? 0 : 1;
}
