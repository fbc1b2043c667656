#include "mmgen/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "mmgen/cli/demo.hpp"
#include "mmgen/core/errors.hpp"
#include "mmgen/dsp/signatures.hpp"
#include "mmgen/geometry/mesh_io.hpp"
#include "mmgen/geometry/scene.hpp"
#include "mmgen/io/config_io.hpp"
#include "mmgen/io/mmgn.hpp"
#include "mmgen/metrics/similarity.hpp"

namespace mmgen {

namespace {

std::string fixed(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

Window parse_window(const std::string& name) {
    if (name == "rect") return Window::rect;
    if (name == "hann") return Window::hann;
    throw ConfigError("unknown window '" + name + "' (expected rect or hann)");
}

RadarConfig config_or_default(const std::optional<std::filesystem::path>& path) {
    return path ? load_radar_config(*path) : RadarConfig::defaults();
}

}  // namespace

void cmd_synth(const SynthArgs& args, std::ostream& log) {
    RunManifest manifest = RunManifest::load(args.manifest);
    if (args.output_dir) manifest.output_dir = *args.output_dir;
    if (args.frames) manifest.frames = *args.frames;
    manifest.validate();

    RadarConfig config = config_or_default(manifest.radar_config);
    const MaterialTable table = manifest.materials ? load_material_table(*manifest.materials) : MaterialTable::defaults();
    SynthesisOptions options;
    options.human = manifest.human;
    options.environment = manifest.environment;
    options.multipath = manifest.multipath;
    Knobs knobs = manifest.knobs;
    knobs.merge(args.overrides);
    apply_knobs(knobs, config, options);

    std::optional<TriangleMesh> environment;
    if (manifest.scene) environment = build_primitive_scene(load_scene_spec(*manifest.scene), table);
    std::optional<MeshSequence> human;
    if (manifest.human_sequence) human = load_mesh_sequence(*manifest.human_sequence, table);

    const auto start = std::chrono::steady_clock::now();
    FrameSynthesizer synth(config,
                           make_scene_state(human ? &*human : nullptr, environment ? &*environment : nullptr,
                                            options.hpr_gamma),
                           options);

    std::error_code ec;
    std::filesystem::create_directories(manifest.output_dir, ec);
    if (ec) throw IoError("cannot create " + manifest.output_dir.string() + ": " + ec.message());
    const auto signal_path = manifest.output_dir / "signal.mmgn";
    MmgnWriter writer(signal_path,
                      SignalHeader::from_config(config, static_cast<std::uint32_t>(manifest.frames)));

    nlohmann::json frames_log = nlohmann::json::array();
    StageTimings totals;
    log << "synth: " << synth.scene().environment_points.size() << " visible environment facets, "
        << (human ? human->topology.faces.size() : 0) << " human faces, " << options.workers << " worker(s)\n";
    for (std::size_t f = 0; f < manifest.frames; ++f) {
        const FrameComponents c = synth.synthesize_components(f);
        writer.write(c.total);
        totals.human_s += c.timings.human_s;
        totals.environment_s += c.timings.environment_s;
        totals.multipath_s += c.timings.multipath_s;
        log << "frame " << f << ": human " << fixed(c.timings.human_s) << " s, environment "
            << fixed(c.timings.environment_s) << " s, multipath " << fixed(c.timings.multipath_s) << " s ("
            << c.max_visible_human_points << " visible human facets, " << c.max_multipath_entries
            << " multipath paths)\n";
        frames_log.push_back({{"frame", f},
                              {"human_s", c.timings.human_s},
                              {"environment_s", c.timings.environment_s},
                              {"multipath_s", c.timings.multipath_s},
                              {"visible_human_facets", c.max_visible_human_points},
                              {"multipath_paths", c.max_multipath_entries},
                              {"energy", {{"human", c.human.energy()},
                                          {"environment", c.environment.energy()},
                                          {"multipath", c.multipath.energy()}}}});
    }
    writer.close();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << "wrote " << signal_path.string() << " (" << manifest.frames << " frame(s), " << fixed(wall) << " s)\n";
    write_json_file(manifest.output_dir / "synth_log.json",
                    {{"signal", signal_path.string()},
                     {"frames", frames_log},
                     {"totals", {{"human_s", totals.human_s},
                                 {"environment_s", totals.environment_s},
                                 {"multipath_s", totals.multipath_s}}},
                     {"wall_s", wall},
                     {"workers", options.workers}});
}

void cmd_process(const ProcessArgs& args, std::ostream& log) {
    const RadarConfig config = config_or_default(args.config);
    const SignalHeader header = read_mmgn_header(args.signal);
    header.check_matches(config);
    static const std::vector<std::string> known = {"rfft", "rd", "ra", "md"};
    if (std::find(known.begin(), known.end(), args.signature) == known.end()) {
        throw ConfigError("unknown signature '" + args.signature + "' (expected rfft, rd, ra or md)");
    }
    const Window window = parse_window(args.window);
    const SignalFile file = read_mmgn(args.signal, config.frame_rate_hz);

    Heatmap h;
    if (args.signature == "md") {
        MicroDopplerOptions opt;
        opt.window = args.md_window;
        opt.hop = args.md_hop;
        opt.fft_size = std::max(args.md_window, opt.fft_size);
        opt.selection = args.md_sum_bins ? RangeSelection::sum_bins : RangeSelection::max_variance;
        h = micro_doppler(file.frames, config, opt);
    } else {
        if (args.frame >= file.frames.size()) {
            throw ConfigError("frame " + std::to_string(args.frame) + " out of range (file has " +
                              std::to_string(file.frames.size()) + ")");
        }
        RangeProfiles profiles = range_fft(file.frames[args.frame], window);
        if (args.scr) profiles = static_clutter_removal(profiles, config);
        if (args.signature == "rfft") {
            h = range_heatmap(profiles, config);
        } else if (args.signature == "rd") {
            h = doppler_fft(profiles, config, args.per_tx, window);
        } else {
            h = angle_fft(profiles, config, args.padded_bins);
        }
    }
    h.validate();
    std::error_code ec;
    std::filesystem::create_directories(args.output_dir, ec);
    if (ec) throw IoError("cannot create " + args.output_dir.string() + ": " + ec.message());
    const auto csv = args.output_dir / (args.signature + ".csv");
    const auto png = args.output_dir / (args.signature + ".png");
    write_csv(csv, h);
    write_png(png, h);
    const std::size_t peak = h.argmax();
    log << args.signature << ": " << h.rows << "x" << h.cols << " peak at (" << peak / h.cols << ", " << peak % h.cols
        << ") -> " << csv.string() << ", " << png.string() << "\n";
}

int cmd_compare(const CompareArgs& args, std::ostream& out) {
    for (const auto* d : {&args.dir_a, &args.dir_b}) {
        if (!std::filesystem::is_directory(*d)) throw IoError("not a directory: " + d->string());
    }
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(args.dir_a)) {
        if (entry.path().extension() != ".csv") continue;
        if (std::filesystem::exists(args.dir_b / entry.path().filename())) names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    if (names.empty()) throw ConfigError("compare: no matching CSV files in both directories");

    std::vector<HeatmapPair> pairs;
    std::vector<std::string> pair_names;
    std::vector<PairScore> read_errors;
    for (const auto& n : names) {
        try {
            pairs.emplace_back(read_csv(args.dir_a / n), read_csv(args.dir_b / n));
            pair_names.push_back(n);
        } catch (const std::exception& e) {
            read_errors.push_back({n, 0.0, 0.0, e.what()});
        }
    }
    SimilarityReport report;
    if (!pairs.empty()) report = compare_heatmaps(pairs, pair_names);
    report.pairs.insert(report.pairs.end(), read_errors.begin(), read_errors.end());
    std::sort(report.pairs.begin(), report.pairs.end(),
              [](const PairScore& a, const PairScore& b) { return a.name < b.name; });
    const nlohmann::json j = report.to_json();
    if (args.report) {
        write_json_file(*args.report, j);
    } else {
        out << j.dump(2) << '\n';
    }
    const bool failed = std::any_of(report.pairs.begin(), report.pairs.end(), [](const PairScore& p) { return !p.ok(); });
    return failed ? kExitFailure : kExitOk;
}

void cmd_info(const std::optional<std::filesystem::path>& config_path, std::ostream& out) {
    const RadarConfig config = config_or_default(config_path);
    const DerivedMetrics m = derive_radar_metrics(config);
    nlohmann::json va = nlohmann::json::array();
    for (const auto& p : virtual_array(config)) va.push_back({p.x(), p.y(), p.z()});
    const nlohmann::json j = {
        {"slope_hz_per_s", m.slope_hz_per_s},
        {"wavelength_m", m.wavelength_m},
        {"sampled_bandwidth_hz", m.sampled_bandwidth_hz},
        {"range_resolution_m", m.range_resolution_m},
        {"max_range_m", m.max_range_m},
        {"max_speed_mps", m.max_speed_mps},
        {"speed_resolution_mps", m.speed_resolution_mps},
        {"doppler_bin_mps_per_tx", doppler_resolution(config, true)},
        {"if_bin_hz", m.if_bin_hz},
        {"num_virtual", config.num_virtual()},
        {"virtual_array_wavelengths", va},
    };
    out << j.dump(2) << '\n';
}

void cmd_scene(const SceneArgs& args, std::ostream& log) {
    if (args.demo_dir) {
        const DemoBundle b = write_demo_bundle(*args.demo_dir, args.demo_frames);
        log << "demo bundle: " << b.manifest.string() << "\n";
        return;
    }
    if (args.preset) {
        if (!args.output) throw ConfigError("scene --preset needs --out");
        SceneSpec spec;
        if (*args.preset == "plate") {
            spec = demo_plate_scene();
        } else if (*args.preset == "room") {
            spec = demo_room_scene();
        } else {
            throw ConfigError("unknown preset '" + *args.preset + "' (expected plate or room)");
        }
        write_json_file(*args.output, scene_spec_to_json(spec));
        log << "scene spec: " << args.output->string() << "\n";
        return;
    }
    if (!args.spec || !args.output) throw ConfigError("scene needs --spec and --out, --preset and --out, or --demo");
    const TriangleMesh mesh = build_primitive_scene(load_scene_spec(*args.spec), MaterialTable::defaults());
    save_obj(*args.output, mesh);
    log << "scene mesh: " << mesh.faces.size() << " faces, area " << fixed(mesh.total_area()) << " m^2 -> "
        << args.output->string() << "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"mmWave FMCW radar signal simulator"};
    app.require_subcommand(1);

    SynthArgs synth;
    double d_gamma = 0, d_eta = 0, d_psi = 0, d_cone = 0, d_saz = 0, d_sel = 0;
    std::string hpr_mode;
    std::size_t workers = 0;
    std::string synth_out;
    std::size_t synth_frames = 0;
    auto* s = app.add_subcommand("synth", "Synthesize IF signals from a run manifest");
    s->add_option("manifest", synth.manifest, "Run manifest JSON")->required();
    auto* o_gamma = s->add_option("--gamma", d_gamma, "HPR radius exponent");
    auto* o_eta = s->add_option("--eta-deg", d_eta, "Specular spread (degrees)");
    auto* o_psi = s->add_option("--psi-deg", d_psi, "Polarization mixing angle (degrees)");
    auto* o_cone = s->add_option("--cone-deg", d_cone, "Multipath candidate cone half-angle (degrees)");
    auto* o_saz = s->add_option("--sigma-az-deg", d_saz, "Azimuth gain sigma (degrees)");
    auto* o_sel = s->add_option("--sigma-el-deg", d_sel, "Elevation gain sigma (degrees)");
    auto* o_hpr = s->add_option("--hpr-mode", hpr_mode, "HPR per 'chirp' or per 'frame'");
    auto* o_workers = s->add_option("--workers", workers, "Worker threads");
    auto* o_out = s->add_option("--out-dir", synth_out, "Output directory (overrides manifest)");
    auto* o_frames = s->add_option("--frames", synth_frames, "Number of frames (overrides manifest)");

    ProcessArgs process;
    std::string process_config;
    std::string process_out;
    auto* p = app.add_subcommand("process", "Turn an MMGN file into a radar signature");
    p->add_option("signal", process.signal, "MMGN signal file")->required();
    p->add_option("--signature", process.signature, "rfft | rd | ra | md")->required();
    auto* o_pconfig = p->add_option("--config", process_config, "Radar config JSON (defaults if omitted)");
    p->add_option("--out-dir", process_out, "Output directory (default: next to the signal)");
    p->add_option("--frame", process.frame, "Frame index for rfft/rd/ra");
    p->add_flag("--scr", process.scr, "Static clutter removal before rfft/rd/ra");
    p->add_option("--window", process.window, "rect | hann");
    p->add_flag("!--all-chirps", process.per_tx, "Doppler over all chirps instead of per-TX");
    p->add_option("--angle-bins", process.padded_bins, "Zero-padded angle FFT length");
    p->add_option("--md-window", process.md_window, "STFT window (chirps)");
    p->add_option("--md-hop", process.md_hop, "STFT hop (chirps)");
    p->add_flag("--md-sum-bins", process.md_sum_bins, "Sum STFT magnitudes over range bins");

    CompareArgs compare;
    std::string report_path;
    auto* c = app.add_subcommand("compare", "Score matching heatmap CSVs of two directories");
    c->add_option("dir_a", compare.dir_a)->required();
    c->add_option("dir_b", compare.dir_b)->required();
    auto* o_report = c->add_option("--report", report_path, "Write the JSON report here instead of stdout");

    std::string info_config;
    auto* i = app.add_subcommand("info", "Print derived radar metrics");
    auto* o_iconfig = i->add_option("--config", info_config, "Radar config JSON");

    SceneArgs scene;
    std::string scene_spec, scene_out, scene_demo, scene_preset;
    auto* sc = app.add_subcommand("scene", "Emit primitive scenes or a demo bundle");
    auto* o_spec = sc->add_option("--spec", scene_spec, "Scene spec JSON to mesh");
    auto* o_sout = sc->add_option("--out", scene_out, "Output file");
    auto* o_demo = sc->add_option("--demo", scene_demo, "Write a demo bundle into this directory");
    auto* o_preset = sc->add_option("--preset", scene_preset, "plate | room");
    sc->add_option("--demo-frames", scene.demo_frames, "Frames in the demo manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*s) {
            if (*o_gamma) synth.overrides.gamma = d_gamma;
            if (*o_eta) synth.overrides.eta_deg = d_eta;
            if (*o_psi) synth.overrides.psi_deg = d_psi;
            if (*o_cone) synth.overrides.cone_deg = d_cone;
            if (*o_saz) synth.overrides.sigma_azimuth_deg = d_saz;
            if (*o_sel) synth.overrides.sigma_elevation_deg = d_sel;
            if (*o_hpr) synth.overrides.hpr_mode = hpr_mode;
            if (*o_workers) synth.overrides.workers = workers;
            if (*o_out) synth.output_dir = synth_out;
            if (*o_frames) synth.frames = synth_frames;
            cmd_synth(synth, out);
        } else if (*p) {
            if (*o_pconfig) process.config = process_config;
            process.output_dir = process_out.empty() ? process.signal.parent_path() : std::filesystem::path(process_out);
            cmd_process(process, out);
        } else if (*c) {
            if (*o_report) compare.report = report_path;
            const int code = cmd_compare(compare, out);
            if (code != kExitOk) err << "error: some pairs could not be compared\n";
            return code;
        } else if (*i) {
            cmd_info(*o_iconfig ? std::optional<std::filesystem::path>(info_config) : std::nullopt, out);
        } else if (*sc) {
            if (*o_spec) scene.spec = scene_spec;
            if (*o_sout) scene.output = scene_out;
            if (*o_demo) scene.demo_dir = scene_demo;
            if (*o_preset) scene.preset = scene_preset;
            cmd_scene(scene, out);
        }
    } catch (const ConfigError& e) {
        err << "error: config: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "error: io: " << e.what() << '\n';
        return kExitIo;
    } catch (const NumericError& e) {
        err << "error: numeric: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace mmgen
