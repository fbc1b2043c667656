#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mmgen/cli/manifest.hpp"

namespace mmgen {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitIo = 3,
    kExitNumeric = 4,
};

struct SynthArgs {
    std::filesystem::path manifest;
    Knobs overrides;  // command-line knobs, highest precedence
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::size_t> frames;
};

/// Writes <output_dir>/signal.mmgn and <output_dir>/synth_log.json; logs
/// per-stage timings to `log`. Throws mmgen errors.
void cmd_synth(const SynthArgs& args, std::ostream& log);

struct ProcessArgs {
    std::filesystem::path signal;
    std::string signature;  // rfft | rd | ra | md
    std::optional<std::filesystem::path> config;
    std::filesystem::path output_dir;
    std::size_t frame = 0;
    bool scr = false;
    std::string window = "rect";
    bool per_tx = true;
    std::size_t padded_bins = 64;
    std::size_t md_window = 256;
    std::size_t md_hop = 64;
    bool md_sum_bins = false;
};

/// Writes <output_dir>/<signature>.csv and .png.
void cmd_process(const ProcessArgs& args, std::ostream& log);

struct CompareArgs {
    std::filesystem::path dir_a;
    std::filesystem::path dir_b;
    std::optional<std::filesystem::path> report;
};

/// Scores every CSV present in both directories. Returns kExitOk when all
/// pairs were scored, kExitFailure when some pair failed.
int cmd_compare(const CompareArgs& args, std::ostream& out);

/// Prints derived metrics and the virtual array as JSON.
void cmd_info(const std::optional<std::filesystem::path>& config, std::ostream& out);

struct SceneArgs {
    std::optional<std::filesystem::path> spec;
    std::optional<std::filesystem::path> output;  // OBJ for --spec
    std::optional<std::filesystem::path> demo_dir;
    std::size_t demo_frames = 2;
    std::optional<std::string> preset;  // plate | room, emitted as scene JSON to `output`
};

void cmd_scene(const SceneArgs& args, std::ostream& log);

/// Full command-line entry point: parses argv, runs the verb, maps
/// exceptions to exit codes and prints "error: ..." lines on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmgen
