#pragma once

#include "np/eval.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace np {

/// Where the samples come from: a file on disk or a built-in generator.
struct DataSource {
    enum class Kind { delimited, sparse, two_gaussians, ring };
    Kind kind = Kind::delimited;
    std::string path; // file sources
    char delimiter = ',';
    int label_column = -1;
    bool has_header = false;
    // generator parameters
    int n = 10000;
    int dim = 2;
    double separation = 2.0;
    double inner = 1.0;
    double outer = 2.0;
    double noise = 0.05;
};

/// Fully resolved run description. parse_config fills defaults, rejects
/// unknown keys and validates every range before any compute starts.
struct RunConfig {
    ModelKind kind = ModelKind::npnn;
    Hyperparams params;
    DataSource data;
    NormKind normalization = NormKind::none;
    bool minority_positive = true;
    bool shuffle = true; // stream command: seeded shuffle before the single pass

    int permutations = 15;
    double split = 0.75;
    int epochs = 1;
    std::vector<double> tfpr_grid{0.05, 0.1, 0.2, 0.3, 0.4};
    CvConfig cv;
    int threads = 1;

    std::uint64_t seed = 1;
    bool seed_given = false; // defaulted seeds trigger a CLI warning

    std::string out_dir = "out";
    std::string prefix = "run";

    ProtocolConfig protocol() const;
    Dataset load() const;
};

/// Line-oriented key=value text. '#' starts a comment, [section] headers
/// are allowed for grouping and otherwise ignored, later assignments win
/// (so flag overrides are appended lines). Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Canonical flat form; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

/// Writes content to a temp file in the target directory, then renames.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// --- model snapshots --------------------------------------------------------

/// Versioned text snapshot with hex-float encoded reals, so reloading is
/// bit-exact. Covers hyperparameters, seed, counters, the multiplier,
/// window contents and all learnable parameters.
void save_snapshot(const ModelState& state, const std::filesystem::path& path);
void save_snapshot(const LinearState& state, const std::filesystem::path& path);

std::variant<ModelState, LinearState> load_snapshot(const std::filesystem::path& path);

ModelState load_npnn_snapshot(const std::filesystem::path& path);
LinearState load_olnp_snapshot(const std::filesystem::path& path);

} // namespace np
