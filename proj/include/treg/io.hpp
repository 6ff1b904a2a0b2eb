#pragma once

// Persistence: PGM images, JSON dataset manifests, the TRGM binary weight
// format, JSON pipeline configuration, and the CLI entry point.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "treg/model.hpp"
#include "treg/planner.hpp"
#include "treg/synthworld.hpp"

namespace treg {

// File-level failures: missing files, malformed content, bad magic/version.
// CLI maps these to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 8-bit binary PGM (P5, maxval 255); intensity i stored as round(255 * i).
void save_pgm(const TactileImage& img, const std::filesystem::path& path);
TactileImage load_pgm(const std::filesystem::path& path);

// Dataset directory: one left/right PGM per record plus manifest.json
// listing filenames, score, object_id, pose, and seed. Scores round-trip
// exactly; intensities within 1/255.
void save_dataset(const std::vector<GraspRecord>& records, const std::filesystem::path& dir);
std::vector<GraspRecord> load_dataset(const std::filesystem::path& dir);

// Binary weight file: magic "TRGM", u32 LE version, u32 LE array count,
// then per array a u32 LE rank, u32 LE dims, and f32 LE row-major data.
// Arrays are kernel+bias per conv layer, then dense weights, then dense
// bias. Round-trips are bit-exact at f32 precision.
void save_model(const QualityModelParams& params, const std::filesystem::path& path);
QualityModelParams load_model(const std::filesystem::path& path);

// Everything the CLI needs: world + objects + model + action grid.
struct PipelineConfig {
    WorldConfig world;
    std::vector<SyntheticObject> objects;
    ModelConfig model;
    ActionGrid grid;
};

// JSON config; absent keys keep defaults. Throws DataError on parse or
// schema problems.
PipelineConfig load_config(const std::filesystem::path& path);

// "epoch,mean_loss" CSV.
void save_loss_history_csv(const std::vector<double>& epoch_loss,
                           const std::filesystem::path& path);

// Subcommands: gen-data, train, eval-model, crossval, run-policy, compare,
// cam. Returns 0 on success, 1 on usage errors, 2 on data errors.
int cli_main(int argc, const char* const* argv);

}  // namespace treg
