#pragma once

// Regrasp policy: enumerate a local grid of gripper motions, simulate each
// candidate's tactile pair by mirror-padded translation, score with the
// quality model (or any scorer), and pick the argmax. Also the
// centroid-centering heuristic baseline.

#include <functional>
#include <vector>

#include "treg/core.hpp"
#include "treg/model.hpp"

namespace treg {

// Signed 2D grid over the gripper-finger plane; always contains (0, 0).
struct ActionGrid {
    double step = 0.006;       // m
    double max_offset = 0.03;  // m

    void validate() const;
};

struct RegraspPlan {
    std::vector<PlanarOffset> candidates;
    std::vector<double> scores;
    int chosen = 0;
    PlanarOffset chosen_offset;
};

using ScoreFn = std::function<double(const ImagePair&)>;

// Cartesian product of {-max, ..., -step, 0, step, ..., max} on both axes,
// ordered lexicographically by (dx, dy).
std::vector<PlanarOffset> candidate_offsets(const ActionGrid& grid);

// Simulate and score every candidate; chosen is the argmax with ties broken
// by smallest offset norm, then lexicographic (dx, dy). Because (0,0) is a
// candidate, the chosen score is never below the keep-the-grasp score.
RegraspPlan plan_regrasp(const ImagePair& pair, const ScoreFn& scorer,
                         const SensorGeometry& geom, const ActionGrid& grid,
                         int mirror_width = 15);
RegraspPlan plan_regrasp(const ImagePair& pair, const QualityModelParams& params,
                         const ModelConfig& cfg, const SensorGeometry& geom,
                         const ActionGrid& grid, int mirror_width = 15);

// Hand motion that relocates the mean intensity centroid of the two imprints
// to the image center, componentwise clamped to the grid range. An all-zero
// pair yields (0, 0).
PlanarOffset centroid_centering(const ImagePair& pair, const SensorGeometry& geom,
                                const ActionGrid& grid);

}  // namespace treg
