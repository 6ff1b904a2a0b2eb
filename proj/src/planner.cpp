#include "treg/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treg/transform.hpp"

namespace treg {

void ActionGrid::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("ActionGrid: step must be > 0");
    if (max_offset < 0.0) throw std::invalid_argument("ActionGrid: max_offset must be >= 0");
}

std::vector<PlanarOffset> candidate_offsets(const ActionGrid& grid) {
    grid.validate();
    const int n = static_cast<int>(std::floor(grid.max_offset / grid.step + 1e-9));
    std::vector<PlanarOffset> out;
    out.reserve(static_cast<std::size_t>(2 * n + 1) * (2 * n + 1));
    for (int ix = -n; ix <= n; ++ix) {
        for (int iy = -n; iy <= n; ++iy) {
            out.push_back(PlanarOffset{ix * grid.step, iy * grid.step});
        }
    }
    return out;
}

namespace {

// Strict total order on candidates: higher score wins, then smaller norm,
// then lexicographic (dx, dy). Order-free by construction (equal keys imply
// the identical offset).
bool better(double score_a, const PlanarOffset& a, double score_b, const PlanarOffset& b) {
    if (score_a != score_b) return score_a > score_b;
    const double na = a.dx * a.dx + a.dy * a.dy;
    const double nb = b.dx * b.dx + b.dy * b.dy;
    if (na != nb) return na < nb;
    if (a.dx != b.dx) return a.dx < b.dx;
    return a.dy < b.dy;
}

}  // namespace

RegraspPlan plan_regrasp(const ImagePair& pair, const ScoreFn& scorer,
                         const SensorGeometry& geom, const ActionGrid& grid,
                         int mirror_width) {
    pair.validate();
    RegraspPlan plan;
    plan.candidates = candidate_offsets(grid);
    plan.scores.reserve(plan.candidates.size());
    int best = 0;
    for (std::size_t i = 0; i < plan.candidates.size(); ++i) {
        const ImagePair simulated =
            simulate_regrasp_pair(pair, plan.candidates[i], geom, mirror_width);
        plan.scores.push_back(scorer(simulated));
        if (better(plan.scores[i], plan.candidates[i], plan.scores[best],
                   plan.candidates[best])) {
            best = static_cast<int>(i);
        }
    }
    plan.chosen = best;
    plan.chosen_offset = plan.candidates[best];
    return plan;
}

RegraspPlan plan_regrasp(const ImagePair& pair, const QualityModelParams& params,
                         const ModelConfig& cfg, const SensorGeometry& geom,
                         const ActionGrid& grid, int mirror_width) {
    ScoreFn scorer = [&params, &cfg](const ImagePair& p) {
        return forward(params, p, cfg.input_size);
    };
    return plan_regrasp(pair, scorer, geom, grid, mirror_width);
}

PlanarOffset centroid_centering(const ImagePair& pair, const SensorGeometry& geom,
                                const ActionGrid& grid) {
    pair.validate();
    geom.validate();
    grid.validate();

    // Mean intensity centroid over both images, in pixels from image center.
    double sum = 0.0, sum_x = 0.0, sum_y = 0.0;
    for (const TactileImage* img : {&pair.left, &pair.right}) {
        for (int y = 0; y < img->height; ++y) {
            for (int x = 0; x < img->width; ++x) {
                const double v = img->at(x, y);
                sum += v;
                sum_x += v * x;
                sum_y += v * y;
            }
        }
    }
    if (sum <= 0.0) return PlanarOffset{0.0, 0.0};

    const double cx = sum_x / sum - 0.5 * (pair.left.width - 1);
    const double cy = sum_y / sum - 0.5 * (pair.left.height - 1);

    // Imprints move opposite to the gripper, so moving the gripper by the
    // centroid's hand-frame position re-centers it (linear inverse of the
    // pixel map, no rounding).
    PlanarOffset motion{geom.width_x / geom.res_x * cx, geom.width_y / geom.res_y * cy};
    motion.dx = std::clamp(motion.dx, -grid.max_offset, grid.max_offset);
    motion.dy = std::clamp(motion.dy, -grid.max_offset, grid.max_offset);
    return motion;
}

}  // namespace treg
