#include "treg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "treg/rng.hpp"

namespace treg {

SplitResult split_dataset(const std::vector<GraspRecord>& records, double test_fraction,
                          std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("split_dataset: test_fraction must be in (0,1)");
    }
    // Strata in order of first appearance.
    std::vector<std::string> ids;
    std::vector<std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string& id = records[i].object_id;
        auto it = std::find(ids.begin(), ids.end(), id);
        if (it == ids.end()) {
            ids.push_back(id);
            strata.emplace_back();
            it = ids.end() - 1;
        }
        strata[static_cast<std::size_t>(it - ids.begin())].push_back(i);
    }

    SplitResult out;
    for (std::size_t j = 0; j < strata.size(); ++j) {
        std::vector<std::size_t>& idx = strata[j];
        if (idx.size() < 2) {
            throw std::invalid_argument("split_dataset: object " + ids[j] +
                                        " has fewer than 2 records");
        }
        Rng rng(mix_seed(seed, j));
        shuffle(idx.data(), idx.size(), rng);
        const double want = std::floor(static_cast<double>(idx.size()) * test_fraction + 0.5);
        const std::size_t t = std::clamp<std::size_t>(static_cast<std::size_t>(want), 1,
                                                      idx.size() - 1);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            (k < t ? out.test : out.train).push_back(records[idx[k]]);
        }
    }
    return out;
}

LooTable leave_one_out(const std::vector<GraspRecord>& dataset, const ModelConfig& cfg) {
    std::vector<std::string> ids;
    for (const GraspRecord& r : dataset) {
        if (std::find(ids.begin(), ids.end(), r.object_id) == ids.end()) {
            ids.push_back(r.object_id);
        }
    }
    if (ids.size() < 2) {
        throw std::invalid_argument("leave_one_out: needs at least 2 distinct objects");
    }

    ModelConfig fold_cfg = cfg;
    fold_cfg.epochs = 100;

    LooTable table;
    double acc_sum = 0.0;
    for (const std::string& held : ids) {
        std::vector<GraspRecord> train_set, test_set;
        for (const GraspRecord& r : dataset) {
            (r.object_id == held ? test_set : train_set).push_back(r);
        }
        const TrainResult tr = train(train_set, fold_cfg);
        const EvalMetrics m = evaluate(tr.params, fold_cfg, test_set);
        table.per_object.push_back(LooRow{held, m.n, m.accuracy});
        acc_sum += m.accuracy;
    }
    table.mean_accuracy = acc_sum / static_cast<double>(ids.size());
    return table;
}

const char* policy_name(Policy p) {
    switch (p) {
        case Policy::none: return "none";
        case Policy::centroid: return "centroid";
        case Policy::tactile: return "tactile";
    }
    return "?";
}

namespace {

// One grasp trial: noisy proposal, initial imprint, policy offset, regrasp,
// shake. Sub-seeds are fixed per stage so every policy arm sees identical
// noise streams.
bool run_trial(const SyntheticObject& obj, std::uint64_t trial_seed, Policy policy,
               const QualityModelParams* params, const ModelConfig& model_cfg,
               const WorldConfig& world, const ActionGrid& grid, const ScoreFn* custom_scorer) {
    const GraspPose pose =
        sample_noisy_grasp(obj, GraspPose{}, mix_seed(trial_seed, 1), world.noise_scale);
    const ImagePair initial = render_imprint(obj, pose, world.geom, world.max_depth,
                                             world.render_noise, mix_seed(trial_seed, 2));

    PlanarOffset offset{0.0, 0.0};
    switch (policy) {
        case Policy::none:
            break;
        case Policy::centroid:
            offset = centroid_centering(initial, world.geom, grid);
            break;
        case Policy::tactile: {
            RegraspPlan plan;
            if (custom_scorer) {
                plan = plan_regrasp(initial, *custom_scorer, world.geom, grid,
                                    world.mirror_width);
            } else {
                plan = plan_regrasp(initial, *params, model_cfg, world.geom, grid,
                                    world.mirror_width);
            }
            offset = plan.chosen_offset;
            break;
        }
    }

    const GraspPose regrasped{PlanarOffset{pose.offset.dx + offset.dx,
                                           pose.offset.dy + offset.dy}};
    const ImagePair final_pair = render_imprint(obj, regrasped, world.geom, world.max_depth,
                                                world.render_noise, mix_seed(trial_seed, 3));
    const GraspScore score = score_from_shake(simulate_shake(obj, final_pair, world.shake));
    return score.value > 0.5;
}

}  // namespace

PolicyReport run_policy_experiment(const std::vector<SyntheticObject>& objects, int n_grasps,
                                   Policy policy, const QualityModelParams* params,
                                   const ModelConfig& model_cfg, const WorldConfig& world,
                                   const ActionGrid& grid, std::uint64_t seed,
                                   const ScoreFn* custom_scorer) {
    if (n_grasps < 0) throw std::invalid_argument("run_policy_experiment: n_grasps < 0");
    if (policy == Policy::tactile && params == nullptr && custom_scorer == nullptr) {
        throw std::invalid_argument("run_policy_experiment: tactile policy needs a model");
    }

    PolicyReport report;
    report.policy = policy;
    report.n_grasps = n_grasps;
    if (n_grasps == 0) return report;

    double rate_sum = 0.0, base_sum = 0.0, abs_sum = 0.0, rel_sum = 0.0;
    long rel_count = 0;
    for (std::size_t j = 0; j < objects.size(); ++j) {
        const SyntheticObject& obj = objects[j];
        PolicyObjectResult row;
        row.object_id = obj.id;
        row.n = n_grasps;
        for (int i = 0; i < n_grasps; ++i) {
            const std::uint64_t trial_seed = record_seed(seed, j, static_cast<std::size_t>(i));
            const bool ok = run_trial(obj, trial_seed, policy, params, model_cfg, world, grid,
                                      custom_scorer);
            const bool base_ok =
                policy == Policy::none
                    ? ok
                    : run_trial(obj, trial_seed, Policy::none, nullptr, model_cfg, world, grid,
                                nullptr);
            row.successes += ok ? 1 : 0;
            row.baseline_successes += base_ok ? 1 : 0;
        }
        row.success_rate = static_cast<double>(row.successes) / n_grasps;
        row.baseline_rate = static_cast<double>(row.baseline_successes) / n_grasps;
        row.absolute_improvement = row.success_rate - row.baseline_rate;
        if (row.baseline_successes > 0) {
            row.relative_improvement = row.absolute_improvement / row.baseline_rate;
            rel_sum += *row.relative_improvement;
            ++rel_count;
        }
        rate_sum += row.success_rate;
        base_sum += row.baseline_rate;
        abs_sum += row.absolute_improvement;
        report.per_object.push_back(std::move(row));
    }

    const double n_obj = static_cast<double>(objects.size());
    report.mean_success_rate = rate_sum / n_obj;
    report.mean_baseline_rate = base_sum / n_obj;
    report.mean_absolute_improvement = abs_sum / n_obj;
    if (rel_count > 0) report.mean_relative_improvement = rel_sum / rel_count;
    return report;
}

CompareReport compare_baseline(const std::vector<SyntheticObject>& objects, int n_grasps,
                               const QualityModelParams& params, const ModelConfig& model_cfg,
                               const WorldConfig& world, const ActionGrid& grid,
                               std::uint64_t seed) {
    CompareReport report;
    report.n_grasps = n_grasps;
    for (Policy p : {Policy::none, Policy::centroid, Policy::tactile}) {
        report.arms.push_back(run_policy_experiment(objects, n_grasps, p, &params, model_cfg,
                                                    world, grid, seed));
    }
    return report;
}

}  // namespace treg
