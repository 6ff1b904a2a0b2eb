#pragma once

// Experiment protocols: stratified splits, leave-one-object-out
// cross-validation, and the paired closed-loop regrasp benchmark comparing
// no-regrasp, centroid-centering, and the tactile policy.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treg/model.hpp"
#include "treg/planner.hpp"
#include "treg/synthworld.hpp"

namespace treg {

struct SplitResult {
    std::vector<GraspRecord> train;
    std::vector<GraspRecord> test;
};

// Stratified by object id (order of first appearance), deterministic in
// seed, disjoint and exhaustive. Every object keeps at least one record on
// each side; objects with fewer than 2 records are rejected.
SplitResult split_dataset(const std::vector<GraspRecord>& records, double test_fraction,
                          std::uint64_t seed);

struct LooRow {
    std::string object_id;
    long n = 0;
    double accuracy = 0.0;
};

struct LooTable {
    std::vector<LooRow> per_object;
    double mean_accuracy = 0.0;
};

// For each object, train on all others (fixed 100 epochs regardless of
// cfg.epochs) and evaluate on the withheld object at boundary 0.5. Requires
// at least 2 distinct objects.
LooTable leave_one_out(const std::vector<GraspRecord>& dataset, const ModelConfig& cfg);

enum class Policy { none, centroid, tactile };

const char* policy_name(Policy p);

struct PolicyObjectResult {
    std::string object_id;
    long n = 0;
    long successes = 0;
    long baseline_successes = 0;  // same seeds, no regrasp
    double success_rate = 0.0;
    double baseline_rate = 0.0;
    double absolute_improvement = 0.0;
    std::optional<double> relative_improvement;  // empty when baseline is 0
};

struct PolicyReport {
    Policy policy = Policy::none;
    long n_grasps = 0;
    std::vector<PolicyObjectResult> per_object;
    double mean_success_rate = 0.0;
    double mean_baseline_rate = 0.0;
    double mean_absolute_improvement = 0.0;
    std::optional<double> mean_relative_improvement;  // mean over defined rows
};

// Closed-loop benchmark. Per grasp: sample a noisy pose, render, compute the
// policy's regrasp offset, apply it to the pose, re-render, shake, and count
// score > 0.5 as success. The no-regrasp baseline runs on identical seed
// streams (paired trials), so grasp i of object j sees the same proposal and
// sensor noise in every arm. For Policy::tactile, scoring uses the trained
// model unless a custom scorer is supplied.
PolicyReport run_policy_experiment(const std::vector<SyntheticObject>& objects, int n_grasps,
                                   Policy policy, const QualityModelParams* params,
                                   const ModelConfig& model_cfg, const WorldConfig& world,
                                   const ActionGrid& grid, std::uint64_t seed,
                                   const ScoreFn* custom_scorer = nullptr);

struct CompareReport {
    long n_grasps = 0;
    std::vector<PolicyReport> arms;  // ordered none, centroid, tactile
};

// Runs all three policies on paired seeds.
CompareReport compare_baseline(const std::vector<SyntheticObject>& objects, int n_grasps,
                               const QualityModelParams& params, const ModelConfig& model_cfg,
                               const WorldConfig& world, const ActionGrid& grid,
                               std::uint64_t seed);

}  // namespace treg
