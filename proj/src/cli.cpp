#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "treg/eval.hpp"
#include "treg/io.hpp"

namespace treg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json metrics_json(const EvalMetrics& m) {
    return json{
        {"accuracy", m.accuracy},
        {"confusion",
         {{"tp", m.true_pos}, {"fp", m.false_pos}, {"tn", m.true_neg}, {"fn", m.false_neg}}},
        {"mean_abs_error", m.mean_abs_error},
        {"n", m.n},
    };
}

json policy_report_json(const PolicyReport& r) {
    json per = json::array();
    for (const PolicyObjectResult& row : r.per_object) {
        per.push_back({
            {"object_id", row.object_id},
            {"n", row.n},
            {"successes", row.successes},
            {"success_rate", row.success_rate},
            {"baseline_successes", row.baseline_successes},
            {"baseline_rate", row.baseline_rate},
            {"absolute_improvement", row.absolute_improvement},
            {"relative_improvement",
             row.relative_improvement ? json(*row.relative_improvement) : json()},
        });
    }
    return json{
        {"policy", policy_name(r.policy)},
        {"n_grasps", r.n_grasps},
        {"per_object", per},
        {"mean_success_rate", r.mean_success_rate},
        {"mean_baseline_rate", r.mean_baseline_rate},
        {"mean_absolute_improvement", r.mean_absolute_improvement},
        {"mean_relative_improvement",
         r.mean_relative_improvement ? json(*r.mean_relative_improvement) : json()},
    };
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw DataError("write failed: " + path.string());
}

PipelineConfig config_or_default(const std::string& config_path) {
    if (config_path.empty()) return PipelineConfig{};
    return load_config(config_path);
}

Policy parse_policy(const std::string& s) {
    if (s == "none") return Policy::none;
    if (s == "centroid") return Policy::centroid;
    if (s == "tactile") return Policy::tactile;
    throw CLI::ValidationError("--policy", "must be one of none|centroid|tactile");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Tactile grasp-quality learning and regrasp planning pipeline"};
    app.require_subcommand(1);

    // Global flags; subcommands fall through to them, so both
    // `regrasp --out x gen-data` and `regrasp gen-data --out x` work.
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_path;
    app.add_option("--config", config_path, "JSON pipeline configuration");
    app.add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_option("--out", out_path, "output path");

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate a labeled grasp dataset");
    int n_per_object = 250;
    gen->add_option("--n-per-object", n_per_object, "grasps per object")
        ->check(CLI::PositiveNumber);

    // train
    auto* tr = app.add_subcommand("train", "train the grasp-quality model");
    std::string data_dir, history_path;
    tr->add_option("--data", data_dir, "dataset directory");
    tr->add_option("--history", history_path, "loss-history CSV path");

    // eval-model
    auto* ev = app.add_subcommand("eval-model", "evaluate a model on a dataset");
    std::string model_path;
    ev->add_option("--model", model_path, "TRGM weight file");
    ev->add_option("--data", data_dir, "dataset directory");

    // crossval
    auto* cv = app.add_subcommand("crossval", "leave-one-object-out cross-validation");
    cv->add_option("--data", data_dir, "dataset directory");

    // run-policy
    auto* rp = app.add_subcommand("run-policy", "closed-loop regrasp experiment");
    std::string policy_str = "none";
    int n_grasps = 100;
    rp->add_option("--policy", policy_str, "none|centroid|tactile");
    rp->add_option("--model", model_path, "TRGM weight file (tactile policy)");
    rp->add_option("--n-grasps", n_grasps, "grasps per object")->check(CLI::NonNegativeNumber);

    // compare
    auto* cm = app.add_subcommand("compare", "three-way policy comparison");
    cm->add_option("--model", model_path, "TRGM weight file");
    cm->add_option("--n-grasps", n_grasps, "grasps per object")->check(CLI::NonNegativeNumber);

    // cam
    auto* cc = app.add_subcommand("cam", "class activation heatmaps for one record");
    std::size_t record_index = 0;
    cc->add_option("--model", model_path, "TRGM weight file");
    cc->add_option("--data", data_dir, "dataset directory");
    cc->add_option("--index", record_index, "record index in the dataset");

    for (CLI::App* sub : {gen, tr, ev, cv, rp, cm, cc}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 1;
    }

    // Per-command required flags, usage errors on the error stream.
    auto require = [&](bool present, const char* what) {
        if (!present) {
            std::cerr << app.get_subcommands().front()->get_name() << ": missing required "
                      << what << "\n";
        }
        return present;
    };
    bool args_ok = require(!out_path.empty(), "--out");
    if (gen->parsed() || rp->parsed() || cm->parsed()) {
        args_ok &= require(!config_path.empty(), "--config");
    }
    if (tr->parsed() || ev->parsed() || cv->parsed() || cc->parsed()) {
        args_ok &= require(!data_dir.empty(), "--data");
    }
    if (ev->parsed() || cm->parsed() || cc->parsed()) {
        args_ok &= require(!model_path.empty(), "--model");
    }
    if (rp->parsed()) args_ok &= require(rp->count("--policy") > 0, "--policy");
    if (!args_ok) return 1;

    try {
        if (gen->parsed()) {
            const PipelineConfig cfg = load_config(config_path);
            if (cfg.objects.empty()) throw DataError(config_path + ": config has no objects");
            const auto records =
                generate_dataset(cfg.objects, n_per_object, cfg.world, seed);
            save_dataset(records, out_path);
            std::cout << "wrote " << records.size() << " records to " << out_path << "\n";
        } else if (tr->parsed()) {
            PipelineConfig cfg = config_or_default(config_path);
            if (seed_given) cfg.model.init_seed = seed;
            const auto records = load_dataset(data_dir);
            const TrainResult result = train(records, cfg.model);
            save_model(result.params, out_path);
            if (history_path.empty()) history_path = out_path + ".loss.csv";
            save_loss_history_csv(result.epoch_loss, history_path);
            std::cout << "trained on " << records.size() << " records, final loss "
                      << result.epoch_loss.back() << ", model " << out_path << "\n";
        } else if (ev->parsed()) {
            const PipelineConfig cfg = config_or_default(config_path);
            const QualityModelParams params = load_model(model_path);
            const auto records = load_dataset(data_dir);
            const EvalMetrics m = evaluate(params, cfg.model, records);
            write_json(metrics_json(m), out_path);
            std::cout << "accuracy " << m.accuracy << " on " << m.n << " records\n";
        } else if (cv->parsed()) {
            const PipelineConfig cfg = config_or_default(config_path);
            const auto records = load_dataset(data_dir);
            const LooTable table = leave_one_out(records, cfg.model);
            json per = json::array();
            for (const LooRow& row : table.per_object) {
                per.push_back({{"id", row.object_id}, {"n", row.n}, {"accuracy", row.accuracy}});
            }
            write_json(json{{"per_object", per}, {"mean_accuracy", table.mean_accuracy}},
                       out_path);
            std::cout << "leave-one-out mean accuracy " << table.mean_accuracy << "\n";
        } else if (rp->parsed()) {
            const PipelineConfig cfg = load_config(config_path);
            if (cfg.objects.empty()) throw DataError(config_path + ": config has no objects");
            const Policy policy = parse_policy(policy_str);
            QualityModelParams params;
            if (policy == Policy::tactile) {
                if (model_path.empty()) {
                    std::cerr << "run-policy: --model is required for the tactile policy\n";
                    return 1;
                }
                params = load_model(model_path);
            }
            const PolicyReport report = run_policy_experiment(
                cfg.objects, n_grasps, policy,
                policy == Policy::tactile ? &params : nullptr, cfg.model, cfg.world, cfg.grid,
                seed);
            write_json(policy_report_json(report), out_path);
            std::cout << policy_str << " mean success rate " << report.mean_success_rate
                      << "\n";
        } else if (cm->parsed()) {
            const PipelineConfig cfg = load_config(config_path);
            if (cfg.objects.empty()) throw DataError(config_path + ": config has no objects");
            const QualityModelParams params = load_model(model_path);
            const CompareReport report = compare_baseline(cfg.objects, n_grasps, params,
                                                          cfg.model, cfg.world, cfg.grid, seed);
            json arms = json::array();
            for (const PolicyReport& arm : report.arms) arms.push_back(policy_report_json(arm));
            write_json(json{{"n_grasps", report.n_grasps}, {"policies", arms}}, out_path);
            for (const PolicyReport& arm : report.arms) {
                std::cout << policy_name(arm.policy) << " mean success rate "
                          << arm.mean_success_rate << "\n";
            }
        } else if (cc->parsed()) {
            const PipelineConfig cfg = config_or_default(config_path);
            const QualityModelParams params = load_model(model_path);
            const auto records = load_dataset(data_dir);
            if (record_index >= records.size()) {
                throw DataError("cam: record index " + std::to_string(record_index) +
                                " out of range (dataset has " +
                                std::to_string(records.size()) + ")");
            }
            const auto [left, right] =
                cam(params, records[record_index].pair, cfg.model.input_size);
            save_pgm(left, out_path + "_left.pgm");
            save_pgm(right, out_path + "_right.pgm");
            std::cout << "wrote " << out_path << "_left.pgm and " << out_path
                      << "_right.pgm\n";
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace treg
