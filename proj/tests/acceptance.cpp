// Acceptance suite: runs every gate criterion against the shipped object
// suites and prints one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "treg/eval.hpp"
#include "treg/io.hpp"
#include "treg/model.hpp"
#include "treg/planner.hpp"
#include "treg/rng.hpp"
#include "treg/synthworld.hpp"
#include "treg/transform.hpp"

namespace fs = std::filesystem;
using namespace treg;

namespace {

constexpr std::uint64_t kDatasetSeed = 20250807;
constexpr std::uint64_t kSplitSeed = 7;
constexpr std::uint64_t kPolicySeed = 555;
constexpr int kPolicyGrasps = 100;

struct Harness {
    int failures = 0;
    int index = 0;

    void report(const std::string& name, bool pass, const std::string& detail) {
        ++index;
        std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }

    void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
        try {
            auto [ok, detail] = fn();
            report(name, ok, detail);
        } catch (const std::exception& e) {
            report(name, false, std::string("exception: ") + e.what());
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Independent oracle for the mirror translation (band walk, not modular
// arithmetic) -- mirrors the definition pixel by pixel.

int oracle_band_walk(int k, int m) {
    int j = 1, dir = +1;
    for (int step = 1; step < k; ++step) {
        if (dir == +1 && j == m) {
            dir = -1;
        } else if (dir == -1 && j == 1) {
            dir = +1;
        } else {
            j += dir;
        }
    }
    return j;
}

int oracle_source(int out_pos, int off, int n, int mirror_width) {
    const int s = out_pos - off;
    if (s >= 0 && s < n) return s;
    const int m = std::min(mirror_width, n);
    if (s < 0) return oracle_band_walk(-s, m) - 1;
    return n - oracle_band_walk(s - (n - 1), m);
}

TactileImage oracle_translate(const TactileImage& img, const PixelOffset& off, int mirror_width) {
    TactileImage out = TactileImage::zeros(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.at(x, y) =
                img.at(oracle_source(x, off.dx, img.width, mirror_width),
                       oracle_source(y, off.dy, img.height, mirror_width));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-difference gradient check with a ReLU-kink guard: central
// differences are only a valid oracle where the loss is differentiable, so
// draws with a pre-activation within a few h of zero are redrawn.

std::vector<double*> param_ptrs(QualityModelParams& p) {
    std::vector<double*> ptrs;
    for (ConvLayer& l : p.conv) {
        for (double& k : l.kernel) ptrs.push_back(&k);
        for (double& b : l.bias) ptrs.push_back(&b);
    }
    for (double& w : p.dense_w) ptrs.push_back(&w);
    ptrs.push_back(&p.dense_b);
    return ptrs;
}

bool near_relu_kink(const ForwardCache& cache, double tol) {
    for (const BranchCache* bc : {&cache.left, &cache.right}) {
        for (const Tensor& pre : bc->pre) {
            for (double v : pre.v) {
                if (std::abs(v) < tol) return true;
            }
        }
    }
    return false;
}

bool gradcheck_once(std::uint64_t seed, std::string* why) {
    Rng cfg_rng(mix_seed(seed, 0xC0));
    ModelConfig cfg;
    cfg.input_size = 8 + static_cast<int>(cfg_rng.next_below(5));  // 8..12
    cfg.conv_channels = {1 + static_cast<int>(cfg_rng.next_below(3))};
    if (cfg.input_size >= 11 && cfg_rng.next_double() < 0.5) {
        cfg.conv_channels.push_back(1 + static_cast<int>(cfg_rng.next_below(3)));
    }

    QualityModelParams params;
    Tensor left, right;
    double y = 0.5;
    ForwardCache cache;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 64) {
            if (why) *why = "no kink-free draw found";
            return false;
        }
        cfg.init_seed = mix_seed(seed, attempt);
        params = init_params(cfg);
        Rng rng(mix_seed(cfg.init_seed, 0xF1));
        left = Tensor::zeros(1, cfg.input_size, cfg.input_size);
        right = Tensor::zeros(1, cfg.input_size, cfg.input_size);
        for (double& v : left.v) v = rng.next_double();
        for (double& v : right.v) v = rng.next_double();
        y = rng.uniform(0.1, 0.9);
        forward(params, left, right, &cache);
        if (!near_relu_kink(cache, 5e-3)) break;
    }
    Gradients analytic = backward(params, cache, y);

    std::vector<double*> aptr = param_ptrs(analytic);
    std::vector<double*> pptr = param_ptrs(params);
    const double h = 1e-4;
    for (std::size_t i = 0; i < pptr.size(); ++i) {
        const double saved = *pptr[i];
        *pptr[i] = saved + h;
        const double lp = soft_cross_entropy(forward(params, left, right), y);
        *pptr[i] = saved - h;
        const double lm = soft_cross_entropy(forward(params, left, right), y);
        *pptr[i] = saved;
        const double fd = (lp - lm) / (2.0 * h);
        const double a = *aptr[i];
        const double denom = std::max({std::abs(a), std::abs(fd), 1e-3});
        if (std::abs(a - fd) / denom > 1e-4) {
            if (why) {
                *why = "param " + std::to_string(i) + ": analytic " + fmt(a) + " vs fd " +
                       fmt(fd);
            }
            return false;
        }
    }
    return true;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "";
    return std::string(std::istreambuf_iterator<char>(in), {});
}

bool same_tree(const fs::path& a, const fs::path& b, std::string* why) {
    std::vector<std::string> names_a, names_b;
    for (const auto& e : fs::directory_iterator(a)) names_a.push_back(e.path().filename());
    for (const auto& e : fs::directory_iterator(b)) names_b.push_back(e.path().filename());
    std::sort(names_a.begin(), names_a.end());
    std::sort(names_b.begin(), names_b.end());
    if (names_a != names_b) {
        if (why) *why = "directory listings differ";
        return false;
    }
    for (const std::string& name : names_a) {
        if (read_bytes(a / name) != read_bytes(b / name)) {
            if (why) *why = "file differs: " + name;
            return false;
        }
    }
    return true;
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return rc;
}

// Deterministic pseudorandom scorer keyed on image content.
ScoreFn hashed_scorer(std::uint64_t salt) {
    return [salt](const ImagePair& pair) {
        std::uint64_t h = salt;
        for (double p : pair.left.pixels) {
            h = splitmix64(h ^ static_cast<std::uint64_t>(p * 255.0));
        }
        return static_cast<double>(h >> 11) * 0x1.0p-53;
    };
}

}  // namespace

int main(int argc, char** argv) {
    fs::path configs_dir = "configs";
    std::string cli_path;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--configs") configs_dir = argv[i + 1];
        if (flag == "--cli") cli_path = argv[i + 1];
    }

    const fs::path work = fs::temp_directory_path() / "treg_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    Harness h;

    // ------------------------------------------------------------------ 1
    h.run("shake-score exactness and properties", []() -> std::pair<bool, std::string> {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        ok &= score_from_shake({true, 2.0, 2.0, 4.0}).value == 0.0;
        ok &= score_from_shake({true, 4.0, 2.0, 4.0}).value == 0.25;
        ok &= score_from_shake({false, 0.0, 0.0, 4.0}).value == 1.0;
        ok &= score_from_shake({true, 6.0, 2.0, 4.0}).value == 0.5;
        Rng rng(424242);
        for (int i = 0; i < 10000 && ok; ++i) {
            const double t_start = rng.uniform(0.0, 5.0);
            const double dur = rng.uniform(0.5, 6.0);
            const bool failed = rng.next_double() < 0.75;
            double t1 = t_start + rng.uniform(-0.3, 1.0) * dur;
            double t2 = t_start + rng.uniform(-0.3, 1.0) * dur;
            if (t1 > t2) std::swap(t1, t2);
            const double s1 = score_from_shake({failed, t1, t_start, dur}).value;
            ok &= s1 >= 0.0 && s1 <= 1.0;
            if (failed) {
                const double s2 = score_from_shake({failed, t2, t_start, dur}).value;
                ok &= s1 <= 0.5 && s2 <= 0.5 && s1 <= s2;
            }
        }
        const double dt = seconds_since(t0);
        return {ok && dt < 1.0, "10^4 outcomes in " + fmt(dt) + " s"};
    });

    // ------------------------------------------------------------------ 2
    h.run("mirror translation matches the brute-force oracle",
          []() -> std::pair<bool, std::string> {
              const auto t0 = std::chrono::steady_clock::now();
              Rng rng(777);
              for (int trial = 0; trial < 500; ++trial) {
                  const int w = 1 + static_cast<int>(rng.next_below(32));
                  const int hgt = 1 + static_cast<int>(rng.next_below(32));
                  TactileImage img = TactileImage::zeros(w, hgt);
                  for (double& p : img.pixels) p = rng.next_double();
                  const PixelOffset off{
                      static_cast<int>(rng.next_below(2 * (w + 5) + 1)) - (w + 5),
                      static_cast<int>(rng.next_below(2 * (hgt + 5) + 1)) - (hgt + 5)};
                  const int m = 1 + static_cast<int>(rng.next_below(20));
                  if (translate_with_mirror(img, off, m).pixels !=
                      oracle_translate(img, off, m).pixels) {
                      return {false, "mismatch at trial " + std::to_string(trial)};
                  }
              }
              const double dt = seconds_since(t0);
              return {dt < 10.0, "500 cases in " + fmt(dt) + " s"};
          });

    // ------------------------------------------------------------------ 3
    h.run("gradients match finite differences on 100 random nets",
          []() -> std::pair<bool, std::string> {
              const auto t0 = std::chrono::steady_clock::now();
              for (int trial = 0; trial < 100; ++trial) {
                  std::string why;
                  if (!gradcheck_once(9000 + trial, &why)) {
                      return {false, "trial " + std::to_string(trial) + ": " + why};
                  }
              }
              const double dt = seconds_since(t0);
              return {dt < 60.0, "100 configurations in " + fmt(dt) + " s"};
          });

    // ------------------------------------------------------------------ 4
    h.run("adam first-step magnitude equals the learning rate",
          []() -> std::pair<bool, std::string> {
              ModelConfig cfg;
              cfg.input_size = 12;
              cfg.conv_channels = {2};
              QualityModelParams params = init_params(cfg);
              QualityModelParams before = params;
              Gradients g = zeros_like(params);
              Rng rng(31337);
              for (double* p : param_ptrs(g)) {
                  double v = rng.uniform(-3.0, 3.0);
                  if (std::abs(v) < 1e-3) v = v < 0 ? -1e-3 : 1e-3;
                  *p = v;
              }
              AdamState st = make_adam_state(params);
              adam_step(params, g, st, cfg);
              std::vector<double*> pa = param_ptrs(params);
              std::vector<double*> pb = param_ptrs(before);
              for (std::size_t i = 0; i < pa.size(); ++i) {
                  if (std::abs(std::abs(*pa[i] - *pb[i]) - cfg.learning_rate) > 1e-6) {
                      return {false, "step deviates at param " + std::to_string(i)};
                  }
              }
              QualityModelParams p2 = before;
              AdamState st2 = make_adam_state(p2);
              adam_step(p2, zeros_like(p2), st2, cfg);
              std::vector<double*> pz = param_ptrs(p2);
              for (std::size_t i = 0; i < pz.size(); ++i) {
                  if (*pz[i] != *pb[i]) return {false, "zero gradient moved a parameter"};
              }
              return {true, ""};
          });

    // -------------------------------------------------------- shared state
    // Criteria 5-12 exercise the shipped suites end to end.
    PipelineConfig cfg6, cfg4;
    std::vector<GraspRecord> dataset;
    SplitResult split;
    TrainResult trained;
    double train_seconds = 0.0;
    bool setup_ok = false;
    std::string setup_error;
    try {
        cfg6 = load_config(configs_dir / "suite6.json");
        cfg4 = load_config(configs_dir / "policy4.json");
        dataset = generate_dataset(cfg6.objects, 250, cfg6.world, kDatasetSeed);
        split = split_dataset(dataset, 0.1, kSplitSeed);
        const auto t0 = std::chrono::steady_clock::now();
        trained = train(split.train, cfg6.model);
        train_seconds = seconds_since(t0);
        setup_ok = true;
    } catch (const std::exception& e) {
        setup_error = e.what();
    }
    auto need_setup = [&]() -> std::optional<std::pair<bool, std::string>> {
        if (!setup_ok) return std::pair<bool, std::string>{false, "setup failed: " + setup_error};
        return std::nullopt;
    };

    // ------------------------------------------------------------------ 5
    h.run("held-out accuracy on the shipped suite", [&]() -> std::pair<bool, std::string> {
        if (auto bail = need_setup()) return *bail;
        long succ = 0;
        for (const GraspRecord& r : dataset) succ += r.score.value > 0.5 ? 1 : 0;
        const double frac = static_cast<double>(succ) / static_cast<double>(dataset.size());
        const EvalMetrics m = evaluate(trained.params, cfg6.model, split.test);
        const bool ok = dataset.size() == 1500 && frac >= 0.3 && frac <= 0.7 &&
                        m.accuracy >= 0.80 && train_seconds < 600.0;
        return {ok, "accuracy " + fmt(m.accuracy) + " on " + std::to_string(m.n) +
                        " held-out records, success fraction " + fmt(frac) + ", train " +
                        fmt(train_seconds) + " s"};
    });

    // ------------------------------------------------------------------ 6
    h.run("leave-one-object-out mean accuracy", [&]() -> std::pair<bool, std::string> {
        if (auto bail = need_setup()) return *bail;
        const LooTable loo = leave_one_out(dataset, cfg6.model);
        std::string detail = "mean " + fmt(loo.mean_accuracy) + " [";
        for (const LooRow& row : loo.per_object) detail += " " + fmt(row.accuracy);
        detail += " ]";
        return {loo.mean_accuracy >= 0.65, detail};
    });

    // ------------------------------------------------------------------ 7
    h.run("closed-loop gains on the policy suite", [&]() -> std::pair<bool, std::string> {
        if (auto bail = need_setup()) return *bail;
        const PolicyReport model_arm =
            run_policy_experiment(cfg4.objects, kPolicyGrasps, Policy::tactile,
                                  &trained.params, cfg4.model, cfg4.world, cfg4.grid,
                                  kPolicySeed);
        if (!model_arm.mean_relative_improvement ||
            *model_arm.mean_relative_improvement < 0.30) {
            return {false, "model-policy mean relative improvement " +
                               fmt(model_arm.mean_relative_improvement.value_or(-1))};
        }
        ScoreFn oracle = [](const ImagePair& p) { return contact_quality(p); };
        const PolicyReport oracle_arm =
            run_policy_experiment(cfg4.objects, kPolicyGrasps, Policy::tactile, nullptr,
                                  cfg4.model, cfg4.world, cfg4.grid, kPolicySeed, &oracle);
        for (const PolicyObjectResult& row : oracle_arm.per_object) {
            if (row.successes <= row.baseline_successes) {
                return {false, "oracle scorer not strictly positive on " + row.object_id};
            }
        }
        return {true, "model mean relative improvement " +
                          fmt(*model_arm.mean_relative_improvement) +
                          ", oracle strictly positive on all " +
                          std::to_string(oracle_arm.per_object.size()) + " objects"};
    });

    // ------------------------------------------------------------------ 8
    h.run("policy ordering tactile >= centroid >= none", [&]() -> std::pair<bool, std::string> {
        if (auto bail = need_setup()) return *bail;
        const CompareReport cmp =
            compare_baseline(cfg4.objects, kPolicyGrasps, trained.params, cfg4.model,
                             cfg4.world, cfg4.grid, kPolicySeed);
        const double none = cmp.arms[0].mean_success_rate;
        const double centroid = cmp.arms[1].mean_success_rate;
        const double tactile = cmp.arms[2].mean_success_rate;
        return {tactile >= centroid && centroid >= none,
                "none " + fmt(none) + ", centroid " + fmt(centroid) + ", tactile " +
                    fmt(tactile)};
    });

    // ------------------------------------------------------------------ 9
    h.run("planner invariants on 1000 randomized trials", [&]() -> std::pair<bool, std::string> {
        const SensorGeometry geom{24, 24, 0.024, 0.024};
        const ActionGrid grid{0.004, 0.008};
        Rng rng(8181);
        for (int trial = 0; trial < 1000; ++trial) {
            TactileImage img = TactileImage::zeros(24, 24);
            for (double& p : img.pixels) {
                p = rng.next_double() < 0.7 ? 0.0 : rng.next_double();
            }
            const ImagePair pair{img, img};
            const ScoreFn base = hashed_scorer(trial);
            const RegraspPlan plan = plan_regrasp(pair, base, geom, grid);

            double keep = 0.0;
            for (std::size_t i = 0; i < plan.candidates.size(); ++i) {
                if (plan.candidates[i].dx == 0.0 && plan.candidates[i].dy == 0.0) {
                    keep = plan.scores[i];
                }
            }
            if (plan.scores[plan.chosen] < keep) {
                return {false, "chosen below keep at trial " + std::to_string(trial)};
            }

            const ScoreFn warped = [&base](const ImagePair& p) {
                return 3.0 * std::tanh(2.0 * base(p)) + 1.0;
            };
            const RegraspPlan plan2 = plan_regrasp(pair, warped, geom, grid);
            if (plan2.chosen != plan.chosen) {
                return {false, "argmax changed under monotone transform at trial " +
                                   std::to_string(trial)};
            }

            const double c = rng.next_double();
            const ScoreFn constant = [c](const ImagePair&) { return c; };
            const RegraspPlan plan3 = plan_regrasp(pair, constant, geom, grid);
            if (plan3.chosen_offset.dx != 0.0 || plan3.chosen_offset.dy != 0.0) {
                return {false, "constant scorer did not keep the grasp"};
            }
        }
        return {true, ""};
    });

    // ------------------------------------------------------------------ 10
    h.run("CLI determinism: gen-data, train, compare", [&]() -> std::pair<bool, std::string> {
        if (cli_path.empty() || !fs::exists(cli_path)) {
            return {false, "CLI binary not found: " + cli_path};
        }
        const std::string cfg = (configs_dir / "suite6.json").string();
        const fs::path d1 = work / "det_data1";
        const fs::path d2 = work / "det_data2";
        for (const auto& [dir, tag] : {std::pair{d1, "1"}, std::pair{d2, "2"}}) {
            if (run_cli(cli_path, "gen-data --config " + cfg + " --seed 11 --n-per-object 40 --out " +
                                      dir.string()) != 0) {
                return {false, std::string("gen-data run ") + tag + " failed"};
            }
        }
        std::string why;
        if (!same_tree(d1, d2, &why)) return {false, "gen-data not byte-identical: " + why};

        const fs::path m1 = work / "det_m1.bin";
        const fs::path m2 = work / "det_m2.bin";
        for (const auto& [path, tag] : {std::pair{m1, "1"}, std::pair{m2, "2"}}) {
            if (run_cli(cli_path, "train --config " + cfg + " --data " + d1.string() +
                                      " --out " + path.string()) != 0) {
                return {false, std::string("train run ") + tag + " failed"};
            }
        }
        if (read_bytes(m1) != read_bytes(m2)) return {false, "model files differ"};
        if (read_bytes(m1).empty()) return {false, "model file empty"};
        if (read_bytes(fs::path(m1.string() + ".loss.csv")) !=
            read_bytes(fs::path(m2.string() + ".loss.csv"))) {
            return {false, "loss histories differ"};
        }

        const std::string pol = (configs_dir / "policy4.json").string();
        const fs::path c1 = work / "det_cmp1.json";
        const fs::path c2 = work / "det_cmp2.json";
        for (const auto& [path, tag] : {std::pair{c1, "1"}, std::pair{c2, "2"}}) {
            if (run_cli(cli_path, "compare --config " + pol + " --model " + m1.string() +
                                      " --seed 13 --n-grasps 25 --out " + path.string()) != 0) {
                return {false, std::string("compare run ") + tag + " failed"};
            }
        }
        if (read_bytes(c1) != read_bytes(c2)) return {false, "compare reports differ"};
        if (read_bytes(c1).empty()) return {false, "compare report empty"};
        return {true, ""};
    });

    // ------------------------------------------------------------------ 11
    h.run("persistence round-trips", [&]() -> std::pair<bool, std::string> {
        if (auto bail = need_setup()) return *bail;
        const fs::path mpath = work / "rt_model.bin";
        save_model(trained.params, mpath);
        const QualityModelParams back = load_model(mpath);
        const fs::path mpath2 = work / "rt_model2.bin";
        save_model(back, mpath2);
        if (read_bytes(mpath) != read_bytes(mpath2)) {
            return {false, "weight file round-trip not bit-exact"};
        }

        std::vector<GraspRecord> subset(dataset.begin(), dataset.begin() + 50);
        const fs::path dpath = work / "rt_data";
        save_dataset(subset, dpath);
        const std::vector<GraspRecord> loaded = load_dataset(dpath);
        if (loaded.size() != subset.size()) return {false, "record count changed"};
        for (std::size_t i = 0; i < subset.size(); ++i) {
            if (loaded[i].score.value != subset[i].score.value) {
                return {false, "score not exact at record " + std::to_string(i)};
            }
            for (std::size_t k = 0; k < subset[i].pair.left.pixels.size(); ++k) {
                if (std::abs(loaded[i].pair.left.pixels[k] - subset[i].pair.left.pixels[k]) >
                    1.0 / 255.0) {
                    return {false, "intensity drift beyond 1/255"};
                }
            }
        }
        return {true, ""};
    });

    // ------------------------------------------------------------------ 12
    h.run("CAM sanity on held-out successful grasps", [&]() -> std::pair<bool, std::string> {
        if (auto bail = need_setup()) return *bail;
        TactileImage uniform = TactileImage::zeros(64, 64);
        for (double& p : uniform.pixels) p = 0.42;
        const auto [ul, ur] = cam(trained.params, ImagePair{uniform, uniform},
                                  cfg6.model.input_size);
        for (double p : ul.pixels) {
            if (p != 0.0) return {false, "uniform input did not yield a zero heatmap"};
        }
        for (double p : ur.pixels) {
            if (p != 0.0) return {false, "uniform input did not yield a zero heatmap"};
        }

        int ok_count = 0, total = 0;
        for (const GraspRecord& r : split.test) {
            if (r.score.value <= 0.5) continue;
            const auto [hl, hr] = cam(trained.params, r.pair, cfg6.model.input_size);
            const TactileImage small =
                resample_area(r.pair.left, cfg6.model.input_size, cfg6.model.input_size);
            double in_sum = 0.0, out_sum = 0.0;
            int in_n = 0, out_n = 0;
            for (std::size_t i = 0; i < small.pixels.size(); ++i) {
                if (small.pixels[i] > 0.0) {
                    in_sum += hl.pixels[i];
                    ++in_n;
                } else {
                    out_sum += hl.pixels[i];
                    ++out_n;
                }
            }
            if (in_n == 0 || out_n == 0) continue;
            ++total;
            if (in_sum / in_n > out_sum / out_n) ++ok_count;
        }
        const double frac = total > 0 ? static_cast<double>(ok_count) / total : 0.0;
        return {frac >= 0.70, "contact region brighter on " + std::to_string(ok_count) + "/" +
                                  std::to_string(total) + " (" + fmt(frac) + ")"};
    });

    if (h.failures == 0) {
        std::printf("all %d criteria passed\n", h.index);
    } else {
        std::printf("%d of %d criteria FAILED\n", h.failures, h.index);
    }
    return h.failures == 0 ? 0 : 1;
}
