#pragma once

// Tactile grasp-quality regressor: a shared conv backbone applied to both
// finger images, global average pooling, concatenation, and a sigmoid dense
// output. Training is from scratch (analytic gradients + Adam); CAM heatmaps
// come from the dense weights over the final feature maps.

#include <cstdint>
#include <utility>
#include <vector>

#include "treg/core.hpp"
#include "treg/synthworld.hpp"

namespace treg {

struct ModelConfig {
    int input_size = 32;                      // square model input, area-averaged
    std::vector<int> conv_channels = {8, 16}; // 3x3 kernels, stride 2, no padding
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int epochs = 60;
    int batch_size = 16;
    std::uint64_t init_seed = 1;

    void validate() const;
};

// Channel-major dense grid, index = (c * h + y) * w + x.
struct Tensor {
    int ch = 0;
    int h = 0;
    int w = 0;
    std::vector<double> v;

    static Tensor zeros(int ch, int h, int w) {
        return Tensor{ch, h, w, std::vector<double>(static_cast<std::size_t>(ch) * h * w, 0.0)};
    }
    double& at(int c, int y, int x) {
        return v[(static_cast<std::size_t>(c) * h + y) * w + x];
    }
    double at(int c, int y, int x) const {
        return v[(static_cast<std::size_t>(c) * h + y) * w + x];
    }
};

// One 3x3 stride-2 valid convolution. Kernels are [out_ch][in_ch][3][3]
// row-major.
struct ConvLayer {
    int in_ch = 0;
    int out_ch = 0;
    std::vector<double> kernel;
    std::vector<double> bias;
};

// All trainable parameters. The conv stack is shared by both image
// branches; dense_w has length 2 * conv.back().out_ch (left features first).
struct QualityModelParams {
    std::vector<ConvLayer> conv;
    std::vector<double> dense_w;
    double dense_b = 0.0;

    void validate() const;
};

// He-style seeded initialization (normal, std = sqrt(2 / fan_in)); biases 0.
QualityModelParams init_params(const ModelConfig& cfg);

// Gradients share the parameter layout.
using Gradients = QualityModelParams;
Gradients zeros_like(const QualityModelParams& params);

struct BranchCache {
    Tensor input;
    std::vector<Tensor> pre;   // pre-ReLU per layer
    std::vector<Tensor> post;  // post-ReLU per layer (last one feeds GAP/CAM)
    std::vector<double> gap;
};

struct ForwardCache {
    BranchCache left;
    BranchCache right;
    double z = 0.0;
    double q = 0.0;
};

// Area-average resampling to out_w x out_h (exact box filter).
TactileImage resample_area(const TactileImage& img, int out_w, int out_h);

// Images resampled to cfg.input_size and converted to single-channel tensors.
std::pair<Tensor, Tensor> prepare_input(const ImagePair& pair, int input_size);

// Predicted quality q in (0,1). Inputs must already be at model resolution
// (use prepare_input). Throws on non-finite activations.
double forward(const QualityModelParams& params, const Tensor& left, const Tensor& right,
               ForwardCache* cache = nullptr);
double forward(const QualityModelParams& params, const ImagePair& pair, int input_size,
               ForwardCache* cache = nullptr);

// Soft-label cross-entropy -[y ln q + (1-y) ln(1-q)], q clamped to
// [1e-12, 1 - 1e-12].
double soft_cross_entropy(double q, double y);

// Analytic gradients of soft_cross_entropy(forward(...), y) w.r.t. every
// parameter; both branches accumulate into the shared backbone.
Gradients backward(const QualityModelParams& params, const ForwardCache& cache, double y);

struct AdamState {
    Gradients m;
    Gradients v;
    long t = 0;
};

AdamState make_adam_state(const QualityModelParams& params);

// Bias-corrected Adam update in place; increments state.t.
void adam_step(QualityModelParams& params, const Gradients& grads, AdamState& state,
               const ModelConfig& cfg);

struct TrainResult {
    QualityModelParams params;
    std::vector<double> epoch_loss;  // mean loss per epoch
};

// Mini-batch Adam over shuffled epochs; deterministic in (dataset, config).
// Throws std::invalid_argument on an empty dataset.
TrainResult train(const std::vector<GraspRecord>& dataset, const ModelConfig& cfg);

struct EvalMetrics {
    double accuracy = 0.0;
    long true_pos = 0;   // label > boundary, q > boundary
    long false_pos = 0;  // label <= boundary, q > boundary
    long true_neg = 0;
    long false_neg = 0;
    double mean_abs_error = 0.0;
    long n = 0;
};

// A grasp is truly successful iff label > boundary, predicted successful iff
// q > boundary.
EvalMetrics evaluate(const QualityModelParams& params, const ModelConfig& cfg,
                     const std::vector<GraspRecord>& dataset, double boundary = 0.5);

// Class activation maps for both images: per image sum_c w_c * F_c over the
// final feature maps (using that image's half of the dense weights),
// bilinearly upsampled to input_size and min-max normalized to [0,1].
// Constant maps normalize to all zeros.
std::pair<TactileImage, TactileImage> cam(const QualityModelParams& params,
                                          const ImagePair& pair, int input_size);

}  // namespace treg
