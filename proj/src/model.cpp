#include "treg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "treg/rng.hpp"

namespace treg {

namespace {

constexpr int kKernel = 3;
constexpr int kStride = 2;
constexpr double kLossClamp = 1e-12;
constexpr double kQClamp = 1e-15;

// Valid convolution (no padding), so uniform inputs stay uniform through
// the stack.
int conv_out_size(int in) { return (in - kKernel) / kStride + 1; }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_params_shape(const QualityModelParams& p) {
    if (p.conv.empty()) throw std::invalid_argument("model: no conv layers");
    if (p.dense_w.size() != 2 * static_cast<std::size_t>(p.conv.back().out_ch)) {
        throw std::invalid_argument("model: dense length must be twice the final channel count");
    }
}

Tensor conv_forward(const ConvLayer& layer, const Tensor& in) {
    if (in.h < kKernel || in.w < kKernel) {
        throw std::invalid_argument("model: feature map smaller than kernel");
    }
    const int oh = conv_out_size(in.h);
    const int ow = conv_out_size(in.w);
    Tensor out = Tensor::zeros(layer.out_ch, oh, ow);
    for (int co = 0; co < layer.out_ch; ++co) {
        for (int oy = 0; oy < oh; ++oy) {
            const int iy0 = oy * kStride;
            for (int ox = 0; ox < ow; ++ox) {
                const int ix0 = ox * kStride;
                double acc = layer.bias[co];
                for (int ci = 0; ci < layer.in_ch; ++ci) {
                    const double* kb =
                        &layer.kernel[(static_cast<std::size_t>(co) * layer.in_ch + ci) * 9];
                    for (int ky = 0; ky < kKernel; ++ky) {
                        const double* row =
                            &in.v[(static_cast<std::size_t>(ci) * in.h + iy0 + ky) * in.w + ix0];
                        acc += row[0] * kb[ky * 3] + row[1] * kb[ky * 3 + 1] +
                               row[2] * kb[ky * 3 + 2];
                    }
                }
                out.at(co, oy, ox) = acc;
            }
        }
    }
    return out;
}

// Accumulates kernel/bias gradients into d_layer and, when d_in is non-null,
// input gradients into *d_in (assumed zeroed).
void conv_backward(const ConvLayer& layer, const Tensor& in, const Tensor& d_out,
                   ConvLayer& d_layer, Tensor* d_in) {
    for (int co = 0; co < layer.out_ch; ++co) {
        for (int oy = 0; oy < d_out.h; ++oy) {
            const int iy0 = oy * kStride;
            for (int ox = 0; ox < d_out.w; ++ox) {
                const double g = d_out.at(co, oy, ox);
                if (g == 0.0) continue;
                const int ix0 = ox * kStride;
                d_layer.bias[co] += g;
                for (int ci = 0; ci < layer.in_ch; ++ci) {
                    const std::size_t kbase =
                        (static_cast<std::size_t>(co) * layer.in_ch + ci) * 9;
                    for (int ky = 0; ky < kKernel; ++ky) {
                        const std::size_t row =
                            (static_cast<std::size_t>(ci) * in.h + iy0 + ky) * in.w + ix0;
                        for (int kx = 0; kx < kKernel; ++kx) {
                            d_layer.kernel[kbase + ky * 3 + kx] += g * in.v[row + kx];
                            if (d_in) d_in->v[row + kx] += g * layer.kernel[kbase + ky * 3 + kx];
                        }
                    }
                }
            }
        }
    }
}

void branch_forward(const QualityModelParams& p, const Tensor& input, BranchCache& bc) {
    if (input.ch != 1) throw std::invalid_argument("model: input must be single-channel");
    bc.input = input;
    bc.pre.clear();
    bc.post.clear();
    const Tensor* cur = &bc.input;
    for (const ConvLayer& layer : p.conv) {
        Tensor pre = conv_forward(layer, *cur);
        Tensor post = pre;
        for (double& x : post.v) x = x > 0.0 ? x : 0.0;
        bc.pre.push_back(std::move(pre));
        bc.post.push_back(std::move(post));
        cur = &bc.post.back();
    }
    const Tensor& f = bc.post.back();
    bc.gap.assign(f.ch, 0.0);
    const double inv = 1.0 / (static_cast<double>(f.h) * f.w);
    for (int c = 0; c < f.ch; ++c) {
        const double* base = &f.v[static_cast<std::size_t>(c) * f.h * f.w];
        double s = 0.0;
        for (int i = 0; i < f.h * f.w; ++i) s += base[i];
        bc.gap[c] = s * inv;
    }
}

void branch_backward(const QualityModelParams& p, const BranchCache& bc,
                     const std::vector<double>& d_gap, Gradients& g) {
    const Tensor& f = bc.post.back();
    Tensor d = Tensor::zeros(f.ch, f.h, f.w);
    const double inv = 1.0 / (static_cast<double>(f.h) * f.w);
    for (int c = 0; c < f.ch; ++c) {
        const double dg = d_gap[c] * inv;
        double* base = &d.v[static_cast<std::size_t>(c) * f.h * f.w];
        for (int i = 0; i < f.h * f.w; ++i) base[i] = dg;
    }
    for (int l = static_cast<int>(p.conv.size()) - 1; l >= 0; --l) {
        const Tensor& pre = bc.pre[l];
        for (std::size_t i = 0; i < d.v.size(); ++i) {
            if (pre.v[i] <= 0.0) d.v[i] = 0.0;
        }
        const Tensor& in = l == 0 ? bc.input : bc.post[l - 1];
        if (l == 0) {
            conv_backward(p.conv[0], in, d, g.conv[0], nullptr);
        } else {
            Tensor d_in = Tensor::zeros(in.ch, in.h, in.w);
            conv_backward(p.conv[l], in, d, g.conv[l], &d_in);
            d = std::move(d_in);
        }
    }
}

void backward_into(const QualityModelParams& params, const ForwardCache& cache, double y,
                   Gradients& g) {
    const int c_last = params.conv.back().out_ch;
    const double dz = cache.q - y;
    g.dense_b += dz;
    std::vector<double> d_gap_l(c_last), d_gap_r(c_last);
    for (int c = 0; c < c_last; ++c) {
        g.dense_w[c] += dz * cache.left.gap[c];
        g.dense_w[c_last + c] += dz * cache.right.gap[c];
        d_gap_l[c] = dz * params.dense_w[c];
        d_gap_r[c] = dz * params.dense_w[c_last + c];
    }
    branch_backward(params, cache.left, d_gap_l, g);
    branch_backward(params, cache.right, d_gap_r, g);
}

void adam_update(double* p, const double* g, double* m, double* v, std::size_t n,
                 const ModelConfig& cfg, double bc1, double bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        p[i] -= cfg.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg.epsilon);
    }
}

void scale_params(Gradients& g, double s) {
    for (ConvLayer& l : g.conv) {
        for (double& x : l.kernel) x *= s;
        for (double& x : l.bias) x *= s;
    }
    for (double& x : g.dense_w) x *= s;
    g.dense_b *= s;
}

void zero_params(Gradients& g) { scale_params(g, 0.0); }

}  // namespace

void ModelConfig::validate() const {
    if (input_size < 2) throw std::invalid_argument("ModelConfig: input_size must be >= 2");
    if (conv_channels.empty()) throw std::invalid_argument("ModelConfig: conv_channels empty");
    for (int c : conv_channels) {
        if (c < 1) throw std::invalid_argument("ModelConfig: conv channels must be >= 1");
    }
    int s = input_size;
    for (std::size_t i = 0; i < conv_channels.size(); ++i) s = conv_out_size(s);
    if (s < 2) {
        throw std::invalid_argument("ModelConfig: conv stack reduces spatial size below 2x2");
    }
    if (!(learning_rate > 0.0) || !(epsilon > 0.0)) {
        throw std::invalid_argument("ModelConfig: learning_rate and epsilon must be > 0");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw std::invalid_argument("ModelConfig: betas must be in [0,1)");
    }
    if (epochs < 1 || batch_size < 1) {
        throw std::invalid_argument("ModelConfig: epochs and batch_size must be >= 1");
    }
}

void QualityModelParams::validate() const {
    check_params_shape(*this);
    int prev = 1;
    for (const ConvLayer& l : conv) {
        if (l.in_ch != prev) throw std::invalid_argument("model: conv channel chain mismatch");
        if (l.kernel.size() != static_cast<std::size_t>(l.out_ch) * l.in_ch * 9 ||
            l.bias.size() != static_cast<std::size_t>(l.out_ch)) {
            throw std::invalid_argument("model: conv layer shape mismatch");
        }
        prev = l.out_ch;
    }
    auto finite = [](double x) { return std::isfinite(x); };
    for (const ConvLayer& l : conv) {
        if (!std::all_of(l.kernel.begin(), l.kernel.end(), finite) ||
            !std::all_of(l.bias.begin(), l.bias.end(), finite)) {
            throw std::invalid_argument("model: non-finite conv parameter");
        }
    }
    if (!std::all_of(dense_w.begin(), dense_w.end(), finite) || !finite(dense_b)) {
        throw std::invalid_argument("model: non-finite dense parameter");
    }
}

QualityModelParams init_params(const ModelConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.init_seed);
    QualityModelParams p;
    int in_ch = 1;
    for (int out_ch : cfg.conv_channels) {
        ConvLayer l;
        l.in_ch = in_ch;
        l.out_ch = out_ch;
        l.kernel.resize(static_cast<std::size_t>(out_ch) * in_ch * 9);
        l.bias.assign(static_cast<std::size_t>(out_ch), 0.0);
        const double std_dev = std::sqrt(2.0 / (in_ch * 9));
        for (double& k : l.kernel) k = std_dev * rng.normal();
        p.conv.push_back(std::move(l));
        in_ch = out_ch;
    }
    p.dense_w.resize(2 * static_cast<std::size_t>(in_ch));
    const double std_dev = std::sqrt(2.0 / p.dense_w.size());
    for (double& w : p.dense_w) w = std_dev * rng.normal();
    p.dense_b = 0.0;
    return p;
}

Gradients zeros_like(const QualityModelParams& params) {
    Gradients g = params;
    zero_params(g);
    return g;
}

TactileImage resample_area(const TactileImage& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw std::invalid_argument("resample_area: bad output size");
    if (out_w == img.width && out_h == img.height) return img;

    TactileImage out = TactileImage::zeros(out_w, out_h);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    for (int oy = 0; oy < out_h; ++oy) {
        const double y0 = oy * sy;
        const double y1 = (oy + 1) * sy;
        const int iy0 = static_cast<int>(y0);
        const int iy1 = std::min(img.height - 1, static_cast<int>(std::ceil(y1)) - 1);
        for (int ox = 0; ox < out_w; ++ox) {
            const double x0 = ox * sx;
            const double x1 = (ox + 1) * sx;
            const int ix0 = static_cast<int>(x0);
            const int ix1 = std::min(img.width - 1, static_cast<int>(std::ceil(x1)) - 1);
            double acc = 0.0;
            for (int iy = iy0; iy <= iy1; ++iy) {
                const double wy = std::min<double>(y1, iy + 1) - std::max<double>(y0, iy);
                if (wy <= 0.0) continue;
                for (int ix = ix0; ix <= ix1; ++ix) {
                    const double wx = std::min<double>(x1, ix + 1) - std::max<double>(x0, ix);
                    if (wx <= 0.0) continue;
                    acc += wx * wy * img.at(ix, iy);
                }
            }
            out.at(ox, oy) = acc / (sx * sy);
        }
    }
    return out;
}

std::pair<Tensor, Tensor> prepare_input(const ImagePair& pair, int input_size) {
    auto to_tensor = [input_size](const TactileImage& img) {
        TactileImage r = resample_area(img, input_size, input_size);
        Tensor t;
        t.ch = 1;
        t.h = input_size;
        t.w = input_size;
        t.v = std::move(r.pixels);
        return t;
    };
    return {to_tensor(pair.left), to_tensor(pair.right)};
}

double forward(const QualityModelParams& params, const Tensor& left, const Tensor& right,
               ForwardCache* cache) {
    check_params_shape(params);
    ForwardCache local;
    ForwardCache& fc = cache ? *cache : local;
    branch_forward(params, left, fc.left);
    branch_forward(params, right, fc.right);

    const int c_last = params.conv.back().out_ch;
    double z = params.dense_b;
    for (int c = 0; c < c_last; ++c) {
        z += params.dense_w[c] * fc.left.gap[c];
        z += params.dense_w[c_last + c] * fc.right.gap[c];
    }
    if (!std::isfinite(z)) {
        throw std::runtime_error("model forward: non-finite activation (z = " +
                                 std::to_string(z) + ")");
    }
    fc.z = z;
    fc.q = std::clamp(sigmoid(z), kQClamp, 1.0 - kQClamp);
    return fc.q;
}

double forward(const QualityModelParams& params, const ImagePair& pair, int input_size,
               ForwardCache* cache) {
    auto [l, r] = prepare_input(pair, input_size);
    return forward(params, l, r, cache);
}

double soft_cross_entropy(double q, double y) {
    const double qc = std::clamp(q, kLossClamp, 1.0 - kLossClamp);
    return -(y * std::log(qc) + (1.0 - y) * std::log(1.0 - qc));
}

Gradients backward(const QualityModelParams& params, const ForwardCache& cache, double y) {
    Gradients g = zeros_like(params);
    backward_into(params, cache, y, g);
    return g;
}

AdamState make_adam_state(const QualityModelParams& params) {
    return AdamState{zeros_like(params), zeros_like(params), 0};
}

void adam_step(QualityModelParams& params, const Gradients& grads, AdamState& state,
               const ModelConfig& cfg) {
    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t l = 0; l < params.conv.size(); ++l) {
        adam_update(params.conv[l].kernel.data(), grads.conv[l].kernel.data(),
                    state.m.conv[l].kernel.data(), state.v.conv[l].kernel.data(),
                    params.conv[l].kernel.size(), cfg, bc1, bc2);
        adam_update(params.conv[l].bias.data(), grads.conv[l].bias.data(),
                    state.m.conv[l].bias.data(), state.v.conv[l].bias.data(),
                    params.conv[l].bias.size(), cfg, bc1, bc2);
    }
    adam_update(params.dense_w.data(), grads.dense_w.data(), state.m.dense_w.data(),
                state.v.dense_w.data(), params.dense_w.size(), cfg, bc1, bc2);
    adam_update(&params.dense_b, &grads.dense_b, &state.m.dense_b, &state.v.dense_b, 1, cfg,
                bc1, bc2);
}

TrainResult train(const std::vector<GraspRecord>& dataset, const ModelConfig& cfg) {
    if (dataset.empty()) throw std::invalid_argument("train: dataset is empty");
    cfg.validate();

    const std::size_t n = dataset.size();
    std::vector<Tensor> lefts, rights;
    std::vector<double> labels;
    lefts.reserve(n);
    rights.reserve(n);
    labels.reserve(n);
    for (const GraspRecord& r : dataset) {
        auto [l, rt] = prepare_input(r.pair, cfg.input_size);
        lefts.push_back(std::move(l));
        rights.push_back(std::move(rt));
        labels.push_back(r.score.value);
    }

    TrainResult result;
    result.params = init_params(cfg);
    AdamState state = make_adam_state(result.params);
    Gradients grad = zeros_like(result.params);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    ForwardCache cache;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng rng(mix_seed(mix_seed(cfg.init_seed, 0x5348), static_cast<std::uint64_t>(epoch)));
        shuffle(order.data(), order.size(), rng);

        double epoch_loss = 0.0;
        std::size_t start = 0;
        while (start < n) {
            const std::size_t bsz = std::min<std::size_t>(cfg.batch_size, n - start);
            zero_params(grad);
            for (std::size_t b = 0; b < bsz; ++b) {
                const std::size_t i = order[start + b];
                const double q = forward(result.params, lefts[i], rights[i], &cache);
                epoch_loss += soft_cross_entropy(q, labels[i]);
                backward_into(result.params, cache, labels[i], grad);
            }
            scale_params(grad, 1.0 / static_cast<double>(bsz));
            adam_step(result.params, grad, state, cfg);
            start += bsz;
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
    }
    return result;
}

EvalMetrics evaluate(const QualityModelParams& params, const ModelConfig& cfg,
                     const std::vector<GraspRecord>& dataset, double boundary) {
    if (dataset.empty()) throw std::invalid_argument("evaluate: dataset is empty");
    EvalMetrics m;
    double abs_err = 0.0;
    for (const GraspRecord& r : dataset) {
        const double q = forward(params, r.pair, cfg.input_size);
        const bool truth = r.score.value > boundary;
        const bool pred = q > boundary;
        if (truth && pred) ++m.true_pos;
        if (truth && !pred) ++m.false_neg;
        if (!truth && pred) ++m.false_pos;
        if (!truth && !pred) ++m.true_neg;
        abs_err += std::abs(q - r.score.value);
    }
    m.n = static_cast<long>(dataset.size());
    m.accuracy = static_cast<double>(m.true_pos + m.true_neg) / static_cast<double>(m.n);
    m.mean_abs_error = abs_err / static_cast<double>(m.n);
    return m;
}

namespace {

TactileImage upsample_bilinear(const std::vector<double>& src, int s, int out) {
    TactileImage img = TactileImage::zeros(out, out);
    const double scale = static_cast<double>(s) / out;
    for (int oy = 0; oy < out; ++oy) {
        double fy = (oy + 0.5) * scale - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(s - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, s - 1);
        const double ty = fy - y0;
        for (int ox = 0; ox < out; ++ox) {
            double fx = (ox + 0.5) * scale - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(s - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, s - 1);
            const double tx = fx - x0;
            const double top = src[y0 * s + x0] * (1.0 - tx) + src[y0 * s + x1] * tx;
            const double bot = src[y1 * s + x0] * (1.0 - tx) + src[y1 * s + x1] * tx;
            img.at(ox, oy) = top * (1.0 - ty) + bot * ty;
        }
    }
    return img;
}

void minmax_normalize(TactileImage& img) {
    const auto [lo_it, hi_it] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (range < 1e-12) {
        std::fill(img.pixels.begin(), img.pixels.end(), 0.0);
        return;
    }
    for (double& p : img.pixels) p = (p - lo) / range;
}

TactileImage branch_cam(const BranchCache& bc, const double* w_half, int c_last, int input_size) {
    const Tensor& f = bc.post.back();
    std::vector<double> heat(static_cast<std::size_t>(f.h) * f.w, 0.0);
    for (int c = 0; c < c_last; ++c) {
        const double* base = &f.v[static_cast<std::size_t>(c) * f.h * f.w];
        for (std::size_t i = 0; i < heat.size(); ++i) heat[i] += w_half[c] * base[i];
    }
    TactileImage img = upsample_bilinear(heat, f.h, input_size);
    minmax_normalize(img);
    return img;
}

}  // namespace

std::pair<TactileImage, TactileImage> cam(const QualityModelParams& params,
                                          const ImagePair& pair, int input_size) {
    ForwardCache cache;
    forward(params, pair, input_size, &cache);
    const int c_last = params.conv.back().out_ch;
    return {branch_cam(cache.left, params.dense_w.data(), c_last, input_size),
            branch_cam(cache.right, params.dense_w.data() + c_last, c_last, input_size)};
}

}  // namespace treg
