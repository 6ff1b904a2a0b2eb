#include "treg/synthworld.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treg/rng.hpp"

namespace treg {

void SyntheticObject::validate(double max_height) const {
    if (!(mass > 0.0)) throw std::invalid_argument("SyntheticObject " + id + ": mass must be > 0");
    if (!(friction > 0.0)) {
        throw std::invalid_argument("SyntheticObject " + id + ": friction must be > 0");
    }
    if (primitives.empty()) {
        throw std::invalid_argument("SyntheticObject " + id + ": needs at least one primitive");
    }
    for (const Primitive& p : primitives) {
        if (!(p.sx > 0.0) || !(p.sy > 0.0)) {
            throw std::invalid_argument("SyntheticObject " + id + ": primitive size must be > 0");
        }
        if (!(p.height > 0.0) || p.height > max_height) {
            throw std::invalid_argument("SyntheticObject " + id +
                                        ": primitive height must be in (0, max_depth]");
        }
        if (p.shape == PrimitiveShape::ridge_array && !(p.pitch > 0.0)) {
            throw std::invalid_argument("SyntheticObject " + id + ": ridge pitch must be > 0");
        }
    }
}

double SyntheticObject::half_extent_x() const {
    double lo = 0.0, hi = 0.0;
    for (const Primitive& p : primitives) {
        lo = std::min(lo, p.cx - p.sx);
        hi = std::max(hi, p.cx + p.sx);
    }
    return std::max(std::abs(lo), std::abs(hi));
}

double SyntheticObject::half_extent_y() const {
    double lo = 0.0, hi = 0.0;
    for (const Primitive& p : primitives) {
        lo = std::min(lo, p.cy - p.sy);
        hi = std::max(hi, p.cy + p.sy);
    }
    return std::max(std::abs(lo), std::abs(hi));
}

void ShakeConfig::validate() const {
    if (!(grip_force > 0.0) || !(amplitude > 0.0) || !(frequency > 0.0) || !(duration > 0.0) ||
        !(gravity > 0.0)) {
        throw std::invalid_argument("ShakeConfig: all parameters must be positive");
    }
}

double height_at(const SyntheticObject& obj, double x, double y) {
    double h = 0.0;
    for (const Primitive& p : obj.primitives) {
        const double lx = x - p.cx;
        const double ly = y - p.cy;
        switch (p.shape) {
            case PrimitiveShape::disk:
                if (lx * lx + ly * ly <= p.sx * p.sx) h = std::max(h, p.height);
                break;
            case PrimitiveShape::rectangle:
                if (std::abs(lx) <= p.sx && std::abs(ly) <= p.sy) h = std::max(h, p.height);
                break;
            case PrimitiveShape::ridge_array:
                if (std::abs(lx) <= p.sx && std::abs(ly) <= p.sy) {
                    // Ridges parallel to y: on for half of each pitch period.
                    double phase = std::fmod(lx - (-p.sx), p.pitch);
                    if (phase < 0.0) phase += p.pitch;
                    if (phase <= 0.5 * p.pitch) h = std::max(h, p.height);
                }
                break;
        }
    }
    return h;
}

ImagePair render_imprint(const SyntheticObject& obj, const GraspPose& pose,
                         const SensorGeometry& geom, double max_depth, double noise_amp,
                         std::uint64_t seed) {
    geom.validate();
    if (!(max_depth > 0.0)) throw std::invalid_argument("render_imprint: max_depth must be > 0");

    TactileImage clean = TactileImage::zeros(geom.res_x, geom.res_y);
    for (int py = 0; py < geom.res_y; ++py) {
        const double y = ((py + 0.5) / geom.res_y - 0.5) * geom.width_y + pose.offset.dy;
        for (int px = 0; px < geom.res_x; ++px) {
            const double x = ((px + 0.5) / geom.res_x - 0.5) * geom.width_x + pose.offset.dx;
            const double h = height_at(obj, x, y);
            if (h > 0.0) clean.at(px, py) = std::min(h / max_depth, 1.0);
        }
    }

    ImagePair pair{clean, clean};
    if (noise_amp > 0.0) {
        Rng rng_l(mix_seed(seed, 0x4C));
        Rng rng_r(mix_seed(seed, 0x52));
        for (std::size_t i = 0; i < clean.pixels.size(); ++i) {
            if (clean.pixels[i] > 0.0) {
                pair.left.pixels[i] = std::clamp(
                    clean.pixels[i] + rng_l.uniform(-noise_amp, noise_amp), 0.0, 1.0);
                pair.right.pixels[i] = std::clamp(
                    clean.pixels[i] + rng_r.uniform(-noise_amp, noise_amp), 0.0, 1.0);
            }
        }
    }
    return pair;
}

double contact_quality(const TactileImage& img) {
    double sum = 0.0, sum_x = 0.0, sum_y = 0.0;
    std::size_t nonzero = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double v = img.at(x, y);
            if (v > 0.0) {
                ++nonzero;
                sum += v;
                sum_x += v * x;
                sum_y += v * y;
            }
        }
    }
    if (nonzero == 0) return 0.0;

    const double mean_nonzero = sum / static_cast<double>(nonzero);
    const double fraction =
        static_cast<double>(nonzero) / (static_cast<double>(img.width) * img.height);
    const double cx = sum_x / sum - 0.5 * (img.width - 1);
    const double cy = sum_y / sum - 0.5 * (img.height - 1);
    const double half_diag =
        0.5 * std::sqrt(static_cast<double>(img.width) * img.width +
                        static_cast<double>(img.height) * img.height);
    double d_hat = std::sqrt(cx * cx + cy * cy) / half_diag;
    d_hat = std::min(d_hat, 1.0);
    return mean_nonzero * fraction * (1.0 - d_hat);
}

double contact_quality(const ImagePair& pair) {
    return 0.5 * (contact_quality(pair.left) + contact_quality(pair.right));
}

ShakeOutcome simulate_shake(const SyntheticObject& obj, const ImagePair& pair,
                            const ShakeConfig& cfg) {
    cfg.validate();
    constexpr double kTimeStep = 1e-3;
    const double t0 = 0.0;

    ShakeOutcome out;
    out.start_time = t0;
    out.duration = cfg.duration;

    const double q = contact_quality(pair);
    const double capacity = obj.friction * cfg.grip_force * q;
    if (q <= 0.0) {
        out.failed = true;
        out.failure_time = t0;
        return out;
    }

    const long steps = std::lround(cfg.duration / kTimeStep);
    const double two_pi_f = 2.0 * 3.14159265358979323846 * cfg.frequency;
    for (long k = 0; k <= steps; ++k) {
        const double t = t0 + static_cast<double>(k) * kTimeStep;
        const double ramp = (t - t0) / cfg.duration;
        const double load =
            obj.mass * (cfg.gravity + cfg.amplitude * ramp * std::abs(std::sin(two_pi_f * t)));
        if (load > capacity) {
            out.failed = true;
            out.failure_time = t;
            return out;
        }
    }
    out.failed = false;
    return out;
}

GraspPose sample_noisy_grasp(const SyntheticObject& obj, const GraspPose& proposal,
                             std::uint64_t rng_seed, double noise_scale) {
    if (noise_scale < 0.0) {
        throw std::invalid_argument("sample_noisy_grasp: noise_scale must be >= 0");
    }
    Rng rng(rng_seed);
    const double ax = noise_scale * obj.half_extent_x();
    const double ay = noise_scale * obj.half_extent_y();
    return GraspPose{PlanarOffset{
        proposal.offset.dx + rng.uniform(-ax, ax),
        proposal.offset.dy + rng.uniform(-ay, ay),
    }};
}

std::uint64_t record_seed(std::uint64_t master_seed, std::size_t object_index,
                          std::size_t record_index) {
    return mix_seed(mix_seed(master_seed, object_index + 1), record_index + 1);
}

std::vector<GraspRecord> generate_dataset(const std::vector<SyntheticObject>& objects,
                                          int n_per_object, const WorldConfig& world,
                                          std::uint64_t master_seed) {
    if (n_per_object < 1) {
        throw std::invalid_argument("generate_dataset: n_per_object must be >= 1");
    }
    world.geom.validate();
    world.shake.validate();
    for (const SyntheticObject& obj : objects) obj.validate(world.max_depth);

    std::vector<GraspRecord> records;
    records.reserve(objects.size() * static_cast<std::size_t>(n_per_object));
    for (std::size_t j = 0; j < objects.size(); ++j) {
        const SyntheticObject& obj = objects[j];
        for (std::size_t i = 0; i < static_cast<std::size_t>(n_per_object); ++i) {
            const std::uint64_t seed = record_seed(master_seed, j, i);
            const GraspPose pose =
                sample_noisy_grasp(obj, GraspPose{}, mix_seed(seed, 1), world.noise_scale);
            ImagePair pair = render_imprint(obj, pose, world.geom, world.max_depth,
                                            world.render_noise, mix_seed(seed, 2));
            const GraspScore score = score_from_shake(simulate_shake(obj, pair, world.shake));
            records.push_back(GraspRecord{std::move(pair), score, obj.id, pose, seed});
        }
    }
    return records;
}

}  // namespace treg
