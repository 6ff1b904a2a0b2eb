#include "treg/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace treg {

TactileImage TactileImage::zeros(int w, int h) {
    TactileImage img;
    img.width = w;
    img.height = h;
    img.pixels.assign(static_cast<std::size_t>(w) * h, 0.0);
    return img;
}

void TactileImage::validate() const {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("TactileImage: width and height must be >= 1");
    }
    if (pixels.size() != static_cast<std::size_t>(width) * height) {
        throw std::invalid_argument("TactileImage: pixel count does not equal width*height");
    }
    for (double p : pixels) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("TactileImage: intensity outside [0,1]");
        }
    }
}

void ImagePair::validate() const {
    left.validate();
    right.validate();
    if (left.width != right.width || left.height != right.height) {
        throw std::invalid_argument("ImagePair: left/right dimensions differ");
    }
}

void SensorGeometry::validate() const {
    if (res_x < 1 || res_y < 1 || !(width_x > 0.0) || !(width_y > 0.0)) {
        throw std::invalid_argument("SensorGeometry: resolution and width must be positive");
    }
}

void GraspScore::validate() const {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("GraspScore: value outside [0,1]");
    }
}

GraspScore score_from_shake(const ShakeOutcome& outcome) {
    if (!(outcome.duration > 0.0)) {
        throw std::invalid_argument("score_from_shake: duration must be positive");
    }
    if (!outcome.failed) {
        return GraspScore{1.0};
    }
    const double t0 = outcome.start_time;
    const double ti = outcome.failure_time;
    if (ti > t0 + outcome.duration) {
        throw std::invalid_argument(
            "score_from_shake: failure_time " + std::to_string(ti) +
            " is after shake end t_0 + T_s = " + std::to_string(t0 + outcome.duration));
    }
    if (ti < t0) {
        return GraspScore{0.0};
    }
    double s = 0.5 * (ti - t0) / outcome.duration;
    if (s < 0.0) s = 0.0;
    if (s > 0.5) s = 0.5;
    return GraspScore{s};
}

PixelOffset hand_to_pixel(const PlanarOffset& offset, const SensorGeometry& geom) {
    geom.validate();
    // llround rounds halfway cases away from zero, which keeps the map odd.
    return PixelOffset{
        static_cast<int>(std::llround(geom.res_x / geom.width_x * offset.dx)),
        static_cast<int>(std::llround(geom.res_y / geom.width_y * offset.dy)),
    };
}

PlanarOffset pixel_to_hand(const PixelOffset& offset, const SensorGeometry& geom) {
    geom.validate();
    return PlanarOffset{
        geom.width_x / geom.res_x * offset.dx,
        geom.width_y / geom.res_y * offset.dy,
    };
}

}  // namespace treg
