#pragma once

// Foundational value types shared by the whole pipeline, plus the two
// closed-form conversions everything else builds on: shake-resistance
// scoring and hand-frame <-> pixel-frame motion conversion.

#include <cstdint>
#include <vector>

namespace treg {

// Per-finger grayscale contact imprint. Intensities are normalized
// indentation depths in [0, 1], stored row-major (index = y * width + x).
struct TactileImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    static TactileImage zeros(int w, int h);

    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

    // Throws std::invalid_argument on bad dimensions, size mismatch, or
    // out-of-range intensities.
    void validate() const;
};

// The two finger imprints of one grasp. Both images share dimensions.
struct ImagePair {
    TactileImage left;
    TactileImage right;

    void validate() const;
};

// Resolution (pixels) and physical width (meters) of the tactile sensor,
// the constants relating hand motions to pixel motions.
struct SensorGeometry {
    int res_x = 64;
    int res_y = 64;
    double width_x = 0.04;
    double width_y = 0.04;

    void validate() const;
};

// Result of one shake test. failure_time is meaningful only when failed.
struct ShakeOutcome {
    bool failed = false;
    double failure_time = 0.0;  // t_i, seconds
    double start_time = 0.0;    // t_0, seconds
    double duration = 4.0;      // T_s, seconds
};

// Grasp quality in [0, 1]. Scores produced from failed shakes are <= 0.5.
struct GraspScore {
    double value = 0.0;

    void validate() const;
};

// Motion in the gripper-finger plane, meters.
struct PlanarOffset {
    double dx = 0.0;
    double dy = 0.0;
};

// Motion in the image plane, whole pixels.
struct PixelOffset {
    int dx = 0;
    int dy = 0;
};

// Quality of a grasp from its shake outcome:
//   0                        failure before t_0
//   0.5 * (t_i - t_0) / T_s  failure at t_i in [t_0, t_0 + T_s]
//   1                        no failure
// The failure branch is clamped to [0, 0.5]. A failure reported after
// t_0 + T_s is inconsistent (the shake had ended) and throws
// std::invalid_argument.
GraspScore score_from_shake(const ShakeOutcome& outcome);

// Hand-frame motion to pixel motion: px = round(res / width * d), rounding
// half away from zero.
PixelOffset hand_to_pixel(const PlanarOffset& offset, const SensorGeometry& geom);

// Exact linear inverse of hand_to_pixel (no rounding).
PlanarOffset pixel_to_hand(const PixelOffset& offset, const SensorGeometry& geom);

}  // namespace treg
