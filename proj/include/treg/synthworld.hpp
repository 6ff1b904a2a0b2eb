#pragma once

// Deterministic synthetic stand-in for robot, objects, and tactile sensor:
// renders imprints for a grasp pose, shakes the grasp to produce quality
// labels, and generates noisy self-supervised datasets.

#include <cstdint>
#include <string>
#include <vector>

#include "treg/core.hpp"

namespace treg {

enum class PrimitiveShape { disk, rectangle, ridge_array };

// One footprint element of an object's height profile. All lengths in
// meters. disk uses sx as radius; rectangle uses (sx, sy) half-extents;
// ridge_array fills a (sx, sy) half-extent box with ridges parallel to the
// y axis at the given pitch (50% duty cycle).
struct Primitive {
    PrimitiveShape shape = PrimitiveShape::disk;
    double cx = 0.0;
    double cy = 0.0;
    double sx = 0.01;
    double sy = 0.01;
    double height = 0.004;
    double pitch = 0.004;  // ridge_array only
};

struct SyntheticObject {
    std::string id;
    std::vector<Primitive> primitives;
    double mass = 0.1;      // kg
    double friction = 1.0;  // dimensionless

    // max_height caps primitive heights (the sensor's full-scale depth).
    void validate(double max_height) const;

    // Footprint bounding-box half-extents around the object center.
    double half_extent_x() const;
    double half_extent_y() const;
};

// Gripper center offset from the object center.
struct GraspPose {
    PlanarOffset offset;
};

struct ShakeConfig {
    double grip_force = 30.0;  // N
    double amplitude = 20.0;   // m/s^2 peak
    double frequency = 2.0;    // Hz
    double duration = 4.0;     // s
    double gravity = 9.81;     // m/s^2

    void validate() const;
};

// Sensor/world parameters that are not per-object.
struct WorldConfig {
    SensorGeometry geom;
    ShakeConfig shake;
    double max_depth = 0.005;    // m of indentation mapping to intensity 1
    double render_noise = 0.02;  // additive uniform noise on contact pixels
    double noise_scale = 0.8;    // k, grasp-proposal noise vs object half-extent
    int mirror_width = 15;
};

// Imprint pair + quality label + provenance; the training unit.
struct GraspRecord {
    ImagePair pair;
    GraspScore score;
    std::string object_id;
    GraspPose pose;
    std::uint64_t seed = 0;
};

// Object height (meters) at a point in the object frame: max over
// primitives, 0 where nothing overlaps.
double height_at(const SyntheticObject& obj, double x, double y);

// Render the imprint pair for a grasp. Pixel (px, py) samples the height
// profile at the window point centered at pose.offset, so the imprint
// appears at -pose.offset in the image. Intensity = height / max_depth
// clipped to [0,1]. Left and right are the same profile (parallel-jaw
// symmetry) with independent additive uniform +-noise_amp on contact
// pixels, re-clipped; no-overlap pixels stay exactly 0. noise_amp = 0 gives
// the noise-free render.
ImagePair render_imprint(const SyntheticObject& obj, const GraspPose& pose,
                         const SensorGeometry& geom, double max_depth = 0.005,
                         double noise_amp = 0.0, std::uint64_t seed = 0);

// Contact quality q in [0,1]:
//   q = mean(nonzero intensities) * (nonzero fraction) * (1 - d_hat)
// where d_hat is the intensity centroid's distance from the image center
// normalized by half the image diagonal. All-zero images score 0. The pair
// version averages the two images. This is the quantity the shake capacity
// is proportional to, and doubles as the world's oracle grasp scorer.
double contact_quality(const TactileImage& img);
double contact_quality(const ImagePair& pair);

// Shake the grasp: holding capacity C = friction * grip_force * q against
// inertial load L(t) = mass * (gravity + amplitude * ((t - t_0)/T_s) *
// |sin(2*pi*frequency*t)|) on a 1 ms grid with t_0 = 0. Fails at the first
// grid time with L(t) > C. An all-zero pair fails immediately at t_0.
ShakeOutcome simulate_shake(const SyntheticObject& obj, const ImagePair& pair,
                            const ShakeConfig& cfg);

// Proposal plus per-axis uniform noise in [-k*L, +k*L], L the object's
// bounding-box half-extent on that axis. Deterministic in rng_seed.
GraspPose sample_noisy_grasp(const SyntheticObject& obj, const GraspPose& proposal,
                             std::uint64_t rng_seed, double noise_scale = 0.8);

// Seed for record i of object j: mix_seed(mix_seed(master, j + 1), i + 1).
std::uint64_t record_seed(std::uint64_t master_seed, std::size_t object_index,
                          std::size_t record_index);

// Self-supervised dataset: per object, n noisy grasps around the zero
// offset, rendered, shaken, and scored. Deterministic in master_seed
// regardless of evaluation order (each record's seed is index-derived).
std::vector<GraspRecord> generate_dataset(const std::vector<SyntheticObject>& objects,
                                          int n_per_object, const WorldConfig& world,
                                          std::uint64_t master_seed);

}  // namespace treg
