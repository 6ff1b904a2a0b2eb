#pragma once

// Rigid pixel translation of tactile imprints with iterated mirror padding.
// This is how the planner predicts the imprint a candidate regrasp would
// produce from the one it has.

#include "treg/core.hpp"

namespace treg {

// Translate img by off pixels: out[x, y] = in[x - off.dx, y - off.dy] where
// the source index is in range. Exposed pixels are filled per axis by
// iterated symmetric reflection over the mirror_width pixels nearest the
// edge: counting outward, position k takes band value b_1..b_m, b_m..b_1,
// repeating (period 2m). Horizontal fill runs first, then vertical fill over
// the completed rows; the combined rule is a separable index remap. Offsets
// of any magnitude are legal; beyond the image size the output is pure
// padding.
TactileImage translate_with_mirror(const TactileImage& img, const PixelOffset& off,
                                   int mirror_width = 15);

// Simulated imprints after a gripper motion: both images translated by
// hand_to_pixel(-motion, geom) - an imprint moves opposite to the gripper -
// with identical pixel offsets for left and right. flip_right mirrors the
// x component of the right finger's offset for sensors whose right camera
// frame is reflected; off by default.
ImagePair simulate_regrasp_pair(const ImagePair& pair, const PlanarOffset& motion,
                                const SensorGeometry& geom, int mirror_width = 15,
                                bool flip_right = false);

}  // namespace treg
