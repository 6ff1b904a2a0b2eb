#include "treg/transform.hpp"

#include <stdexcept>

namespace treg {

namespace {

// Band position (1-based) of the k-th pixel beyond an edge, for a mirror
// band of m pixels: 1..m, m..1, repeating with period 2m.
int band_position(int k, int m) {
    int r = (k - 1) % (2 * m);
    return r < m ? r + 1 : 2 * m - r;
}

// Source index for output position x along one axis of length n shifted by
// off. In-range indices map to themselves; exposed ones reflect into the
// band of the m nearest valid pixels.
int map_index(int x, int off, int n, int m) {
    int s = x - off;
    if (s >= 0 && s < n) return s;
    int m_eff = m < n ? m : n;
    if (s < 0) {
        return band_position(-s, m_eff) - 1;
    }
    return n - band_position(s - (n - 1), m_eff);
}

}  // namespace

TactileImage translate_with_mirror(const TactileImage& img, const PixelOffset& off,
                                   int mirror_width) {
    if (mirror_width < 1) {
        throw std::invalid_argument("translate_with_mirror: mirror_width must be >= 1");
    }
    const int w = img.width;
    const int h = img.height;

    std::vector<int> col_src(static_cast<std::size_t>(w));
    for (int x = 0; x < w; ++x) col_src[x] = map_index(x, off.dx, w, mirror_width);
    std::vector<int> row_src(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) row_src[y] = map_index(y, off.dy, h, mirror_width);

    TactileImage out = TactileImage::zeros(w, h);
    for (int y = 0; y < h; ++y) {
        const double* in_row = &img.pixels[static_cast<std::size_t>(row_src[y]) * w];
        double* out_row = &out.pixels[static_cast<std::size_t>(y) * w];
        for (int x = 0; x < w; ++x) out_row[x] = in_row[col_src[x]];
    }
    return out;
}

ImagePair simulate_regrasp_pair(const ImagePair& pair, const PlanarOffset& motion,
                                const SensorGeometry& geom, int mirror_width,
                                bool flip_right) {
    const PixelOffset shift = hand_to_pixel(PlanarOffset{-motion.dx, -motion.dy}, geom);
    PixelOffset right_shift = shift;
    if (flip_right) right_shift.dx = -right_shift.dx;
    return ImagePair{
        translate_with_mirror(pair.left, shift, mirror_width),
        translate_with_mirror(pair.right, right_shift, mirror_width),
    };
}

}  // namespace treg
