#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mpdn {

// Single-channel raster of normalized intensities in [0,1], row-major,
// top-to-bottom. The universal currency of the pipeline; treated as immutable
// once an operation has produced it.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    Image() = default;
    Image(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    const float* row(int y) const { return data.data() + static_cast<std::size_t>(y) * width; }
    float* row(int y) { return data.data() + static_cast<std::size_t>(y) * width; }
    std::size_t size() const { return data.size(); }
    bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

// 256-bin intensity histogram. Bin b covers [b/256, (b+1)/256); 1.0 goes to bin 255.
struct Histogram {
    std::array<std::uint64_t, 256> bins{};
    std::uint64_t total = 0;
};

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    bool same_shape(const BinaryMask& o) const { return width == o.width && height == o.height; }
};

// 8-bit RGB raster used for the pseudocolor boundary overlays.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // r,g,b triples, row-major

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t* px(int x, int y) { return data.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* px(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
};

// Quantize an intensity to its histogram bin / 8-bit level.
inline int intensity_level(float v) {
    const int b = static_cast<int>(v * 256.0f);
    return b < 0 ? 0 : (b > 255 ? 255 : b);
}

Histogram histogram(const Image& img);

// Classic CDF remap on the 256-bin histogram, output re-quantized to 256
// levels (k/255). A constant image comes back unchanged.
Image equalize(const Image& img);

// Ridler-Calvard (IsoData) automatic threshold on a 256-bin histogram.
// Iterates t <- (mean_below + mean_above)/2 on bin indices from the global
// mean until the integer threshold stabilizes. Returns the level
// (t*+0.5)/256; a pixel is foreground iff intensity > level. If all mass sits
// in one bin the returned level is that bin's (t+0.5)/256 and the resulting
// foreground is empty for 8-bit-quantized data.
double isodata_threshold(const Histogram& h);

BinaryMask binarize(const Image& img, double level); // strict: intensity > level

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_minus(const BinaryMask& a, const BinaryMask& b); // a AND NOT b
std::uint64_t mask_count(const BinaryMask& m);

// Pseudocolor superposition: true positive -> blue, false positive (mask_o
// only) -> magenta, false negative (mask_ans only) -> green, rest black.
RgbImage overlay(const BinaryMask& mask_o, const BinaryMask& mask_ans);

} // namespace mpdn
