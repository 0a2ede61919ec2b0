#pragma once

#include <filesystem>

#include "mpdenoise/image.hpp"

namespace mpdn {

// Grayscale image file I/O. Supported containers: baseline little-endian TIFF
// (8/16-bit, strip-organized, compression none or deflate) and PNG (gray
// 8/16-bit). Format is detected from the file's magic on load and from the
// extension (.tif/.tiff/.png) on save. Intensities map linearly:
// stored = round(v * (2^depth - 1)), loaded = stored / (2^depth - 1).
Image load_image(const std::filesystem::path& path);
void save_image(const Image& img, const std::filesystem::path& path, int depth);

// 24-bit RGB PNG export for pseudocolor overlays.
void save_rgb_png(const RgbImage& img, const std::filesystem::path& path);

} // namespace mpdn
