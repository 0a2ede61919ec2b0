#include "mpdenoise/filters.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mpdenoise/errors.hpp"
#include "mpdenoise/kernels.hpp"

namespace mpdn {
namespace {

// Half-sample symmetric reflection (scipy "reflect"): -1 -> 0, n -> n-1.
int fold(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

std::vector<float> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<float> w(2 * radius + 1);
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * (static_cast<double>(i) * i) / (sigma * sigma));
        w[i + radius] = static_cast<float>(v);
        total += v;
    }
    for (auto& v : w) v = static_cast<float>(v / total);
    return w;
}

} // namespace

Image gaussian_filter(const Image& img, double sigma) {
    if (!(sigma > 0.0)) throw DataError("gaussian_filter: sigma must be positive");
    const std::vector<float> w = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(w.size()) - 1) / 2;
    const int width = img.width, height = img.height;
    const auto& k = kern::ops();

    // Horizontal pass on reflect-padded row buffers.
    Image tmp(width, height);
    std::vector<float> pad(width + 2 * radius);
    for (int y = 0; y < height; ++y) {
        const float* src = img.row(y);
        for (int i = -radius; i < width + radius; ++i) pad[i + radius] = src[fold(i, width)];
        float* dst = tmp.row(y);
        for (int x = 0; x < width; ++x) dst[x] = k.dot(w.data(), pad.data() + x, w.size());
    }

    // Vertical pass accumulated row-wise.
    Image out(width, height);
    for (int y = 0; y < height; ++y) {
        float* dst = out.row(y);
        for (int t = -radius; t <= radius; ++t)
            k.madd(dst, tmp.row(fold(y + t, height)), w[t + radius], width);
    }
    return out;
}

Image median_filter(const Image& img, int size) {
    if (size < 1 || size % 2 == 0) throw DataError("median_filter: size must be odd and >= 1");
    if (size == 1) return img;
    const int radius = size / 2;
    const int width = img.width, height = img.height;

    Image out(width, height);
    std::vector<float> window(static_cast<std::size_t>(size) * size);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            std::size_t n = 0;
            for (int dy = -radius; dy <= radius; ++dy) {
                const float* row = img.row(fold(y + dy, height));
                for (int dx = -radius; dx <= radius; ++dx) window[n++] = row[fold(x + dx, width)];
            }
            auto mid = window.begin() + static_cast<std::ptrdiff_t>(n / 2);
            std::nth_element(window.begin(), mid, window.begin() + static_cast<std::ptrdiff_t>(n));
            out.at(x, y) = *mid;
        }
    }
    return out;
}

double nlm_noise_sigma(const Image& img) {
    const int width = img.width, height = img.height;
    if (width < 3 || height < 3) return 0.0;
    double acc = 0.0;
    for (int y = 1; y + 1 < height; ++y) {
        const float* r0 = img.row(y - 1);
        const float* r1 = img.row(y);
        const float* r2 = img.row(y + 1);
        for (int x = 1; x + 1 < width; ++x) {
            const double l = r0[x - 1] - 2.0 * r0[x] + r0[x + 1] -
                             2.0 * (r1[x - 1] - 2.0 * r1[x] + r1[x + 1]) +
                             r2[x - 1] - 2.0 * r2[x] + r2[x + 1];
            acc += std::abs(l);
        }
    }
    const double scale = std::sqrt(0.5 * 3.14159265358979323846) /
                         (6.0 * (width - 2) * (height - 2));
    return scale * acc;
}

Image nlm_filter(const Image& img, double h, int patch_radius, int search_radius) {
    if (!(h > 0.0) || patch_radius < 1 || search_radius < 1)
        throw DataError("nlm_filter: invalid parameters");
    const int width = img.width, height = img.height;
    const int P = patch_radius;

    // Reflect-padded copy so every patch read is unconditional.
    const int pw = width + 2 * P;
    std::vector<float> padded(static_cast<std::size_t>(pw) * (height + 2 * P));
    for (int y = -P; y < height + P; ++y) {
        float* dst = padded.data() + static_cast<std::size_t>(y + P) * pw;
        const float* src = img.row(fold(y, height));
        for (int x = -P; x < width + P; ++x) dst[x + P] = src[fold(x, width)];
    }
    const auto patch_row = [&](int x, int y, int dy) {
        return padded.data() + static_cast<std::size_t>(y + dy + P) * pw + x;
    };

    const double sigma = nlm_noise_sigma(img);
    const double two_sigma2 = 2.0 * sigma * sigma;
    const double inv_h2 = 1.0 / (h * h);
    const double patch_norm = 1.0 / ((2.0 * P + 1.0) * (2.0 * P + 1.0));
    const auto& k = kern::ops();
    const std::size_t patch_w = static_cast<std::size_t>(2 * P + 1);

    Image out(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int y0 = std::max(0, y - search_radius), y1 = std::min(height - 1, y + search_radius);
            const int x0 = std::max(0, x - search_radius), x1 = std::min(width - 1, x + search_radius);
            double wsum = 0.0, vsum = 0.0, wmax = 0.0;
            for (int j = y0; j <= y1; ++j) {
                for (int i = x0; i <= x1; ++i) {
                    if (i == x && j == y) continue;
                    float d2 = 0.0f;
                    for (int dy = -P; dy <= P; ++dy)
                        d2 += k.sqdiff_sum(patch_row(x, y, dy), patch_row(i, j, dy), patch_w);
                    const double dist = d2 * patch_norm;
                    const double wgt = std::exp(-std::max(dist - two_sigma2, 0.0) * inv_h2);
                    wmax = std::max(wmax, wgt);
                    wsum += wgt;
                    vsum += wgt * img.at(i, j);
                }
            }
            const double self = (wmax > 0.0) ? wmax : 1.0;
            wsum += self;
            vsum += self * img.at(x, y);
            out.at(x, y) = static_cast<float>(vsum / wsum);
        }
    }
    return out;
}

double anscombe_value(double x, double photon_scale) {
    return 2.0 * std::sqrt(photon_scale * x + 0.375);
}

Image anscombe(const Image& img, double photon_scale) {
    if (!(photon_scale > 0.0)) throw DataError("anscombe: photon_scale must be positive");
    const double a0 = anscombe_value(0.0, photon_scale);
    const double a1 = anscombe_value(1.0, photon_scale);
    const double inv = 1.0 / (a1 - a0);
    Image out(img.width, img.height);
    for (std::size_t i = 0; i < img.size(); ++i)
        out.data[i] = static_cast<float>((anscombe_value(img.data[i], photon_scale) - a0) * inv);
    return out;
}

Image anscombe_inverse(const Image& img, double photon_scale) {
    if (!(photon_scale > 0.0)) throw DataError("anscombe_inverse: photon_scale must be positive");
    const double a0 = anscombe_value(0.0, photon_scale);
    const double a1 = anscombe_value(1.0, photon_scale);
    Image out(img.width, img.height);
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double a = a0 + static_cast<double>(img.data[i]) * (a1 - a0);
        double x = (0.25 * a * a - 0.375) / photon_scale;
        x = x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
        out.data[i] = static_cast<float>(x);
    }
    return out;
}

} // namespace mpdn
