#include "mpdenoise/image.hpp"

#include <cmath>

#include "mpdenoise/errors.hpp"

namespace mpdn {

Histogram histogram(const Image& img) {
    Histogram h;
    for (const float v : img.data) ++h.bins[intensity_level(v)];
    h.total = img.size();
    return h;
}

Image equalize(const Image& img) {
    const Histogram h = histogram(img);

    // CDF over the 256 quantized levels.
    std::array<std::uint64_t, 256> cdf{};
    std::uint64_t run = 0;
    for (int b = 0; b < 256; ++b) {
        run += h.bins[b];
        cdf[b] = run;
    }
    std::uint64_t cdf_min = 0;
    for (int b = 0; b < 256; ++b) {
        if (h.bins[b] > 0) {
            cdf_min = cdf[b];
            break;
        }
    }
    if (h.total == cdf_min) return img; // constant image: degenerate CDF, leave unchanged

    const double denom = static_cast<double>(h.total - cdf_min);
    std::array<float, 256> lut;
    for (int b = 0; b < 256; ++b) {
        double u = (static_cast<double>(cdf[b]) - static_cast<double>(cdf_min)) / denom;
        u = u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u);
        lut[b] = static_cast<float>(std::lround(u * 255.0) / 255.0);
    }

    Image out(img.width, img.height);
    for (std::size_t i = 0; i < img.size(); ++i) out.data[i] = lut[intensity_level(img.data[i])];
    return out;
}

double isodata_threshold(const Histogram& h) {
    if (h.total == 0) throw DataError("isodata_threshold: empty histogram");

    // Weighted means of bin indices below/above an integer threshold.
    const auto class_mean = [&](int lo, int hi, bool& empty) {
        std::uint64_t count = 0;
        double moment = 0.0;
        for (int b = lo; b <= hi; ++b) {
            count += h.bins[b];
            moment += static_cast<double>(h.bins[b]) * b;
        }
        empty = count == 0;
        return empty ? 0.0 : moment / static_cast<double>(count);
    };

    bool empty = false;
    double t = class_mean(0, 255, empty); // global mean as the starting point
    int ti = static_cast<int>(std::lround(t));

    for (int iter = 0; iter < 256; ++iter) {
        bool lo_empty = false, hi_empty = false;
        const double mu0 = class_mean(0, ti, lo_empty);
        const double mu1 = ti + 1 <= 255 ? class_mean(ti + 1, 255, hi_empty) : (hi_empty = true, 0.0);
        if (lo_empty || hi_empty) break; // all mass on one side: degenerate, keep current bin
        const int next = static_cast<int>(std::lround(0.5 * (mu0 + mu1)));
        if (next == ti) break;
        ti = next;
    }
    return (ti + 0.5) / 256.0;
}

BinaryMask binarize(const Image& img, double level) {
    BinaryMask m(img.width, img.height);
    for (std::size_t i = 0; i < img.size(); ++i) m.data[i] = img.data[i] > level ? 1 : 0;
    return m;
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b)) throw DataError("mask_and: dimension mismatch");
    BinaryMask r(a.width, a.height);
    for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] = a.data[i] & b.data[i];
    return r;
}

BinaryMask mask_minus(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b)) throw DataError("mask_minus: dimension mismatch");
    BinaryMask r(a.width, a.height);
    for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] = a.data[i] & static_cast<std::uint8_t>(b.data[i] ^ 1);
    return r;
}

std::uint64_t mask_count(const BinaryMask& m) {
    std::uint64_t n = 0;
    for (const auto v : m.data) n += v;
    return n;
}

RgbImage overlay(const BinaryMask& mask_o, const BinaryMask& mask_ans) {
    if (!mask_o.same_shape(mask_ans)) throw DataError("overlay: dimension mismatch");
    RgbImage out(mask_o.width, mask_o.height);
    for (std::size_t i = 0; i < mask_o.data.size(); ++i) {
        std::uint8_t* p = out.data.data() + 3 * i;
        const bool o = mask_o.data[i] != 0;
        const bool a = mask_ans.data[i] != 0;
        if (o && a) { // true positive
            p[2] = 255;
        } else if (o) { // false positive
            p[0] = 255;
            p[2] = 255;
        } else if (a) { // false negative
            p[1] = 255;
        }
    }
    return out;
}

} // namespace mpdn
