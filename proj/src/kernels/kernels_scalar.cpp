#include "mpdenoise/kernels.hpp"

#include <cmath>

// Scalar reference kernels. These define the semantics the SIMD variants are
// tested against; keep them simple and obviously correct.

namespace mpdn::kern {
namespace {

void s_madd(float* dst, const float* src, float a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += a * src[i];
}

void s_add(float* dst, const float* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void s_scaled_diff(float* dst, const float* a, const float* b, float s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = s * (a[i] - b[i]);
}

float s_sum(const float* x, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

float s_dot(const float* a, const float* b, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

float s_sqdiff_sum(const float* a, const float* b, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) {
        const float d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void s_relu(float* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void s_relu_bwd(const float* out, float* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!(out[i] > 0.0f)) g[i] = 0.0f;
}

void s_sigmoid(float* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0f / (1.0f + std::exp(-x[i]));
}

void s_sigmoid_bwd(const float* out, float* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) g[i] *= out[i] * (1.0f - out[i]);
}

void s_conv3x3_row(float* dst, const float* row0, const float* row1, const float* row2,
                   const float* w, std::size_t width) {
    const float* rows[3] = {row0, row1, row2};
    for (std::size_t x = 0; x < width; ++x) {
        float acc = dst[x];
        for (int ky = 0; ky < 3; ++ky) {
            const float* r = rows[ky];
            if (!r) continue;
            if (x > 0) acc += w[3 * ky + 0] * r[x - 1];
            acc += w[3 * ky + 1] * r[x];
            if (x + 1 < width) acc += w[3 * ky + 2] * r[x + 1];
        }
        dst[x] = acc;
    }
}

void s_corr3x3_row(const float* g, const float* src, std::size_t width, float acc[3]) {
    if (!src) return;
    float a0 = 0.0f, a1 = 0.0f, a2 = 0.0f;
    for (std::size_t x = 0; x < width; ++x) {
        const float gv = g[x];
        if (x > 0) a0 += gv * src[x - 1];
        a1 += gv * src[x];
        if (x + 1 < width) a2 += gv * src[x + 1];
    }
    acc[0] += a0;
    acc[1] += a1;
    acc[2] += a2;
}

void s_adam_update(float* p, float* m, float* v, const float* g, std::size_t n,
                   float alpha, float beta1, float beta2, float inv_bc1, float inv_bc2,
                   float eps) {
    for (std::size_t i = 0; i < n; ++i) {
        const float gi = g[i];
        m[i] = beta1 * m[i] + (1.0f - beta1) * gi;
        v[i] = beta2 * v[i] + (1.0f - beta2) * gi * gi;
        const float mhat = m[i] * inv_bc1;
        const float vhat = v[i] * inv_bc2;
        p[i] -= alpha * mhat / (std::sqrt(vhat) + eps);
    }
}

} // namespace

const Ops& scalar_ops() {
    static const Ops table = {
        "scalar",   s_madd,    s_add,        s_scaled_diff, s_sum,         s_dot,
        s_sqdiff_sum, s_relu,  s_relu_bwd,   s_sigmoid,     s_sigmoid_bwd, s_conv3x3_row,
        s_corr3x3_row, s_adam_update,
    };
    return table;
}

} // namespace mpdn::kern
