#pragma once

#include <cstddef>

// Data-parallel inner loops used by the conv layers, filters, metrics and the
// optimizer. Every kernel has a scalar reference implementation and, on x86-64,
// an AVX2+FMA variant; the active table is picked once at startup from cpuid
// (override with force_isa() or the MPDENOISE_KERNELS env var). SIMD variants
// are equivalence-tested against the scalar references in tests/test_kernels.

namespace mpdn::kern {

enum class Isa { scalar, avx2 };

struct Ops {
    const char* name;

    // dst[i] += a * src[i]
    void (*madd)(float* dst, const float* src, float a, std::size_t n);
    // dst[i] += src[i]
    void (*add)(float* dst, const float* src, std::size_t n);
    // dst[i] = s * (a[i] - b[i])
    void (*scaled_diff)(float* dst, const float* a, const float* b, float s, std::size_t n);
    float (*sum)(const float* x, std::size_t n);
    float (*dot)(const float* a, const float* b, std::size_t n);
    // sum of (a[i]-b[i])^2
    float (*sqdiff_sum)(const float* a, const float* b, std::size_t n);

    void (*relu)(float* x, std::size_t n);
    // g[i] = out[i] > 0 ? g[i] : 0   (out = post-activation values)
    void (*relu_bwd)(const float* out, float* g, std::size_t n);
    void (*sigmoid)(float* x, std::size_t n);
    // g[i] *= out[i] * (1 - out[i])
    void (*sigmoid_bwd)(const float* out, float* g, std::size_t n);

    // One output row of a 3x3 same-padding cross-correlation for one input
    // channel: dst[x] += sum_ky sum_kx w[3*ky+kx] * row_ky[x+kx-1].
    // row0/row1/row2 are the input rows y-1,y,y+1 (nullptr = zero-pad row);
    // out-of-range columns contribute zero.
    void (*conv3x3_row)(float* dst, const float* row0, const float* row1, const float* row2,
                        const float* w, std::size_t width);
    // Weight-gradient row accumulation: acc[kx] += sum_x g[x] * src[x+kx-1]
    // for kx in {0,1,2}, dropping out-of-range taps. src may be nullptr (no-op).
    void (*corr3x3_row)(const float* g, const float* src, std::size_t width, float acc[3]);

    // Bias-corrected Adam update on one parameter span:
    //   m = b1*m + (1-b1)*g;  v = b2*v + (1-b2)*g^2
    //   p -= alpha * (m*inv_bc1) / (sqrt(v*inv_bc2) + eps)
    void (*adam_update)(float* p, float* m, float* v, const float* g, std::size_t n,
                        float alpha, float beta1, float beta2, float inv_bc1, float inv_bc2,
                        float eps);
};

const Ops& scalar_ops();
bool avx2_supported();       // compiled in AND reported by cpuid
const Ops& avx2_ops();       // valid only when avx2_supported()

const Ops& ops();            // active table
Isa active_isa();
void force_isa(Isa isa);     // tests / CLI override

} // namespace mpdn::kern
