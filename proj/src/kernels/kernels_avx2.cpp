#include "mpdenoise/kernels.hpp"

// AVX2+FMA variants of the hot kernels. This translation unit is compiled with
// -mavx2 -mfma on x86-64 only; dispatch.cpp guards selection behind cpuid.
// Reductions accumulate in lane order (8-wide partial sums reduced at the end),
// so results can differ from the scalar references by rounding only; the
// equivalence tests allow for that.

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)

#include <cmath>
#include <immintrin.h>

namespace mpdn::kern {
namespace {

inline float hsum256(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_hadd_ps(lo, lo);
    lo = _mm_hadd_ps(lo, lo);
    return _mm_cvtss_f32(lo);
}

void a_madd(float* dst, const float* src, float a, std::size_t n) {
    const __m256 av = _mm256_set1_ps(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 d = _mm256_loadu_ps(dst + i);
        d = _mm256_fmadd_ps(av, _mm256_loadu_ps(src + i), d);
        _mm256_storeu_ps(dst + i, d);
    }
    for (; i < n; ++i) dst[i] += a * src[i];
}

void a_add(float* dst, const float* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(dst + i,
                         _mm256_add_ps(_mm256_loadu_ps(dst + i), _mm256_loadu_ps(src + i)));
    }
    for (; i < n; ++i) dst[i] += src[i];
}

void a_scaled_diff(float* dst, const float* a, const float* b, float s, std::size_t n) {
    const __m256 sv = _mm256_set1_ps(s);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d = _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
        _mm256_storeu_ps(dst + i, _mm256_mul_ps(sv, d));
    }
    for (; i < n; ++i) dst[i] = s * (a[i] - b[i]);
}

float a_sum(const float* x, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
    float r = hsum256(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

float a_dot(const float* a, const float* b, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        acc = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc);
    float r = hsum256(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

float a_sqdiff_sum(const float* a, const float* b, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d = _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
        acc = _mm256_fmadd_ps(d, d, acc);
    }
    float r = hsum256(acc);
    for (; i < n; ++i) {
        const float d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

void a_relu(float* x, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(x + i, _mm256_max_ps(zero, _mm256_loadu_ps(x + i)));
    for (; i < n; ++i) x[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void a_relu_bwd(const float* out, float* g, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(out + i), zero, _CMP_GT_OQ);
        _mm256_storeu_ps(g + i, _mm256_and_ps(_mm256_loadu_ps(g + i), mask));
    }
    for (; i < n; ++i)
        if (!(out[i] > 0.0f)) g[i] = 0.0f;
}

// exp is kept scalar (the sigmoid output layer is a negligible fraction of the
// workload); only the surrounding arithmetic differs from the reference.
void a_sigmoid(float* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0f / (1.0f + std::exp(-x[i]));
}

void a_sigmoid_bwd(const float* out, float* g, std::size_t n) {
    const __m256 one = _mm256_set1_ps(1.0f);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 s = _mm256_loadu_ps(out + i);
        const __m256 d = _mm256_mul_ps(s, _mm256_sub_ps(one, s));
        _mm256_storeu_ps(g + i, _mm256_mul_ps(_mm256_loadu_ps(g + i), d));
    }
    for (; i < n; ++i) g[i] *= out[i] * (1.0f - out[i]);
}

void a_conv3x3_row(float* dst, const float* row0, const float* row1, const float* row2,
                   const float* w, std::size_t width) {
    const float* rows[3] = {row0, row1, row2};

    // Interior columns [1, width-1): all nine taps are in range.
    if (width >= 2) {
        std::size_t x = 1;
        const std::size_t limit = width - 1;
        for (; x + 8 <= limit; x += 8) {
            __m256 acc = _mm256_loadu_ps(dst + x);
            for (int ky = 0; ky < 3; ++ky) {
                const float* r = rows[ky];
                if (!r) continue;
                acc = _mm256_fmadd_ps(_mm256_set1_ps(w[3 * ky + 0]), _mm256_loadu_ps(r + x - 1), acc);
                acc = _mm256_fmadd_ps(_mm256_set1_ps(w[3 * ky + 1]), _mm256_loadu_ps(r + x), acc);
                acc = _mm256_fmadd_ps(_mm256_set1_ps(w[3 * ky + 2]), _mm256_loadu_ps(r + x + 1), acc);
            }
            _mm256_storeu_ps(dst + x, acc);
        }
        for (; x < limit; ++x) {
            float acc = dst[x];
            for (int ky = 0; ky < 3; ++ky) {
                const float* r = rows[ky];
                if (!r) continue;
                acc += w[3 * ky + 0] * r[x - 1] + w[3 * ky + 1] * r[x] + w[3 * ky + 2] * r[x + 1];
            }
            dst[x] = acc;
        }
    }

    // Border columns with range-checked taps.
    const auto border = [&](std::size_t x) {
        float acc = dst[x];
        for (int ky = 0; ky < 3; ++ky) {
            const float* r = rows[ky];
            if (!r) continue;
            if (x > 0) acc += w[3 * ky + 0] * r[x - 1];
            acc += w[3 * ky + 1] * r[x];
            if (x + 1 < width) acc += w[3 * ky + 2] * r[x + 1];
        }
        dst[x] = acc;
    };
    border(0);
    if (width >= 2) border(width - 1);
}

void a_corr3x3_row(const float* g, const float* src, std::size_t width, float acc[3]) {
    if (!src) return;
    __m256 v0 = _mm256_setzero_ps();
    __m256 v1 = _mm256_setzero_ps();
    __m256 v2 = _mm256_setzero_ps();
    float a0 = 0.0f, a1 = 0.0f, a2 = 0.0f;

    std::size_t x = 1;
    if (width >= 2) {
        const std::size_t limit = width - 1;
        for (; x + 8 <= limit; x += 8) {
            const __m256 gv = _mm256_loadu_ps(g + x);
            v0 = _mm256_fmadd_ps(gv, _mm256_loadu_ps(src + x - 1), v0);
            v1 = _mm256_fmadd_ps(gv, _mm256_loadu_ps(src + x), v1);
            v2 = _mm256_fmadd_ps(gv, _mm256_loadu_ps(src + x + 1), v2);
        }
        for (; x < limit; ++x) {
            const float gv = g[x];
            a0 += gv * src[x - 1];
            a1 += gv * src[x];
            a2 += gv * src[x + 1];
        }
    }
    // Border columns (x = 0 and x = width-1) with range-checked taps.
    {
        const float gv = g[0];
        a1 += gv * src[0];
        if (width > 1) a2 += gv * src[1];
    }
    if (width >= 2) {
        const std::size_t e = width - 1;
        const float gv = g[e];
        a0 += gv * src[e - 1];
        a1 += gv * src[e];
    }
    acc[0] += a0 + hsum256(v0);
    acc[1] += a1 + hsum256(v1);
    acc[2] += a2 + hsum256(v2);
}

void a_adam_update(float* p, float* m, float* v, const float* g, std::size_t n,
                   float alpha, float beta1, float beta2, float inv_bc1, float inv_bc2,
                   float eps) {
    const __m256 b1 = _mm256_set1_ps(beta1);
    const __m256 b2 = _mm256_set1_ps(beta2);
    const __m256 ob1 = _mm256_set1_ps(1.0f - beta1);
    const __m256 ob2 = _mm256_set1_ps(1.0f - beta2);
    const __m256 al = _mm256_set1_ps(alpha);
    const __m256 ib1 = _mm256_set1_ps(inv_bc1);
    const __m256 ib2 = _mm256_set1_ps(inv_bc2);
    const __m256 ev = _mm256_set1_ps(eps);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 gv = _mm256_loadu_ps(g + i);
        __m256 mv = _mm256_loadu_ps(m + i);
        __m256 vv = _mm256_loadu_ps(v + i);
        mv = _mm256_add_ps(_mm256_mul_ps(b1, mv), _mm256_mul_ps(ob1, gv));
        vv = _mm256_add_ps(_mm256_mul_ps(b2, vv), _mm256_mul_ps(ob2, _mm256_mul_ps(gv, gv)));
        _mm256_storeu_ps(m + i, mv);
        _mm256_storeu_ps(v + i, vv);
        const __m256 mhat = _mm256_mul_ps(mv, ib1);
        const __m256 vhat = _mm256_mul_ps(vv, ib2);
        const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(vhat), ev);
        const __m256 upd = _mm256_div_ps(_mm256_mul_ps(al, mhat), denom);
        _mm256_storeu_ps(p + i, _mm256_sub_ps(_mm256_loadu_ps(p + i), upd));
    }
    for (; i < n; ++i) {
        const float gi = g[i];
        m[i] = beta1 * m[i] + (1.0f - beta1) * gi;
        v[i] = beta2 * v[i] + (1.0f - beta2) * gi * gi;
        p[i] -= alpha * (m[i] * inv_bc1) / (std::sqrt(v[i] * inv_bc2) + eps);
    }
}

} // namespace

const Ops& avx2_ops() {
    static const Ops table = {
        "avx2",     a_madd,    a_add,        a_scaled_diff, a_sum,         a_dot,
        a_sqdiff_sum, a_relu,  a_relu_bwd,   a_sigmoid,     a_sigmoid_bwd, a_conv3x3_row,
        a_corr3x3_row, a_adam_update,
    };
    return table;
}

} // namespace mpdn::kern

#else

namespace mpdn::kern {
const Ops& avx2_ops() { return scalar_ops(); }
} // namespace mpdn::kern

#endif
