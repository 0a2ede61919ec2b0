#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpdenoise/tensor.hpp"

// Minimal CNN engine: 3x3 same-padding convolutions, 2x2 max-pool, 2x2
// nearest-neighbor upsampling, relu/sigmoid activations, MSE loss and Adam.
// Everything is templated on the scalar type: float is the production path
// (routed through the runtime-dispatched SIMD kernels), double is the
// reference path used by gradient verification.

namespace mpdn::nn {

enum class Activation : std::uint8_t { none = 0, relu = 1, sigmoid = 2 };

template <typename T>
struct Conv2d {
    int in_channels = 0;
    int out_channels = 0;
    Activation act = Activation::none;
    std::vector<T> weights; // (out, in, ky, kx), 3x3 kernels
    std::vector<T> bias;    // per out channel

    std::size_t weight_count() const { return static_cast<std::size_t>(in_channels) * out_channels * 9; }
};

enum class StageKind : std::uint8_t { conv = 0, maxpool2 = 1, upsample2 = 2 };

template <typename T>
struct Stage {
    StageKind kind = StageKind::conv;
    Conv2d<T> conv; // meaningful only for StageKind::conv
};

template <typename T>
struct Sequential {
    std::vector<Stage<T>> stages;

    std::size_t param_count() const {
        std::size_t n = 0;
        for (const auto& s : stages)
            if (s.kind == StageKind::conv) n += s.conv.weight_count() + s.conv.bias.size();
        return n;
    }
};

template <typename T>
Sequential<T> convert(const Sequential<float>& net); // widen weights (float -> T)

// --- single layers -----------------------------------------------------

// 3x3 cross-correlation, zero padding 1, stride 1 ("same"), bias, activation.
template <typename T>
Tensor4<T> conv2d_forward(const Tensor4<T>& x, const Conv2d<T>& layer, int threads = 1);

template <typename T>
struct ConvGrads {
    Tensor4<T> input;
    std::vector<T> weights;
    std::vector<T> bias;
};

// Exact gradients of conv2d_forward; `out` is the forward result (used for the
// activation derivative).
template <typename T>
ConvGrads<T> conv2d_backward(const Tensor4<T>& x, const Conv2d<T>& layer, const Tensor4<T>& out,
                             const Tensor4<T>& grad_out, int threads = 1);

// Non-overlapping 2x2 max pool; ties go to the first maximal element in
// row-major scan order. argmax records the chosen flat index per output cell.
template <typename T>
Tensor4<T> maxpool2x2_forward(const Tensor4<T>& x, std::vector<std::int32_t>& argmax);
template <typename T>
Tensor4<T> maxpool2x2_backward(const std::vector<std::int32_t>& argmax, const Tensor4<T>& grad_out,
                               int in_h, int in_w);

template <typename T>
Tensor4<T> upsample2x2_forward(const Tensor4<T>& x);
template <typename T>
Tensor4<T> upsample2x2_backward(const Tensor4<T>& grad_out);

// Mean over all elements of (pred-target)^2; optional gradient wrt pred.
template <typename T>
double mse_loss(const Tensor4<T>& pred, const Tensor4<T>& target, Tensor4<T>* grad = nullptr);

// --- whole networks -----------------------------------------------------

template <typename T>
struct ForwardCache {
    Tensor4<T> input;
    std::vector<Tensor4<T>> outputs;                 // post-activation, per stage
    std::vector<std::vector<std::int32_t>> argmax;   // per stage, pools only
};

template <typename T>
Tensor4<T> seq_forward(const Sequential<T>& net, const Tensor4<T>& x, ForwardCache<T>* cache,
                       int threads = 1);

template <typename T>
struct SeqGrads {
    std::vector<std::vector<T>> weights; // per stage (empty for non-conv)
    std::vector<std::vector<T>> bias;
    Tensor4<T> input;
};

template <typename T>
SeqGrads<T> seq_backward(const Sequential<T>& net, const ForwardCache<T>& cache,
                         const Tensor4<T>& grad_out, int threads = 1);

// Flat parameter ordering: stage by stage, weights then bias.
std::vector<float> gather_params(const Sequential<float>& net);
void scatter_params(Sequential<float>& net, std::span<const float> flat);
template <typename T>
std::vector<T> gather_grads(const Sequential<T>& net, const SeqGrads<T>& grads);

// --- optimizer -----------------------------------------------------------

struct AdamParams {
    float learning_rate = 1e-3f;
    float beta1 = 0.9f;
    float beta2 = 0.999f;
    float epsilon = 1e-7f;
};

struct AdamState {
    std::uint64_t t = 0;
    std::vector<float> m, v;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0f), v(n, 0.0f) {}
};

void adam_step(std::span<float> params, std::span<const float> grads, AdamState& state,
               const AdamParams& hp);

// --- gradient verification ------------------------------------------------

struct GradCheckOptions {
    double epsilon = 1e-3;
    // 0 = exhaustive. Positive values check a seeded deterministic sample of
    // that many weights per conv stage; biases and input gradients are always
    // checked exhaustively.
    int weight_samples_per_stage = 0;
    std::uint64_t sample_seed = 0x5eed;
    // >= 0: multiply that conv stage's analytic bias gradients by
    // corrupt_scale before comparing (mutation testing support).
    int corrupt_stage = -1;
    double corrupt_scale = 2.0;
    bool check_input_grad = true;
};

// Compares analytic gradients against central differences of the MSE loss.
// Both passes run in double; returns the maximum relative error.
double grad_check(const Sequential<float>& net, const Tensor4f& input, const Tensor4f& target,
                  const GradCheckOptions& opt = {});

} // namespace mpdn::nn
