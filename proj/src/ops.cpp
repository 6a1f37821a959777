#include "tsrkit/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsrkit/errors.hpp"

namespace tsrkit {

float activate(float x, Activation activation) {
    if (activation == Activation::leaky) return x > 0.0f ? x : kLeakySlope * x;
    return x;
}

void apply_activation(Tensor& t, Activation activation) {
    if (activation == Activation::linear) return;
    for (float& v : t.data) v = v > 0.0f ? v : kLeakySlope * v;
}

void softmax_inplace(std::span<float> values) {
    if (values.empty()) return;
    const float max = *std::max_element(values.begin(), values.end());
    float sum = 0.0f;
    for (float& v : values) {
        v = std::exp(v - max);
        sum += v;
    }
    for (float& v : values) v /= sum;
}

namespace {

// C[M x N] += A[M x K] * B[K x N]. Row-blocked so four rows of A share each
// sweep over B; the inner loop is contiguous over both B and C, which the
// compiler vectorizes.
void gemm_nn(int M, int N, int K, const float* A, const float* B, float* C) {
    constexpr int MR = 4;
    int i = 0;
    for (; i + MR <= M; i += MR) {
        const float* a0 = A + static_cast<std::size_t>(i + 0) * K;
        const float* a1 = A + static_cast<std::size_t>(i + 1) * K;
        const float* a2 = A + static_cast<std::size_t>(i + 2) * K;
        const float* a3 = A + static_cast<std::size_t>(i + 3) * K;
        float* c0 = C + static_cast<std::size_t>(i + 0) * N;
        float* c1 = C + static_cast<std::size_t>(i + 1) * N;
        float* c2 = C + static_cast<std::size_t>(i + 2) * N;
        float* c3 = C + static_cast<std::size_t>(i + 3) * N;
        for (int k = 0; k < K; ++k) {
            const float* b = B + static_cast<std::size_t>(k) * N;
            const float v0 = a0[k], v1 = a1[k], v2 = a2[k], v3 = a3[k];
            for (int j = 0; j < N; ++j) {
                const float bv = b[j];
                c0[j] += v0 * bv;
                c1[j] += v1 * bv;
                c2[j] += v2 * bv;
                c3[j] += v3 * bv;
            }
        }
    }
    for (; i < M; ++i) {
        const float* a = A + static_cast<std::size_t>(i) * K;
        float* c = C + static_cast<std::size_t>(i) * N;
        for (int k = 0; k < K; ++k) {
            const float* b = B + static_cast<std::size_t>(k) * N;
            const float v = a[k];
            for (int j = 0; j < N; ++j) c[j] += v * b[j];
        }
    }
}

// Patch matrix: rows ordered (channel, ky, kx) to match the filter-major
// weight layout, columns in output scan order.
void im2col(const Tensor& in, int kernel, int stride, int pad, int out_h, int out_w,
            float* col) {
    const int cols = out_h * out_w;
    for (int c = 0; c < in.channels; ++c) {
        const float* src = in.channel(c);
        for (int ky = 0; ky < kernel; ++ky) {
            for (int kx = 0; kx < kernel; ++kx) {
                float* dst = col + (static_cast<std::size_t>(c) * kernel * kernel +
                                    static_cast<std::size_t>(ky) * kernel + kx) *
                                       cols;
                for (int oy = 0; oy < out_h; ++oy) {
                    const int y = oy * stride - pad + ky;
                    if (y < 0 || y >= in.height) {
                        std::fill(dst, dst + out_w, 0.0f);
                        dst += out_w;
                        continue;
                    }
                    const float* row = src + static_cast<std::size_t>(y) * in.width;
                    int x = -pad + kx; // stride applies per output column
                    if (stride == 1) {
                        const int lead = std::clamp(-x, 0, out_w);
                        std::fill(dst, dst + lead, 0.0f);
                        const int body_end = std::clamp(in.width - x, lead, out_w);
                        if (body_end > lead)
                            std::copy(row + x + lead, row + x + body_end, dst + lead);
                        std::fill(dst + body_end, dst + out_w, 0.0f);
                        dst += out_w;
                    } else {
                        for (int ox = 0; ox < out_w; ++ox, x += stride)
                            *dst++ = (x < 0 || x >= in.width) ? 0.0f : row[x];
                    }
                }
            }
        }
    }
}

} // namespace

Tensor conv2d(const Tensor& input, const ConvLayer& layer, std::span<const float> weights,
              std::span<const float> biases) {
    const int k = layer.kernel;
    const std::size_t expected_weights =
        static_cast<std::size_t>(layer.filters) * input.channels * k * k;
    if (weights.size() != expected_weights)
        throw Error(Errc::shape_mismatch,
                    "conv weights: expected " + std::to_string(expected_weights) +
                        " values, got " + std::to_string(weights.size()));
    if (biases.size() != static_cast<std::size_t>(layer.filters))
        throw Error(Errc::shape_mismatch,
                    "conv biases: expected " + std::to_string(layer.filters) + " values, got " +
                        std::to_string(biases.size()));

    const Shape out_shape = layer_output_shape(layer, {input.channels, input.height, input.width});
    Tensor out(out_shape.channels, out_shape.height, out_shape.width);

    const int plane = out.height * out.width;
    for (int f = 0; f < layer.filters; ++f)
        std::fill_n(out.channel(f), plane, biases[f]);

    const int pad = layer.same_pad ? k / 2 : 0;
    if (k == 1 && layer.stride == 1) {
        // 1x1 stride-1 convolution is a plain matrix product on the input.
        gemm_nn(layer.filters, plane, input.channels, weights.data(), input.data.data(),
                out.data.data());
    } else {
        std::vector<float> col(static_cast<std::size_t>(input.channels) * k * k * plane);
        im2col(input, k, layer.stride, pad, out.height, out.width, col.data());
        gemm_nn(layer.filters, plane, input.channels * k * k, weights.data(), col.data(),
                out.data.data());
    }

    apply_activation(out, layer.activation);
    return out;
}

void batchnorm_inplace(Tensor& t, std::span<const float> gamma, std::span<const float> mean,
                       std::span<const float> variance, std::span<const float> beta,
                       float eps) {
    if (gamma.size() != static_cast<std::size_t>(t.channels) || mean.size() != gamma.size() ||
        variance.size() != gamma.size() || beta.size() != gamma.size())
        throw Error(Errc::shape_mismatch, "batch norm parameter count differs from channels");

    const int plane = t.height * t.width;
    for (int c = 0; c < t.channels; ++c) {
        const float scale = gamma[c] / std::sqrt(variance[c] + eps);
        const float shift = beta[c] - scale * mean[c];
        float* p = t.channel(c);
        for (int i = 0; i < plane; ++i) p[i] = p[i] * scale + shift;
    }
}

Tensor maxpool(const Tensor& input, int size, int stride) {
    if (size <= 0 || stride <= 0)
        throw Error(Errc::shape_mismatch, "maxpool size and stride must be positive");
    const int out_h = (input.height + stride - 1) / stride;
    const int out_w = (input.width + stride - 1) / stride;
    Tensor out(input.channels, out_h, out_w);
    for (int c = 0; c < input.channels; ++c) {
        const float* src = input.channel(c);
        float* dst = out.channel(c);
        for (int oy = 0; oy < out_h; ++oy) {
            const int y0 = oy * stride;
            const int y1 = std::min(y0 + size, input.height);
            for (int ox = 0; ox < out_w; ++ox) {
                const int x0 = ox * stride;
                const int x1 = std::min(x0 + size, input.width);
                float best = src[static_cast<std::size_t>(y0) * input.width + x0];
                for (int y = y0; y < y1; ++y)
                    for (int x = x0; x < x1; ++x)
                        best = std::max(best, src[static_cast<std::size_t>(y) * input.width + x]);
                dst[static_cast<std::size_t>(oy) * out_w + ox] = best;
            }
        }
    }
    return out;
}

} // namespace tsrkit
