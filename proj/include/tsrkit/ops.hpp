#pragma once

#include <cmath>
#include <span>

#include "tsrkit/network.hpp"
#include "tsrkit/tensor.hpp"

namespace tsrkit {

float activate(float x, Activation activation);

void apply_activation(Tensor& t, Activation activation);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// In-place softmax over an arbitrary span (max-subtracted for stability).
void softmax_inplace(std::span<float> values);

// 2-D convolution (cross-correlation) with per-filter bias and the layer's
// activation. weights are filter-major Cout x Cin x K x K; biases has Cout
// entries. Throws shape_mismatch when input channels or parameter sizes
// disagree with the layer.
Tensor conv2d(const Tensor& input, const ConvLayer& layer,
              std::span<const float> weights, std::span<const float> biases);

// Standalone batch normalization, y = gamma * (x - mean) / sqrt(var + eps)
// + beta per channel. Inference normally folds this into conv2d; the
// explicit form exists so the two paths can be checked against each other.
void batchnorm_inplace(Tensor& t, std::span<const float> gamma,
                       std::span<const float> mean, std::span<const float> variance,
                       std::span<const float> beta, float eps);

// Max pooling; output is ceil(in / stride) per dimension, windows start at
// x * stride and clamp to the tensor edge.
Tensor maxpool(const Tensor& input, int size, int stride);

} // namespace tsrkit
