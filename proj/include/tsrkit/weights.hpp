#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsrkit/network.hpp"

namespace tsrkit {

// Parameters of one convolutional layer as stored on disk. With batch norm
// the file carries beta, gamma, mean, variance (one float per filter) in
// that order instead of biases; kernel weights follow either way, laid out
// filter-major (Cout x Cin x K x K), little-endian float32.
struct ConvParams {
    int out_channels = 0;
    int in_channels = 0;
    int kernel = 1;
    bool has_batch_norm = false;

    std::vector<float> weights;
    std::vector<float> biases;
    std::vector<float> bn_beta;
    std::vector<float> bn_gamma;
    std::vector<float> bn_mean;
    std::vector<float> bn_variance;
};

struct WeightsHeader {
    std::int32_t major = 0;
    std::int32_t minor = 2;
    std::int32_t revision = 0;
    std::int64_t seen = 0;

    // The seen counter is 8 bytes from format version 0.2 on, 4 before.
    std::size_t byte_size() const { return 12 + (major * 10 + minor >= 2 ? 8u : 4u); }
};

struct WeightStore {
    WeightsHeader header;
    std::vector<ConvParams> conv; // one entry per convolutional layer, in order
};

// Byte range of one parameter block inside the weights file.
struct WeightExtent {
    int layer_index = -1; // -1 for the header
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string what;
};

// Extents implied by the network description (header first, then per conv
// layer its bias or batch-norm blocks followed by the kernel block).
std::vector<WeightExtent> describe_weights(const NetworkSpec& spec,
                                           const WeightsHeader& header);

// Loads the binary weights for the given network. Throws bad_header when the
// file is shorter than the header, size_mismatch when the payload size does
// not match the byte count the network implies (message carries expected and
// actual sizes).
WeightStore load_weights(std::span<const std::uint8_t> bytes, const NetworkSpec& spec);

// Serializes a store back to the binary layout (used to build test and
// fixture files).
std::vector<std::uint8_t> serialize_weights(const WeightStore& store);

// Returns parameters with batch norm folded into weights and biases:
// w' = w * gamma / sqrt(variance + eps), b' = beta - gamma * mean /
// sqrt(variance + eps). Input must have has_batch_norm set; the result does
// not.
ConvParams fold_batch_norm(const ConvParams& params, float eps);

// Epsilon used when folding at model load time.
inline constexpr float kBatchNormEpsilon = 1e-6f;

} // namespace tsrkit
