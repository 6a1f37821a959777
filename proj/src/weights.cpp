#include "tsrkit/weights.hpp"

#include <cmath>
#include <cstring>

#include "tsrkit/errors.hpp"

namespace tsrkit {

namespace {

// All scalars in the file are little-endian.
template <typename T>
T read_le(const std::uint8_t* p) {
    T value;
    if constexpr (sizeof(T) == 4) {
        std::uint32_t u = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
                          std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
        std::memcpy(&value, &u, 4);
    } else {
        std::uint64_t u = 0;
        for (int i = 7; i >= 0; --i) u = u << 8 | p[i];
        std::memcpy(&value, &u, 8);
    }
    return value;
}

template <typename T>
void write_le(std::vector<std::uint8_t>& out, T value) {
    if constexpr (sizeof(T) == 4) {
        std::uint32_t u;
        std::memcpy(&u, &value, 4);
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    } else {
        std::uint64_t u;
        std::memcpy(&u, &value, 8);
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    }
}

struct ConvDims {
    int out_channels;
    int in_channels;
    int kernel;
    bool batch_norm;
};

std::vector<ConvDims> conv_dims(const NetworkSpec& spec) {
    std::vector<ConvDims> dims;
    Shape cur = spec.input_shape();
    for (const LayerSpec& layer : spec.layers) {
        if (const auto* conv = std::get_if<ConvLayer>(&layer))
            dims.push_back({conv->filters, cur.channels, conv->kernel, conv->batch_norm});
        cur = layer_output_shape(layer, cur);
    }
    return dims;
}

std::size_t float_count(const ConvDims& d) {
    const std::size_t per_filter = d.batch_norm ? 4u : 1u;
    return per_filter * d.out_channels +
           static_cast<std::size_t>(d.out_channels) * d.in_channels * d.kernel * d.kernel;
}

} // namespace

std::vector<WeightExtent> describe_weights(const NetworkSpec& spec,
                                           const WeightsHeader& header) {
    std::vector<WeightExtent> extents;
    std::size_t off = header.byte_size();
    extents.push_back({-1, 0, off, "header"});

    int layer_index = 0;
    Shape cur = spec.input_shape();
    for (const LayerSpec& layer : spec.layers) {
        if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
            const std::size_t per = static_cast<std::size_t>(conv->filters) * 4;
            auto block = [&](const char* what, std::size_t bytes) {
                extents.push_back({layer_index, off, off + bytes, what});
                off += bytes;
            };
            if (conv->batch_norm) {
                block("bn beta", per);
                block("bn gamma", per);
                block("bn mean", per);
                block("bn variance", per);
            } else {
                block("biases", per);
            }
            block("weights", static_cast<std::size_t>(conv->filters) * cur.channels *
                                 conv->kernel * conv->kernel * 4);
        }
        cur = layer_output_shape(layer, cur);
        ++layer_index;
    }
    return extents;
}

WeightStore load_weights(std::span<const std::uint8_t> bytes, const NetworkSpec& spec) {
    if (bytes.size() < 12)
        throw Error(Errc::bad_header, "file has " + std::to_string(bytes.size()) +
                                          " bytes, header needs at least 12");

    WeightStore store;
    store.header.major = read_le<std::int32_t>(bytes.data());
    store.header.minor = read_le<std::int32_t>(bytes.data() + 4);
    store.header.revision = read_le<std::int32_t>(bytes.data() + 8);

    const std::size_t header_size = store.header.byte_size();
    if (bytes.size() < header_size)
        throw Error(Errc::bad_header, "file has " + std::to_string(bytes.size()) +
                                          " bytes, header needs " + std::to_string(header_size));
    if (header_size == 20) {
        store.header.seen = read_le<std::int64_t>(bytes.data() + 12);
    } else {
        store.header.seen = read_le<std::int32_t>(bytes.data() + 12);
    }

    const std::vector<ConvDims> dims = conv_dims(spec);
    std::size_t expected_floats = 0;
    for (const ConvDims& d : dims) expected_floats += float_count(d);
    const std::size_t expected = header_size + expected_floats * 4;
    if (bytes.size() != expected)
        throw Error(Errc::size_mismatch, "expected " + std::to_string(expected) +
                                             " bytes for this network, got " +
                                             std::to_string(bytes.size()));

    const std::uint8_t* p = bytes.data() + header_size;
    auto read_block = [&](std::vector<float>& dst, std::size_t n) {
        dst.resize(n);
        for (std::size_t i = 0; i < n; ++i, p += 4) dst[i] = read_le<float>(p);
    };

    for (const ConvDims& d : dims) {
        ConvParams params;
        params.out_channels = d.out_channels;
        params.in_channels = d.in_channels;
        params.kernel = d.kernel;
        params.has_batch_norm = d.batch_norm;
        const std::size_t n = static_cast<std::size_t>(d.out_channels);
        if (d.batch_norm) {
            read_block(params.bn_beta, n);
            read_block(params.bn_gamma, n);
            read_block(params.bn_mean, n);
            read_block(params.bn_variance, n);
        } else {
            read_block(params.biases, n);
        }
        read_block(params.weights,
                   n * d.in_channels * static_cast<std::size_t>(d.kernel) * d.kernel);
        store.conv.push_back(std::move(params));
    }
    return store;
}

std::vector<std::uint8_t> serialize_weights(const WeightStore& store) {
    std::vector<std::uint8_t> out;
    write_le(out, store.header.major);
    write_le(out, store.header.minor);
    write_le(out, store.header.revision);
    if (store.header.byte_size() == 20) {
        write_le(out, store.header.seen);
    } else {
        write_le(out, static_cast<std::int32_t>(store.header.seen));
    }
    auto write_block = [&](const std::vector<float>& src) {
        for (float v : src) write_le(out, v);
    };
    for (const ConvParams& params : store.conv) {
        if (params.has_batch_norm) {
            write_block(params.bn_beta);
            write_block(params.bn_gamma);
            write_block(params.bn_mean);
            write_block(params.bn_variance);
        } else {
            write_block(params.biases);
        }
        write_block(params.weights);
    }
    return out;
}

ConvParams fold_batch_norm(const ConvParams& params, float eps) {
    if (!params.has_batch_norm)
        throw Error(Errc::shape_mismatch, "layer has no batch norm to fold");

    ConvParams folded;
    folded.out_channels = params.out_channels;
    folded.in_channels = params.in_channels;
    folded.kernel = params.kernel;
    folded.has_batch_norm = false;
    folded.weights = params.weights;
    folded.biases.resize(params.out_channels);

    const std::size_t per_filter =
        static_cast<std::size_t>(params.in_channels) * params.kernel * params.kernel;
    for (int f = 0; f < params.out_channels; ++f) {
        const float scale =
            params.bn_gamma[f] / std::sqrt(params.bn_variance[f] + eps);
        folded.biases[f] = params.bn_beta[f] - scale * params.bn_mean[f];
        float* w = folded.weights.data() + per_filter * f;
        for (std::size_t i = 0; i < per_filter; ++i) w[i] *= scale;
    }
    return folded;
}

} // namespace tsrkit
