#include "tsrkit/model.hpp"

#include <string>

#include "tsrkit/errors.hpp"
#include "tsrkit/io.hpp"
#include "tsrkit/ops.hpp"
#include "tsrkit/region.hpp"

namespace tsrkit {

Model::Model(NetworkSpec spec, const WeightStore& store) : spec_(std::move(spec)) {
    params_.reserve(store.conv.size());
    for (const ConvParams& p : store.conv)
        params_.push_back(p.has_batch_norm ? fold_batch_norm(p, kBatchNormEpsilon) : p);
}

Model Model::load(const std::filesystem::path& cfg_path,
                  const std::filesystem::path& weights_path) {
    NetworkSpec spec = parse_network_spec(read_file_text(cfg_path));
    auto bytes = read_file_bytes(weights_path);
    WeightStore store = load_weights(bytes, spec);
    return Model(std::move(spec), store);
}

bool Model::has_region() const {
    return !spec_.layers.empty() && std::holds_alternative<RegionLayer>(spec_.layers.back());
}

const RegionLayer& Model::region() const {
    if (!has_region()) throw Error(Errc::missing_field, "network has no region layer");
    return std::get<RegionLayer>(spec_.layers.back());
}

Tensor Model::execute(const Tensor& input) const {
    if (input.channels != spec_.input_channels || input.height != spec_.input_height ||
        input.width != spec_.input_width)
        throw Error(Errc::shape_mismatch,
                    "input is " + std::to_string(input.channels) + "x" +
                        std::to_string(input.height) + "x" + std::to_string(input.width) +
                        ", network expects " + std::to_string(spec_.input_channels) + "x" +
                        std::to_string(spec_.input_height) + "x" +
                        std::to_string(spec_.input_width));

    Tensor cur = input;
    std::size_t conv_index = 0;
    for (const LayerSpec& layer : spec_.layers) {
        if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
            const ConvParams& p = params_[conv_index++];
            cur = conv2d(cur, *conv, p.weights, p.biases);
        } else if (const auto* pool = std::get_if<MaxPoolLayer>(&layer)) {
            cur = maxpool(cur, pool->size, pool->stride);
        }
        // The region layer is handled by forward().
    }
    return cur;
}

std::vector<Detection> Model::forward(const Tensor& input, double conf_threshold) const {
    const RegionLayer& reg = region();
    Tensor feature = execute(input);
    return region_decode(feature, reg, spec_.input_width, spec_.input_height, conf_threshold);
}

} // namespace tsrkit
