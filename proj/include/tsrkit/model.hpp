#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tsrkit/bbox.hpp"
#include "tsrkit/network.hpp"
#include "tsrkit/tensor.hpp"
#include "tsrkit/weights.hpp"

namespace tsrkit {

// A network description bound to loaded parameters, ready to run. Batch
// norm is folded into the convolution parameters at construction.
class Model {
public:
    Model(NetworkSpec spec, const WeightStore& store);

    static Model load(const std::filesystem::path& cfg_path,
                      const std::filesystem::path& weights_path);

    const NetworkSpec& spec() const { return spec_; }
    const std::vector<ConvParams>& params() const { return params_; }

    // Runs every layer up to (not including) the region layer. Input shape
    // must match the network input; throws shape_mismatch otherwise.
    Tensor execute(const Tensor& input) const;

    // execute + region decode. Throws missing_field when the network has no
    // region layer. Detections are in network-input pixel coordinates.
    std::vector<Detection> forward(const Tensor& input, double conf_threshold) const;

    bool has_region() const;
    const RegionLayer& region() const;

private:
    NetworkSpec spec_;
    std::vector<ConvParams> params_; // folded, one per conv layer
};

} // namespace tsrkit
