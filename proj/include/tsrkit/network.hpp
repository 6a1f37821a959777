#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace tsrkit {

enum class Activation { linear, leaky };

// Leaky slope is fixed at 0.1.
inline constexpr float kLeakySlope = 0.1f;

struct ConvLayer {
    int filters = 0;
    int kernel = 1;       // 1 or 3
    int stride = 1;
    bool same_pad = true; // pad = kernel / 2 when set, 0 otherwise
    bool batch_norm = false;
    Activation activation = Activation::linear;
};

struct MaxPoolLayer {
    int size = 2;
    int stride = 2;
};

struct RegionLayer {
    std::vector<std::pair<float, float>> anchors; // (w, h) in cell units
    int num_classes = 0;
};

using LayerSpec = std::variant<ConvLayer, MaxPoolLayer, RegionLayer>;

struct Shape {
    int channels = 0;
    int height = 0;
    int width = 0;

    bool operator==(const Shape&) const = default;
};

struct NetworkSpec {
    int input_width = 0;
    int input_height = 0;
    int input_channels = 3;
    std::vector<LayerSpec> layers;

    Shape input_shape() const { return {input_channels, input_height, input_width}; }
};

// Output spatial size. Convolution: ceil(in / stride) with same padding,
// floor((in - kernel) / stride) + 1 without. Max pooling: ceil(in / stride);
// windows start at multiples of the stride and clamp to the tensor edge, so
// a size-2 stride-1 pool preserves the grid.
Shape layer_output_shape(const LayerSpec& layer, const Shape& input);

// Shapes after every layer, starting from the network input.
std::vector<Shape> trace_shapes(const NetworkSpec& spec);

// Parses the INI-style network description: [section] headers, key=value
// lines, # comments, blank lines ignored. Sections: [net] (width, height,
// channels), [convolutional] (filters, size, stride, pad, batch_normalize,
// activation), [maxpool] (size, stride), [region] (anchors, classes).
// Unknown keys are ignored; unknown sections throw unknown_section; missing
// required keys throw missing_field; a [region] whose input channel count
// differs from anchors*(5+classes), a [region] that is not last, or more
// than one [region] throw shape_mismatch.
NetworkSpec parse_network_spec(std::string_view text);

// Multiply-add count, 2 * K^2 * Cin * Cout * Hout * Wout summed over
// convolutional layers. Pooling and decoding contribute nothing.
double count_flops(const NetworkSpec& spec);

// Layer summary for inspection output, e.g. "conv 16 3x3/1 -> 16x416x416".
std::string describe_layer(const LayerSpec& layer, const Shape& output);

} // namespace tsrkit
