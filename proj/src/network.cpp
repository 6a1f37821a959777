#include "tsrkit/network.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <optional>

#include "tsrkit/errors.hpp"

namespace tsrkit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

struct Section {
    std::string name;
    int line_number = 0;
    std::map<std::string, std::string, std::less<>> values;
};

std::vector<Section> split_sections(std::string_view text) {
    std::vector<Section> sections;
    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_number;

        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(Errc::malformed_line,
                            "line " + std::to_string(line_number) + ": unterminated section header");
            sections.push_back({std::string(trim(line.substr(1, line.size() - 2))),
                                line_number,
                                {}});
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::malformed_line,
                        "line " + std::to_string(line_number) + ": expected key=value");
        if (sections.empty())
            throw Error(Errc::malformed_line,
                        "line " + std::to_string(line_number) + ": key=value before any section");
        std::string key(trim(line.substr(0, eq)));
        sections.back().values[key] = std::string(trim(line.substr(eq + 1)));
    }
    return sections;
}

int get_int(const Section& s, std::string_view key, std::optional<int> fallback = {}) {
    auto it = s.values.find(key);
    if (it == s.values.end()) {
        if (fallback) return *fallback;
        throw Error(Errc::missing_field,
                    "[" + s.name + "] (line " + std::to_string(s.line_number) + ") needs " +
                        std::string(key));
    }
    int value = 0;
    const char* begin = it->second.data();
    const char* end = begin + it->second.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw Error(Errc::malformed_line,
                    "[" + s.name + "] " + std::string(key) + "=" + it->second +
                        " is not an integer");
    return value;
}

std::vector<std::pair<float, float>> parse_anchors(const Section& s) {
    auto it = s.values.find("anchors");
    if (it == s.values.end())
        throw Error(Errc::missing_field,
                    "[region] (line " + std::to_string(s.line_number) + ") needs anchors");

    std::vector<float> flat;
    std::string_view rest = it->second;
    while (!rest.empty()) {
        std::size_t comma = rest.find(',');
        std::string_view tok = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (tok.empty()) continue;
        char* endp = nullptr;
        std::string buf(tok);
        float v = std::strtof(buf.c_str(), &endp);
        if (endp != buf.c_str() + buf.size())
            throw Error(Errc::malformed_line, "[region] anchor value '" + buf + "' is not a number");
        flat.push_back(v);
    }
    if (flat.empty() || flat.size() % 2 != 0)
        throw Error(Errc::malformed_line, "[region] anchors must form (w, h) pairs");

    std::vector<std::pair<float, float>> anchors;
    for (std::size_t i = 0; i < flat.size(); i += 2) anchors.emplace_back(flat[i], flat[i + 1]);
    return anchors;
}

} // namespace

Shape layer_output_shape(const LayerSpec& layer, const Shape& input) {
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
        const int k = conv->kernel;
        const int s = conv->stride;
        int oh = 0, ow = 0;
        if (conv->same_pad) {
            oh = (input.height + s - 1) / s;
            ow = (input.width + s - 1) / s;
        } else {
            if (input.height < k || input.width < k)
                throw Error(Errc::shape_mismatch,
                            "conv kernel " + std::to_string(k) + " larger than input " +
                                std::to_string(input.height) + "x" + std::to_string(input.width));
            oh = (input.height - k) / s + 1;
            ow = (input.width - k) / s + 1;
        }
        return {conv->filters, oh, ow};
    }
    if (const auto* pool = std::get_if<MaxPoolLayer>(&layer)) {
        const int s = pool->stride;
        return {input.channels, (input.height + s - 1) / s, (input.width + s - 1) / s};
    }
    // Region decodes in place; the shape passes through.
    return input;
}

std::vector<Shape> trace_shapes(const NetworkSpec& spec) {
    std::vector<Shape> shapes;
    shapes.reserve(spec.layers.size());
    Shape cur = spec.input_shape();
    for (const LayerSpec& layer : spec.layers) {
        cur = layer_output_shape(layer, cur);
        shapes.push_back(cur);
    }
    return shapes;
}

NetworkSpec parse_network_spec(std::string_view text) {
    std::vector<Section> sections = split_sections(text);
    if (sections.empty() || sections.front().name != "net")
        throw Error(Errc::missing_field, "description must start with a [net] section");

    NetworkSpec spec;
    const Section& net = sections.front();
    spec.input_width = get_int(net, "width");
    spec.input_height = get_int(net, "height");
    spec.input_channels = get_int(net, "channels", 3);
    if (spec.input_width <= 0 || spec.input_height <= 0 || spec.input_channels <= 0)
        throw Error(Errc::shape_mismatch, "[net] dimensions must be positive");

    Shape cur = spec.input_shape();
    bool region_seen = false;
    for (std::size_t i = 1; i < sections.size(); ++i) {
        const Section& s = sections[i];
        if (region_seen)
            throw Error(Errc::shape_mismatch,
                        "[" + s.name + "] (line " + std::to_string(s.line_number) +
                            ") appears after [region], which must be last");

        LayerSpec layer;
        if (s.name == "convolutional") {
            ConvLayer conv;
            conv.filters = get_int(s, "filters");
            conv.kernel = get_int(s, "size", 1);
            conv.stride = get_int(s, "stride", 1);
            conv.same_pad = get_int(s, "pad", 0) != 0;
            conv.batch_norm = get_int(s, "batch_normalize", 0) != 0;
            auto act = s.values.find("activation");
            if (act != s.values.end()) {
                if (act->second == "leaky") conv.activation = Activation::leaky;
                else if (act->second == "linear") conv.activation = Activation::linear;
                else
                    throw Error(Errc::malformed_line,
                                "[convolutional] unknown activation '" + act->second + "'");
            }
            if (conv.kernel != 1 && conv.kernel != 3)
                throw Error(Errc::shape_mismatch,
                            "[convolutional] kernel must be 1 or 3, got " +
                                std::to_string(conv.kernel));
            if (conv.filters <= 0 || conv.stride <= 0)
                throw Error(Errc::shape_mismatch, "[convolutional] filters and stride must be positive");
            layer = conv;
        } else if (s.name == "maxpool") {
            MaxPoolLayer pool;
            pool.size = get_int(s, "size", 2);
            pool.stride = get_int(s, "stride", 2);
            if (pool.size <= 0 || pool.stride <= 0)
                throw Error(Errc::shape_mismatch, "[maxpool] size and stride must be positive");
            layer = pool;
        } else if (s.name == "region") {
            RegionLayer region;
            region.anchors = parse_anchors(s);
            region.num_classes = get_int(s, "classes");
            if (region.num_classes <= 0)
                throw Error(Errc::shape_mismatch, "[region] classes must be positive");
            const int expected =
                static_cast<int>(region.anchors.size()) * (5 + region.num_classes);
            if (cur.channels != expected)
                throw Error(Errc::shape_mismatch,
                            "[region] expects " + std::to_string(expected) +
                                " input channels (anchors * (5 + classes)), got " +
                                std::to_string(cur.channels));
            region_seen = true;
            layer = region;
        } else {
            throw Error(Errc::unknown_section,
                        "[" + s.name + "] (line " + std::to_string(s.line_number) + ")");
        }

        cur = layer_output_shape(layer, cur);
        spec.layers.push_back(std::move(layer));
    }
    return spec;
}

double count_flops(const NetworkSpec& spec) {
    double flops = 0.0;
    Shape cur = spec.input_shape();
    for (const LayerSpec& layer : spec.layers) {
        Shape out = layer_output_shape(layer, cur);
        if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
            flops += 2.0 * conv->kernel * conv->kernel * cur.channels * out.channels *
                     out.height * out.width;
        }
        cur = out;
    }
    return flops;
}

std::string describe_layer(const LayerSpec& layer, const Shape& output) {
    char buf[128];
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
        std::snprintf(buf, sizeof(buf), "conv %4d %dx%d/%d%s -> %dx%dx%d", conv->filters,
                      conv->kernel, conv->kernel, conv->stride, conv->batch_norm ? " bn" : "",
                      output.channels, output.height, output.width);
    } else if (const auto* pool = std::get_if<MaxPoolLayer>(&layer)) {
        std::snprintf(buf, sizeof(buf), "maxpool   %dx%d/%d -> %dx%dx%d", pool->size, pool->size,
                      pool->stride, output.channels, output.height, output.width);
    } else {
        const auto& region = std::get<RegionLayer>(layer);
        std::snprintf(buf, sizeof(buf), "region    %zu anchors, %d classes", region.anchors.size(),
                      region.num_classes);
    }
    return buf;
}

} // namespace tsrkit
