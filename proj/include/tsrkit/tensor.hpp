#pragma once

#include <cstddef>
#include <vector>

namespace tsrkit {

// Channel-major (CHW) float tensor used by the inference engine.
struct Tensor {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<float> data;

    Tensor() = default;
    Tensor(int c, int h, int w)
        : channels(c), height(h), width(w),
          data(static_cast<std::size_t>(c) * h * w, 0.0f) {}

    std::size_t size() const { return data.size(); }

    float& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    float* channel(int c) { return data.data() + static_cast<std::size_t>(c) * height * width; }
    const float* channel(int c) const {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }
};

} // namespace tsrkit
