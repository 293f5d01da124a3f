#include "coatflow/core/image.hpp"

#include <algorithm>
#include <cmath>

namespace coatflow {

GrayImage rgb_to_gray(const RgbImage& img) {
    GrayImage out(img.width, img.height);
    const std::uint8_t* p = img.data.data();
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = 0.299 * p[3 * i] + 0.587 * p[3 * i + 1] + 0.114 * p[3 * i + 2];
    }
    return out;
}

RgbImage gray_to_rgb(const GrayImage& img) {
    RgbImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        double v = std::clamp(img.data[i], 0.0, 255.0);
        auto b = static_cast<std::uint8_t>(std::lround(v));
        out.data[3 * i] = b;
        out.data[3 * i + 1] = b;
        out.data[3 * i + 2] = b;
    }
    return out;
}

} // namespace coatflow
