#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace coatflow {

/// 8-bit RGB raster, row-major interleaved triples.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // width * height * 3

    RgbImage() = default;
    RgbImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {}

    std::uint8_t at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

/// Floating-point grayscale raster, nominal range 0-255. Pixels stay
/// floating point through the whole pipeline; quantization happens only
/// when a file is written.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data; // width * height

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

/// Binary raster (0/1 per pixel).
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // width * height, values 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto v : data) n += (v != 0);
        return n;
    }
    bool empty() const { return count() == 0; }
};

/// ITU-R BT.601 luma: 0.299 R + 0.587 G + 0.114 B.
GrayImage rgb_to_gray(const RgbImage& img);

/// Replicates a gray raster into RGB (values clamped/rounded to 8 bit).
RgbImage gray_to_rgb(const GrayImage& img);

} // namespace coatflow
