#include <vector>

#include "coatflow/core/error.hpp"
#include "coatflow/preprocess/preprocess.hpp"

namespace coatflow {

std::vector<PointI> disk_offsets(int radius) {
    if (radius < 1) throw InvalidArgument("disk_offsets: radius must be >= 1");
    std::vector<PointI> offs;
    const double r2 = (radius + 0.5) * (radius + 0.5);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= r2) offs.push_back({dx, dy});
    return offs;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
    auto offs = disk_offsets(radius);
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            for (auto [dx, dy] : offs) {
                int nx = x + dx, ny = y + dy;
                if (mask.in_bounds(nx, ny)) out.set(nx, ny, true);
            }
        }
    }
    return out;
}

BinaryMask erode(const BinaryMask& mask, int radius) {
    auto offs = disk_offsets(radius);
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool keep = true;
            for (auto [dx, dy] : offs) {
                int nx = x + dx, ny = y + dy;
                // out-of-bounds treated as background
                if (!mask.in_bounds(nx, ny) || !mask.at(nx, ny)) {
                    keep = false;
                    break;
                }
            }
            out.set(x, y, keep);
        }
    }
    return out;
}

BinaryMask morphological_close(const BinaryMask& mask, int radius) {
    return erode(dilate(mask, radius), radius);
}

BinaryMask fill_holes(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<std::uint8_t> reached(static_cast<std::size_t>(w) * h, 0);
    std::vector<PointI> stack;
    auto push_bg = [&](int x, int y) {
        std::size_t i = static_cast<std::size_t>(y) * w + x;
        if (!reached[i] && !mask.data[i]) {
            reached[i] = 1;
            stack.push_back({x, y});
        }
    };
    for (int x = 0; x < w; ++x) {
        push_bg(x, 0);
        push_bg(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        push_bg(0, y);
        push_bg(w - 1, y);
    }
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        if (x > 0) push_bg(x - 1, y);
        if (x + 1 < w) push_bg(x + 1, y);
        if (y > 0) push_bg(x, y - 1);
        if (y + 1 < h) push_bg(x, y + 1);
    }
    BinaryMask out(w, h);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = (mask.data[i] || !reached[i]) ? 1 : 0;
    return out;
}

namespace {

// 8-connected labeling; labels assigned in scan order starting at 1.
std::vector<int> label_components(const BinaryMask& mask, int& n_labels) {
    const int w = mask.width, h = mask.height;
    std::vector<int> label(static_cast<std::size_t>(w) * h, 0);
    std::vector<PointI> stack;
    n_labels = 0;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            std::size_t i0 = static_cast<std::size_t>(y0) * w + x0;
            if (!mask.data[i0] || label[i0]) continue;
            int cur = ++n_labels;
            label[i0] = cur;
            stack.push_back({x0, y0});
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (!dx && !dy) continue;
                        int nx = x + dx, ny = y + dy;
                        if (!mask.in_bounds(nx, ny)) continue;
                        std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                        if (mask.data[ni] && !label[ni]) {
                            label[ni] = cur;
                            stack.push_back({nx, ny});
                        }
                    }
                }
            }
        }
    }
    return label;
}

} // namespace

BinaryMask largest_component(const BinaryMask& mask) {
    int n = 0;
    auto label = label_components(mask, n);
    if (n == 0) return mask;
    std::vector<std::size_t> count(static_cast<std::size_t>(n) + 1, 0);
    for (int l : label)
        if (l) ++count[static_cast<std::size_t>(l)];
    int best = 1;
    for (int l = 2; l <= n; ++l)
        if (count[static_cast<std::size_t>(l)] > count[static_cast<std::size_t>(best)]) best = l;
    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = (label[i] == best) ? 1 : 0;
    return out;
}

} // namespace coatflow
