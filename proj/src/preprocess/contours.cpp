#include <vector>

#include "coatflow/preprocess/preprocess.hpp"

namespace coatflow {

namespace {

// Clockwise Moore neighborhood in image coordinates (y grows downward):
// E, SE, S, SW, W, NW, N, NE.
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

// Moore-neighbor tracing from the component's topmost-leftmost pixel.
// Terminates when the (pixel, backtrack-direction) state returns to its
// initial value (Jacob's stopping criterion).
std::vector<PointI> trace_from(const BinaryMask& mask, PointI start) {
    std::vector<PointI> contour;
    PointI p = start;
    int back = 4; // backtrack points W: start has no foreground W/N neighbors
    const int init_back = back;
    const std::size_t cap = 8 * mask.data.size() + 8;
    std::size_t steps = 0;
    do {
        contour.push_back(p);
        int nd = -1;
        for (int k = 1; k <= 8; ++k) {
            int c = (back + k) & 7;
            int nx = p.x + kDx[c], ny = p.y + kDy[c];
            if (mask.in_bounds(nx, ny) && mask.at(nx, ny)) {
                nd = c;
                break;
            }
        }
        if (nd < 0) break; // isolated pixel
        p = {p.x + kDx[nd], p.y + kDy[nd]};
        back = (nd + 4) & 7;
    } while (!(p == start && back == init_back) && ++steps < cap);
    return contour;
}

} // namespace

std::vector<std::vector<PointI>> trace_contours(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<int> label(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::vector<PointI>> contours;
    std::vector<PointI> stack;
    int next = 0;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            std::size_t i0 = static_cast<std::size_t>(y0) * w + x0;
            if (!mask.data[i0] || label[i0]) continue;
            // first pixel found in scan order is the topmost-leftmost
            contours.push_back(trace_from(mask, {x0, y0}));
            // flood-fill the component so it is traced once
            int cur = ++next;
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
    return contours;
}

} // namespace coatflow
