#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "coatflow/core/error.hpp"
#include "coatflow/preprocess/preprocess.hpp"

namespace coatflow {

GrayImage laplacian(const GrayImage& img) {
    if (img.width < 3 || img.height < 3)
        throw InvalidArgument("laplacian: image must be at least 3x3");
    GrayImage out(img.width, img.height);
    const int w = img.width, h = img.height;
    auto clampx = [&](int x) { return std::clamp(x, 0, w - 1); };
    auto clampy = [&](int y) { return std::clamp(y, 0, h - 1); };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double c = img.at(x, y);
            double v = img.at(clampx(x - 1), y) + img.at(clampx(x + 1), y) +
                       img.at(x, clampy(y - 1)) + img.at(x, clampy(y + 1)) - 4.0 * c;
            out.at(x, y) = v;
        }
    }
    return out;
}

double otsu_threshold(const GrayImage& img) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) return lo; // constant image: threshold at the value
    constexpr int kBins = 256;
    std::vector<double> hist(kBins, 0.0);
    const double scale = kBins / (hi - lo);
    for (double v : img.data) {
        int b = std::min(kBins - 1, static_cast<int>((v - lo) * scale));
        hist[b] += 1.0;
    }
    const double total = static_cast<double>(img.data.size());
    double sum_all = 0.0;
    for (int b = 0; b < kBins; ++b) sum_all += b * hist[b];

    double best_var = -1.0;
    int best_bin = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int b = 0; b < kBins - 1; ++b) {
        w0 += hist[b];
        sum0 += b * hist[b];
        double w1 = total - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        double m0 = sum0 / w0;
        double m1 = (sum_all - sum0) / w1;
        double var = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (var > best_var) {
            best_var = var;
            best_bin = b;
        }
    }
    // threshold at the upper edge of the chosen bin, in original units
    return lo + (best_bin + 1) / scale;
}

BinaryMask threshold_mask(const GrayImage& img, double threshold) {
    BinaryMask m(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) m.data[i] = img.data[i] > threshold ? 1 : 0;
    return m;
}

GrayImage clahe(const GrayImage& img, int tiles_x, int tiles_y, double clip) {
    if (tiles_x < 1 || tiles_y < 1) throw InvalidArgument("clahe: tile grid must be >= 1x1");
    if (!(clip > 0.0)) throw InvalidArgument("clahe: clip must be > 0");
    if (img.width < tiles_x || img.height < tiles_y)
        throw InvalidArgument("clahe: image smaller than tile grid");

    const int w = img.width, h = img.height;
    constexpr int kBins = 256;

    auto tile_x0 = [&](int i) { return static_cast<int>(static_cast<long>(i) * w / tiles_x); };
    auto tile_y0 = [&](int j) { return static_cast<int>(static_cast<long>(j) * h / tiles_y); };
    auto bin_of = [](double v) {
        return std::clamp(static_cast<int>(v), 0, kBins - 1);
    };

    // Per-tile clipped-CDF lookup tables (float-valued, no quantization).
    std::vector<std::vector<double>> lut(static_cast<std::size_t>(tiles_x) * tiles_y,
                                         std::vector<double>(kBins, 0.0));
    for (int tj = 0; tj < tiles_y; ++tj) {
        for (int ti = 0; ti < tiles_x; ++ti) {
            int x0 = tile_x0(ti), x1 = tile_x0(ti + 1);
            int y0 = tile_y0(tj), y1 = tile_y0(tj + 1);
            double hist[kBins] = {0.0};
            const double npix = static_cast<double>(x1 - x0) * (y1 - y0);
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) hist[bin_of(img.at(x, y))] += 1.0;
            if (std::isfinite(clip)) {
                double limit = std::max(1.0, clip * npix / kBins);
                double excess = 0.0;
                for (double& c : hist) {
                    if (c > limit) {
                        excess += c - limit;
                        c = limit;
                    }
                }
                double add = excess / kBins;
                for (double& c : hist) c += add;
            }
            auto& t = lut[static_cast<std::size_t>(tj) * tiles_x + ti];
            double cum = 0.0;
            for (int b = 0; b < kBins; ++b) {
                cum += hist[b];
                t[b] = cum * 255.0 / npix;
            }
        }
    }

    // Tile centers in pixel coordinates.
    std::vector<double> cx(tiles_x), cy(tiles_y);
    for (int i = 0; i < tiles_x; ++i) cx[i] = (tile_x0(i) + tile_x0(i + 1) - 1) / 2.0;
    for (int j = 0; j < tiles_y; ++j) cy[j] = (tile_y0(j) + tile_y0(j + 1) - 1) / 2.0;

    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        // surrounding tile rows
        int j0 = 0;
        while (j0 + 1 < tiles_y && cy[j0 + 1] <= y) ++j0;
        int j1 = std::min(j0 + 1, tiles_y - 1);
        double fy = 0.0;
        if (j1 > j0 && y >= cy[j0]) fy = (y - cy[j0]) / (cy[j1] - cy[j0]);
        if (y < cy[0]) { j0 = j1 = 0; fy = 0.0; }
        for (int x = 0; x < w; ++x) {
            int i0 = 0;
            while (i0 + 1 < tiles_x && cx[i0 + 1] <= x) ++i0;
            int i1 = std::min(i0 + 1, tiles_x - 1);
            double fx = 0.0;
            if (i1 > i0 && x >= cx[i0]) fx = (x - cx[i0]) / (cx[i1] - cx[i0]);
            if (x < cx[0]) { i0 = i1 = 0; fx = 0.0; }
            int b = bin_of(img.at(x, y));
            double v00 = lut[static_cast<std::size_t>(j0) * tiles_x + i0][b];
            double v10 = lut[static_cast<std::size_t>(j0) * tiles_x + i1][b];
            double v01 = lut[static_cast<std::size_t>(j1) * tiles_x + i0][b];
            double v11 = lut[static_cast<std::size_t>(j1) * tiles_x + i1][b];
            out.at(x, y) = (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
        }
    }
    return out;
}

} // namespace coatflow
