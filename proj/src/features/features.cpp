#include "coatflow/features/features.hpp"

#include <algorithm>
#include <cmath>

#include "coatflow/core/error.hpp"

namespace coatflow {

namespace {

// Central differences with replicate borders.
void gradients(const GrayImage& img, GrayImage& gx, GrayImage& gy) {
    const int w = img.width, h = img.height;
    gx = GrayImage(w, h);
    gy = GrayImage(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int xm = std::max(0, x - 1), xp = std::min(w - 1, x + 1);
            int ym = std::max(0, y - 1), yp = std::min(h - 1, y + 1);
            gx.at(x, y) = (img.at(xp, y) - img.at(xm, y)) / 2.0;
            gy.at(x, y) = (img.at(x, yp) - img.at(x, ym)) / 2.0;
        }
    }
}

// 5-tap binomial smoothing, separable, replicate borders.
GrayImage smooth5(const GrayImage& img) {
    static constexpr double k[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
    const int w = img.width, h = img.height;
    GrayImage tmp(w, h), out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int t = -2; t <= 2; ++t) s += k[t + 2] * img.at(std::clamp(x + t, 0, w - 1), y);
            tmp.at(x, y) = s;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int t = -2; t <= 2; ++t) s += k[t + 2] * tmp.at(x, std::clamp(y + t, 0, h - 1));
            out.at(x, y) = s;
        }
    return out;
}

// Stride-2 central differences on a smoothed image.
void coarse_gradients(const GrayImage& img, GrayImage& gx, GrayImage& gy) {
    GrayImage s = smooth5(img);
    const int w = img.width, h = img.height;
    gx = GrayImage(w, h);
    gy = GrayImage(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int xm = std::max(0, x - 2), xp = std::min(w - 1, x + 2);
            int ym = std::max(0, y - 2), yp = std::min(h - 1, y + 2);
            gx.at(x, y) = (s.at(xp, y) - s.at(xm, y)) / 4.0;
            gy.at(x, y) = (s.at(x, yp) - s.at(x, ym)) / 4.0;
        }
    }
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

} // namespace

FeaturePyramid extract_pyramid(const SensorROI& roi, const FeatureConfig& cfg) {
    const GrayImage& img = roi.crop;
    if (img.width != img.height) throw InvalidArgument("extract_pyramid: crop must be square");
    if (roi.coating_mask.width != img.width || roi.coating_mask.height != img.height)
        throw InvalidArgument("extract_pyramid: coating mask shape mismatch");

    GrayImage gx, gy, cgx, cgy;
    gradients(img, gx, gy);
    coarse_gradients(img, cgx, cgy);
    GrayImage lap = laplacian(img);

    FeaturePyramid pyr;
    for (int level = 0; level < cfg.levels; ++level) {
        const int cell = cfg.base_cell << level;
        if (img.width % cell != 0)
            throw InvalidArgument("extract_pyramid: crop size not divisible by cell size");
        const int grid = img.width / cell;
        FeatureMap fm;
        fm.width = grid;
        fm.height = grid;
        fm.dim = kFeatureDim;
        fm.scale_index = level;
        fm.data.assign(static_cast<std::size_t>(grid) * grid * kFeatureDim, 0.0);
        fm.valid.assign(static_cast<std::size_t>(grid) * grid, 0);

        for (int cyi = 0; cyi < grid; ++cyi) {
            for (int cxi = 0; cxi < grid; ++cxi) {
                double sum = 0.0, sum2 = 0.0, ax = 0.0, ay = 0.0, al = 0.0, cov = 0.0;
                double e[4] = {0, 0, 0, 0}, ce[4] = {0, 0, 0, 0};
                for (int y = cyi * cell; y < (cyi + 1) * cell; ++y) {
                    for (int x = cxi * cell; x < (cxi + 1) * cell; ++x) {
                        double v = img.at(x, y);
                        sum += v;
                        sum2 += v * v;
                        double dx = gx.at(x, y), dy = gy.at(x, y);
                        ax += std::abs(dx);
                        ay += std::abs(dy);
                        al += std::abs(lap.at(x, y));
                        double d45 = (dx + dy) * kInvSqrt2;
                        double d135 = (-dx + dy) * kInvSqrt2;
                        e[0] += dx * dx;
                        e[1] += d45 * d45;
                        e[2] += dy * dy;
                        e[3] += d135 * d135;
                        double sx = cgx.at(x, y), sy = cgy.at(x, y);
                        double s45 = (sx + sy) * kInvSqrt2;
                        double s135 = (-sx + sy) * kInvSqrt2;
                        ce[0] += sx * sx;
                        ce[1] += s45 * s45;
                        ce[2] += sy * sy;
                        ce[3] += s135 * s135;
                        cov += roi.coating_mask.at(x, y) ? 1.0 : 0.0;
                    }
                }
                const double npix = static_cast<double>(cell) * cell;
                double mean = sum / npix;
                double var = std::max(0.0, sum2 / npix - mean * mean);
                double* f = fm.cell(cxi, cyi);
                f[0] = mean;
                f[1] = std::sqrt(var);
                f[2] = ax / npix;
                f[3] = ay / npix;
                f[4] = al / npix;
                for (int o = 0; o < 4; ++o) f[5 + o] = std::sqrt(e[o] / npix);
                for (int o = 0; o < 4; ++o) f[9 + o] = std::sqrt(ce[o] / npix);
                f[13] = cov / npix;
                fm.valid[static_cast<std::size_t>(cyi) * grid + cxi] = cov > 0.0 ? 1 : 0;
            }
        }
        pyr.levels.push_back(std::move(fm));
    }
    return pyr;
}

FeatureNormStats fit_norm_stats(const std::vector<FeaturePyramid>& pyramids) {
    if (pyramids.empty()) throw InvalidArgument("fit_norm_stats: empty input");
    const std::size_t n_levels = pyramids[0].levels.size();
    FeatureNormStats stats;
    stats.levels.resize(n_levels);
    for (std::size_t lv = 0; lv < n_levels; ++lv) {
        const int dim = pyramids[0].levels[lv].dim;
        std::vector<double> sum(dim, 0.0), sum2(dim, 0.0);
        double count = 0.0;
        for (const auto& p : pyramids) {
            if (p.levels.size() != n_levels || p.levels[lv].dim != dim)
                throw InvalidArgument("fit_norm_stats: pyramid shape mismatch");
            const auto& fm = p.levels[lv];
            for (int cy = 0; cy < fm.height; ++cy)
                for (int cx = 0; cx < fm.width; ++cx) {
                    if (!fm.is_valid(cx, cy)) continue;
                    const double* f = fm.cell(cx, cy);
                    for (int d = 0; d < dim; ++d) {
                        sum[d] += f[d];
                        sum2[d] += f[d] * f[d];
                    }
                    count += 1.0;
                }
        }
        if (count < 1.0) throw InvalidArgument("fit_norm_stats: no valid cells");
        auto& l = stats.levels[lv];
        l.mean.resize(dim);
        l.std.resize(dim);
        for (int d = 0; d < dim; ++d) {
            l.mean[d] = sum[d] / count;
            double var = std::max(0.0, sum2[d] / count - l.mean[d] * l.mean[d]);
            l.std[d] = std::max(1e-6, std::sqrt(var));
        }
    }
    return stats;
}

FeaturePyramid normalize(const FeaturePyramid& pyr, const FeatureNormStats& stats) {
    if (pyr.levels.size() != stats.levels.size())
        throw InvalidArgument("normalize: level count mismatch");
    FeaturePyramid out = pyr;
    for (std::size_t lv = 0; lv < out.levels.size(); ++lv) {
        auto& fm = out.levels[lv];
        const auto& st = stats.levels[lv];
        if (fm.dim != static_cast<int>(st.mean.size()))
            throw InvalidArgument("normalize: dimension mismatch");
        for (std::size_t i = 0; i < fm.data.size(); ++i) {
            int d = static_cast<int>(i % fm.dim);
            fm.data[i] = (fm.data[i] - st.mean[d]) / st.std[d];
        }
    }
    return out;
}

} // namespace coatflow
