#include <algorithm>
#include <cmath>
#include <vector>

#include "coatflow/core/error.hpp"
#include "coatflow/preprocess/preprocess.hpp"

namespace coatflow {

std::vector<CircleCandidate> filter_outliers(const std::vector<CircleCandidate>& candidates) {
    if (candidates.empty()) throw InvalidArgument("filter_outliers: empty candidate list");
    const std::size_t n = candidates.size();
    if (n == 1) return candidates;

    double mx = 0.0, my = 0.0;
    for (const auto& c : candidates) {
        mx += c.ellipse.cx;
        my += c.ellipse.cy;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = std::hypot(candidates[i].ellipse.cx - mx, candidates[i].ellipse.cy - my);

    // Candidate i is judged against the other candidates' distance
    // statistics; the pooled mean+2*std cannot flag anything for n <= 5.
    std::vector<CircleCandidate> kept;
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum += d[j];
            sum2 += d[j] * d[j];
        }
        double m = sum / static_cast<double>(n - 1);
        double var = std::max(0.0, sum2 / static_cast<double>(n - 1) - m * m);
        if (d[i] <= m + 2.0 * std::sqrt(var)) kept.push_back(candidates[i]);
    }
    if (kept.empty()) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (d[i] < d[arg]) arg = i;
        kept.push_back(candidates[arg]);
    }
    return kept;
}

GrayImage resize_square_region(const GrayImage& img, double x0, double y0, double side,
                               int out_size) {
    GrayImage out(out_size, out_size);
    const double scale = side / out_size;
    for (int v = 0; v < out_size; ++v) {
        double sy = y0 + (v + 0.5) * scale - 0.5;
        int iy = static_cast<int>(std::floor(sy));
        double fy = sy - iy;
        int y0i = std::clamp(iy, 0, img.height - 1);
        int y1i = std::clamp(iy + 1, 0, img.height - 1);
        for (int u = 0; u < out_size; ++u) {
            double sx = x0 + (u + 0.5) * scale - 0.5;
            int ix = static_cast<int>(std::floor(sx));
            double fx = sx - ix;
            int x0i = std::clamp(ix, 0, img.width - 1);
            int x1i = std::clamp(ix + 1, 0, img.width - 1);
            double top = (1 - fx) * img.at(x0i, y0i) + fx * img.at(x1i, y0i);
            double bot = (1 - fx) * img.at(x0i, y1i) + fx * img.at(x1i, y1i);
            out.at(u, v) = (1 - fy) * top + fy * bot;
        }
    }
    return out;
}

CropResult crop_largest(const GrayImage& img, const std::vector<CircleCandidate>& candidates,
                        int out_size) {
    if (candidates.empty()) throw InvalidArgument("crop_largest: empty candidate list");
    const CircleCandidate* best = &candidates[0];
    for (const auto& c : candidates)
        if (c.ellipse.a * c.ellipse.b > best->ellipse.a * best->ellipse.b) best = &c;
    const Ellipse& e = best->ellipse;

    double ct = std::cos(e.theta), st = std::sin(e.theta);
    double ex = std::sqrt(e.a * e.a * ct * ct + e.b * e.b * st * st);
    double ey = std::sqrt(e.a * e.a * st * st + e.b * e.b * ct * ct);
    double side = 2.0 * std::max(ex, ey);
    side = std::min(side, static_cast<double>(std::min(img.width, img.height)));
    double x0 = std::clamp(e.cx - side / 2.0, 0.0, img.width - side);
    double y0 = std::clamp(e.cy - side / 2.0, 0.0, img.height - side);

    CropResult r;
    r.crop = resize_square_region(img, x0, y0, side, out_size);
    r.ellipse = e;
    r.transform = {x0, y0, side / out_size, out_size};
    return r;
}

SensorROI preprocess_pipeline(const RgbImage& img, const PreprocessConfig& cfg) {
    GrayImage gray = rgb_to_gray(img);
    GrayImage lap = laplacian(gray);
    for (double& v : lap.data) v = std::abs(v);
    BinaryMask edges = threshold_mask(lap, otsu_threshold(lap));
    if (cfg.close_radius >= 1) edges = morphological_close(edges, cfg.close_radius);

    const double min_r = cfg.min_radius_fraction * std::min(img.width, img.height);
    std::vector<CircleCandidate> candidates;
    for (const auto& contour : trace_contours(edges)) {
        if (contour.size() < 5) continue;
        Ellipse e;
        try {
            e = fit_ellipse(contour);
        } catch (const Error&) {
            continue; // degenerate contour
        }
        if (e.b < min_r) continue;
        if (e.a / e.b > cfg.max_axis_ratio) continue;
        // reject fits whose box leaves the frame entirely
        if (e.cx < 0 || e.cy < 0 || e.cx >= img.width || e.cy >= img.height) continue;
        candidates.push_back({e, static_cast<int>(contour.size())});
    }
    if (candidates.empty())
        throw NumericError("preprocess_pipeline: no circle found");

    candidates = filter_outliers(candidates);
    CropResult crop = crop_largest(gray, candidates, cfg.crop_size);
    GrayImage enhanced = clahe(crop.crop, cfg.clahe_tiles, cfg.clahe_tiles, cfg.clahe_clip);

    // Segmentation domain: pixels inside the fitted ellipse, mapped to crop
    // coordinates. k=2 then separates coating from the metal ring.
    BinaryMask domain(enhanced.width, enhanced.height);
    for (int v = 0; v < enhanced.height; ++v) {
        for (int u = 0; u < enhanced.width; ++u) {
            PointD s = crop.transform.to_source(u, v);
            if (crop.ellipse.contains(s.x, s.y)) domain.set(u, v, true);
        }
    }
    if (domain.empty()) throw NumericError("preprocess_pipeline: ellipse outside crop");

    BinaryMask cluster = kmeans_segment(enhanced, domain, 2, cfg.seed);
    BinaryMask coating = fill_holes(largest_component(cluster));
    if (coating.empty()) throw NumericError("preprocess_pipeline: empty coating mask");

    SensorROI roi;
    roi.crop = std::move(enhanced);
    roi.coating_mask = std::move(coating);
    roi.source_ellipse = crop.ellipse;
    roi.transform = crop.transform;
    return roi;
}

} // namespace coatflow
