#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "coatflow/core/image.hpp"

namespace coatflow {

struct PointI {
    int x = 0;
    int y = 0;
    bool operator==(const PointI&) const = default;
};

struct PointD {
    double x = 0.0;
    double y = 0.0;
};

/// Fitted ellipse in image coordinates. a >= b > 0, theta in [0, pi).
struct Ellipse {
    double cx = 0.0;
    double cy = 0.0;
    double a = 0.0; // semi-major
    double b = 0.0; // semi-minor
    double theta = 0.0;

    bool contains(double x, double y) const;
};

/// One circle hypothesis: fitted ellipse plus the number of contour points
/// that produced it.
struct CircleCandidate {
    Ellipse ellipse;
    int support = 0;
};

/// Affine map from crop pixel coordinates to source coordinates:
/// src = origin + (crop + 0.5) * scale - 0.5 (per axis).
struct CropTransform {
    double x0 = 0.0;
    double y0 = 0.0;
    double scale = 1.0;
    int out_size = 0;

    PointD to_source(double u, double v) const {
        return {x0 + (u + 0.5) * scale - 0.5, y0 + (v + 0.5) * scale - 0.5};
    }
};

/// Output of the preprocessing pipeline: canonical square crop (contrast
/// enhanced), binary coating mask, and the ellipse the crop came from.
struct SensorROI {
    GrayImage crop;
    BinaryMask coating_mask;
    Ellipse source_ellipse;
    CropTransform transform;
};

struct PreprocessConfig {
    int crop_size = 256;
    int clahe_tiles = 8;
    double clahe_clip = 2.0;
    double min_radius_fraction = 0.15;
    double max_axis_ratio = 3.0;
    int close_radius = 2;
    std::uint64_t seed = 0;
};

// --- filters -------------------------------------------------------------

/// 5-point discrete Laplacian, kernel [[0,1,0],[1,-4,1],[0,1,0]], replicate
/// padding at the border. Requires width, height >= 3.
GrayImage laplacian(const GrayImage& img);

/// Otsu threshold over a 256-bin histogram of the image's value range.
double otsu_threshold(const GrayImage& img);

/// mask = img > threshold.
BinaryMask threshold_mask(const GrayImage& img, double threshold);

/// Contrast-limited adaptive histogram equalization. Per-tile 256-bin
/// histograms clipped at clip * (tile_pixels / 256), excess redistributed
/// uniformly; per-pixel mapping bilinearly interpolated between the four
/// surrounding tile mappings. clip may be +infinity (no clipping).
GrayImage clahe(const GrayImage& img, int tiles_x, int tiles_y, double clip);

// --- morphology ----------------------------------------------------------

/// Disk structuring element: offsets with dx^2 + dy^2 <= (r + 0.5)^2.
std::vector<PointI> disk_offsets(int radius);

BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask erode(const BinaryMask& mask, int radius);

/// Dilation followed by erosion with the same disk.
BinaryMask morphological_close(const BinaryMask& mask, int radius);

/// Fills background regions not reachable from the border (4-connected
/// background flood).
BinaryMask fill_holes(const BinaryMask& mask);

/// Keeps only the largest 8-connected foreground component (first-found on
/// ties). Empty mask stays empty.
BinaryMask largest_component(const BinaryMask& mask);

// --- contours ------------------------------------------------------------

/// Outer boundary of every 8-connected foreground component, traced
/// clockwise by Moore-neighbor following with Jacob's stopping criterion.
/// Components are ordered by their topmost-leftmost pixel.
std::vector<std::vector<PointI>> trace_contours(const BinaryMask& mask);

// --- ellipse fitting -----------------------------------------------------

/// Direct least-squares conic fit constrained to an ellipse, returned in
/// center/axes/angle form. Throws NumericError for degenerate input
/// (collinear points) or a non-ellipse conic; InvalidArgument for < 5 points.
Ellipse fit_ellipse(const std::vector<PointD>& points);
Ellipse fit_ellipse(const std::vector<PointI>& points);

// --- candidate filtering and cropping ------------------------------------

/// Removes center-distance outliers: candidate i is dropped when its
/// distance d_i from the mean center exceeds mean + 2*std of the other
/// candidates' distances. Never returns an empty list.
std::vector<CircleCandidate> filter_outliers(const std::vector<CircleCandidate>& candidates);

struct CropResult {
    GrayImage crop;
    Ellipse ellipse;
    CropTransform transform;
};

/// Selects the candidate with the largest a*b, crops its axis-aligned
/// bounding square (clamped to the image) and resizes to out_size x
/// out_size with bilinear interpolation.
CropResult crop_largest(const GrayImage& img, const std::vector<CircleCandidate>& candidates,
                        int out_size);

/// Bilinear resize of an axis-aligned square region [x0, x0+side) to an
/// out_size x out_size raster.
GrayImage resize_square_region(const GrayImage& img, double x0, double y0, double side,
                               int out_size);

// --- k-means -------------------------------------------------------------

struct Kmeans1dResult {
    std::vector<double> centers;    // size k
    std::vector<int> assignment;    // per input value
    double sse = 0.0;
};

/// 1-D k-means with k-means++ seeding and Lloyd iterations (stop when the
/// largest center shift < 1e-4 or after 100 iterations). Runs 8 seeded
/// restarts and keeps the lowest-SSE solution. Throws InvalidArgument when
/// the input has fewer distinct values than k.
Kmeans1dResult kmeans_1d(const std::vector<double>& values, int k, std::uint64_t seed);

/// Clusters per-pixel intensity and returns the mask of the coating
/// cluster, chosen as the cluster whose member pixels' mean distance to the
/// image center is smallest.
BinaryMask kmeans_segment(const GrayImage& img, int k, std::uint64_t seed);

/// Same, restricted to pixels where domain is set.
BinaryMask kmeans_segment(const GrayImage& img, const BinaryMask& domain, int k,
                          std::uint64_t seed);

// --- pipeline ------------------------------------------------------------

/// Seven-stage preprocessing: gray -> Laplacian -> Otsu on magnitude ->
/// close -> contours -> per-contour ellipse fit -> outlier removal ->
/// largest-circle crop -> CLAHE -> k-means coating segmentation. Throws
/// NumericError when no contour yields a valid ellipse.
SensorROI preprocess_pipeline(const RgbImage& img, const PreprocessConfig& cfg);

} // namespace coatflow
