#pragma once

#include <cstdint>
#include <vector>

#include "coatflow/preprocess/preprocess.hpp"

namespace coatflow {

/// Per-cell descriptor layout (dim = 14):
///   0 mean intensity
///   1 intensity std
///   2 mean |dI/dx|
///   3 mean |dI/dy|
///   4 mean |Laplacian|
///   5..8  RMS directional-derivative energy at 0/45/90/135 degrees
///   9..12 same energies at the coarser (smoothed, stride-2) scale
///   13 coating coverage fraction
constexpr int kFeatureDim = 14;

struct FeatureConfig {
    int levels = 3;
    int base_cell = 8; // cell side at level 0; doubles per level
};

/// Grid of per-cell feature vectors at one pyramid level.
struct FeatureMap {
    int width = 0;
    int height = 0;
    int dim = 0;
    int scale_index = 0;
    std::vector<double> data;        // width*height*dim, row-major cells
    std::vector<std::uint8_t> valid; // per cell; 0 = fully outside coating

    const double* cell(int cx, int cy) const {
        return data.data() + (static_cast<std::size_t>(cy) * width + cx) * dim;
    }
    double* cell(int cx, int cy) {
        return data.data() + (static_cast<std::size_t>(cy) * width + cx) * dim;
    }
    bool is_valid(int cx, int cy) const {
        return valid[static_cast<std::size_t>(cy) * width + cx] != 0;
    }
};

/// Fine-to-coarse stack of feature maps.
struct FeaturePyramid {
    std::vector<FeatureMap> levels;
};

/// Per-channel whitening statistics per level. std is floored at 1e-6.
struct FeatureNormStats {
    struct Level {
        std::vector<double> mean;
        std::vector<double> std;
    };
    std::vector<Level> levels;
};

/// Extracts the multi-scale descriptor pyramid from a canonical ROI crop.
/// Cells fully outside the coating mask are flagged invalid.
FeaturePyramid extract_pyramid(const SensorROI& roi, const FeatureConfig& cfg = {});

/// Per-channel mean/std over all valid cells of all pyramids.
FeatureNormStats fit_norm_stats(const std::vector<FeaturePyramid>& pyramids);

/// Channelwise (x - mean) / std.
FeaturePyramid normalize(const FeaturePyramid& pyr, const FeatureNormStats& stats);

} // namespace coatflow
