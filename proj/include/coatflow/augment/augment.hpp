#pragma once

#include <cstdint>
#include <filesystem>

#include "coatflow/core/image.hpp"
#include "coatflow/core/manifest.hpp"

namespace coatflow {

/// Symmetric augmentation ranges. All transforms are sampled uniformly from
/// [-range, +range]; zero ranges (and disabled flips) make augment the
/// identity.
struct AugmentPolicy {
    bool flip_horizontal = false;
    bool flip_vertical = false;
    double rotation_deg = 0.0;
    double translate_px = 0.0;
    double hue_shift = 0.0;       // degrees on the 0..360 hue circle
    double saturation_pct = 0.0;
    double brightness_pct = 0.0;  // additive, percent of full scale
    double exposure_pct = 0.0;    // multiplicative gain on linear values
    double contrast_pct = 0.0;
    std::uint64_t seed = 0;

    /// Offline expansion recipe: flips, +/-45 deg, hue +/-25, saturation
    /// +/-30%, brightness +/-25%, exposure +/-5%.
    static AugmentPolicy offline(std::uint64_t seed);
    /// Train-time recipe: +/-15 deg rotation, +/-10 px translation,
    /// brightness/contrast +/-25%.
    static AugmentPolicy train(std::uint64_t seed);
};

/// Applies flips -> rotation (bilinear, reflect padding) -> translation ->
/// hue/saturation -> brightness -> exposure -> contrast, all sampled from
/// (policy.seed, index). Deterministic.
RgbImage augment(const RgbImage& img, const AugmentPolicy& policy, std::uint64_t index);

/// Writes `copies` augmented variants of every good entry to out_dir and
/// returns the original manifest plus the new entries. Bad images are
/// carried through untouched.
DatasetManifest expand_dataset(const DatasetManifest& manifest, const AugmentPolicy& policy,
                               int copies, const std::filesystem::path& out_dir);

} // namespace coatflow
