#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "coatflow/core/image.hpp"
#include "coatflow/core/manifest.hpp"
#include "coatflow/core/rng.hpp"

namespace coatflow {

/// The eight defect families.
enum class DefectKind {
    circular_groove,
    dark_blob_mark,
    dark_scratch,
    deteriorate,
    groove,
    white_blob_mark,
    white_scratch,
    white_stain,
};
constexpr int kDefectKindCount = 8;

const char* to_string(DefectKind kind);
std::optional<DefectKind> defect_kind_from_string(const std::string& name);

/// Parameters of the procedural sensor renderer. Radii are fractions of the
/// image half-size.
struct SensorSpec {
    int image_size = 256;
    double ring_outer_r = 0.86;
    double ring_inner_r = 0.64;
    struct Texture {
        double base_level = 118.0;
        double grain_amplitude = 10.0;
        double grain_scale = 7.0;
    } coating_texture;
    struct Illumination {
        double gradient_strength = 10.0; // additive tilt at the rim, in levels
        double vignette = 0.10;          // relative darkening at the rim
    } illumination;
    std::uint64_t rng_seed = 0;
};

/// Defect geometry. Fields are interpreted per kind: length/width for
/// scratches and the straight groove, radius for blobs, annulus radii
/// (fractions of the coating radius) for the circular groove, area_fraction
/// for stain/deterioration patches.
struct DefectSpec {
    DefectKind kind = DefectKind::dark_blob_mark;
    double intensity_delta = 0.0; // dark kinds negative, white kinds positive
    double length = 0.0;
    double width = 0.0;
    double radius = 0.0;
    double r_mid = 0.0;       // circular groove: band center radius fraction
    double arc_span = 0.0;    // circular groove: radians
    double area_fraction = 0.0;
};

/// Actual render geometry in pixels (after seeded jitter).
struct RenderInfo {
    double cx = 0.0;
    double cy = 0.0;
    double coating_radius = 0.0;
    double ring_outer_radius = 0.0;
};

struct GeneratedSample {
    RgbImage image;
    Label label = Label::good;
    BinaryMask defect_mask; // empty (all zero) for good samples
    SensorSpec sensor_spec;
    std::optional<DefectSpec> defect_spec;
    RenderInfo info;
};

/// Seeded band-limited lattice noise in [-1, 1].
double value_noise(double x, double y, double scale, std::uint64_t seed);

/// Renders a defect-free sensor image: noisy background, bright metal ring,
/// coating disk with value-noise grain, illumination gradient and vignette.
/// Deterministic per spec.rng_seed.
GeneratedSample generate_good(const SensorSpec& spec);

/// Ground-truth coating mask of a rendered sample (exact disk).
BinaryMask coating_truth(const GeneratedSample& sample);

/// Composites a defect into the coating region and returns a bad sample
/// with the exact footprint mask. Placement randomness comes from seed.
GeneratedSample inject_defect(const GeneratedSample& sample, const DefectSpec& defect,
                              std::uint64_t seed);

/// Defect parameters drawn from per-kind default ranges.
DefectSpec random_defect_spec(DefectKind kind, Rng& rng);

/// Writes n_good + n_bad samples (kinds round-robin over the 8 families)
/// plus masks and manifest.json under out_dir. Returns the manifest.
DatasetManifest generate_dataset(int n_good, int n_bad, const std::filesystem::path& out_dir,
                                 std::uint64_t seed);

} // namespace coatflow
