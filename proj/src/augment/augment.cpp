#include "coatflow/augment/augment.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "coatflow/core/error.hpp"
#include "coatflow/core/image_io.hpp"
#include "coatflow/core/rng.hpp"

namespace coatflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Rgb {
    double r, g, b;
};

// Hue in [0,360), s and v in [0,1].
void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    r /= 255.0;
    g /= 255.0;
    b /= 255.0;
    double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    double d = mx - mn;
    v = mx;
    s = mx > 0.0 ? d / mx : 0.0;
    if (d <= 0.0) {
        h = 0.0;
        return;
    }
    if (mx == r) {
        h = 60.0 * std::fmod((g - b) / d, 6.0);
    } else if (mx == g) {
        h = 60.0 * ((b - r) / d + 2.0);
    } else {
        h = 60.0 * ((r - g) / d + 4.0);
    }
    if (h < 0.0) h += 360.0;
}

Rgb hsv_to_rgb(double h, double s, double v) {
    double c = v * s;
    double hp = h / 60.0;
    double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else { r = c; b = x; }
    double m = v - c;
    return {(r + m) * 255.0, (g + m) * 255.0, (b + m) * 255.0};
}

// Mirror-without-repeat (reflect-101) index.
int reflect(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

double sample_channel(const std::vector<double>& plane, int w, int h, double x, double y) {
    int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
    double fx = x - x0, fy = y - y0;
    int xa = reflect(x0, w), xb = reflect(x0 + 1, w);
    int ya = reflect(y0, h), yb = reflect(y0 + 1, h);
    double top = (1 - fx) * plane[static_cast<std::size_t>(ya) * w + xa] +
                 fx * plane[static_cast<std::size_t>(ya) * w + xb];
    double bot = (1 - fx) * plane[static_cast<std::size_t>(yb) * w + xa] +
                 fx * plane[static_cast<std::size_t>(yb) * w + xb];
    return (1 - fy) * top + fy * bot;
}

} // namespace

AugmentPolicy AugmentPolicy::offline(std::uint64_t seed) {
    AugmentPolicy p;
    p.flip_horizontal = true;
    p.flip_vertical = true;
    p.rotation_deg = 45.0;
    p.hue_shift = 25.0;
    p.saturation_pct = 30.0;
    p.brightness_pct = 25.0;
    p.exposure_pct = 5.0;
    p.seed = seed;
    return p;
}

AugmentPolicy AugmentPolicy::train(std::uint64_t seed) {
    AugmentPolicy p;
    p.rotation_deg = 15.0;
    p.translate_px = 10.0;
    p.brightness_pct = 25.0;
    p.contrast_pct = 25.0;
    p.seed = seed;
    return p;
}

RgbImage augment(const RgbImage& img, const AugmentPolicy& policy, std::uint64_t index) {
    Rng rng(Rng::derive(policy.seed, index));
    // Fixed draw order keeps streams aligned across policies.
    const bool do_fh = rng.bernoulli() && policy.flip_horizontal;
    const bool do_fv = rng.bernoulli() && policy.flip_vertical;
    const double angle = rng.uniform(-policy.rotation_deg, policy.rotation_deg) * kPi / 180.0;
    const double tx = std::round(rng.uniform(-policy.translate_px, policy.translate_px));
    const double ty = std::round(rng.uniform(-policy.translate_px, policy.translate_px));
    const double hue = rng.uniform(-policy.hue_shift, policy.hue_shift);
    const double sat = 1.0 + rng.uniform(-policy.saturation_pct, policy.saturation_pct) / 100.0;
    const double bright = 255.0 * rng.uniform(-policy.brightness_pct, policy.brightness_pct) / 100.0;
    const double gain = 1.0 + rng.uniform(-policy.exposure_pct, policy.exposure_pct) / 100.0;
    const double contrast = 1.0 + rng.uniform(-policy.contrast_pct, policy.contrast_pct) / 100.0;

    const int w = img.width, h = img.height;
    std::vector<double> planes[3];
    for (int c = 0; c < 3; ++c) {
        planes[c].resize(static_cast<std::size_t>(w) * h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int sx = do_fh ? w - 1 - x : x;
                int sy = do_fv ? h - 1 - y : y;
                planes[c][static_cast<std::size_t>(y) * w + x] = img.at(sx, sy, c);
            }
    }

    const bool warp = angle != 0.0 || tx != 0.0 || ty != 0.0;
    RgbImage out(w, h);
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    const double ca = std::cos(angle), sa = std::sin(angle);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double rv[3];
            if (warp) {
                // inverse map: undo translation, then rotate back about center
                double ux = x - tx - cx, uy = y - ty - cy;
                double sx2 = ca * ux + sa * uy + cx;
                double sy2 = -sa * ux + ca * uy + cy;
                for (int c = 0; c < 3; ++c) rv[c] = sample_channel(planes[c], w, h, sx2, sy2);
            } else {
                for (int c = 0; c < 3; ++c)
                    rv[c] = planes[c][static_cast<std::size_t>(y) * w + x];
            }
            if (hue != 0.0 || sat != 1.0) {
                double hh, ss, vv;
                rgb_to_hsv(rv[0], rv[1], rv[2], hh, ss, vv);
                hh = std::fmod(hh + hue + 360.0, 360.0);
                ss = std::clamp(ss * sat, 0.0, 1.0);
                Rgb c = hsv_to_rgb(hh, ss, vv);
                rv[0] = c.r;
                rv[1] = c.g;
                rv[2] = c.b;
            }
            for (int c = 0; c < 3; ++c) {
                double v = rv[c] + bright;
                v *= gain;
                v = (v - 127.5) * contrast + 127.5;
                out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return out;
}

DatasetManifest expand_dataset(const DatasetManifest& manifest, const AugmentPolicy& policy,
                               int copies, const std::filesystem::path& out_dir) {
    if (manifest.entries.empty()) throw InvalidArgument("expand_dataset: empty manifest");
    if (copies < 0) throw InvalidArgument("expand_dataset: negative copy count");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    DatasetManifest out = manifest;
    out.base_dir = out_dir;
    // Source entries keep their original location.
    for (auto& e : out.entries) {
        e.path = manifest.resolve(e.path).string();
        if (!e.mask_path.empty()) e.mask_path = manifest.resolve(e.mask_path).string();
    }

    std::uint64_t counter = 0;
    for (const auto& e : manifest.entries) {
        if (e.label != Label::good) continue;
        RgbImage img = load_image(manifest.resolve(e.path));
        std::string stem = std::filesystem::path(e.path).stem().string();
        for (int k = 0; k < copies; ++k) {
            RgbImage aug = augment(img, policy, counter++);
            char buf[32];
            std::snprintf(buf, sizeof buf, "_aug%03d.ppm", k);
            std::string name = stem + buf;
            save_image(aug, out_dir / name);
            out.entries.push_back({name, Label::good, ""});
        }
    }
    return out;
}

} // namespace coatflow
