#include "coatflow/synthgen/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "coatflow/core/error.hpp"
#include "coatflow/core/image_io.hpp"

namespace coatflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t hash2(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
    std::uint64_t h = seed;
    h ^= static_cast<std::uint64_t>(ix) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(iy) * 0xc2b2ae3d27d4eb4fULL;
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
    return static_cast<double>(hash2(ix, iy, seed) >> 11) * 0x1.0p-52 - 1.0; // [-1, 1)
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

} // namespace

double value_noise(double x, double y, double scale, std::uint64_t seed) {
    double u = x / scale, v = y / scale;
    double fu = std::floor(u), fv = std::floor(v);
    auto ix = static_cast<std::int64_t>(fu);
    auto iy = static_cast<std::int64_t>(fv);
    double tx = smooth(u - fu), ty = smooth(v - fv);
    double v00 = lattice(ix, iy, seed), v10 = lattice(ix + 1, iy, seed);
    double v01 = lattice(ix, iy + 1, seed), v11 = lattice(ix + 1, iy + 1, seed);
    return (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
}

const char* to_string(DefectKind kind) {
    switch (kind) {
        case DefectKind::circular_groove: return "circularGroove";
        case DefectKind::dark_blob_mark: return "darkBlobMark";
        case DefectKind::dark_scratch: return "darkScratch";
        case DefectKind::deteriorate: return "deteriorate";
        case DefectKind::groove: return "groove";
        case DefectKind::white_blob_mark: return "whiteBlobMark";
        case DefectKind::white_scratch: return "whiteScratch";
        case DefectKind::white_stain: return "whiteStain";
    }
    return "unknown";
}

std::optional<DefectKind> defect_kind_from_string(const std::string& name) {
    for (int i = 0; i < kDefectKindCount; ++i) {
        auto k = static_cast<DefectKind>(i);
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

GeneratedSample generate_good(const SensorSpec& spec) {
    if (spec.image_size < 16) throw InvalidArgument("generate_good: image_size too small");
    if (!(spec.ring_inner_r > 0.0 && spec.ring_inner_r < spec.ring_outer_r &&
          spec.ring_outer_r <= 1.0))
        throw InvalidArgument("generate_good: require 0 < ring_inner_r < ring_outer_r <= 1");

    const int n = spec.image_size;
    const double half = n / 2.0;
    Rng rng(spec.rng_seed);
    const std::uint64_t seed_bg = rng.next_u64();
    const std::uint64_t seed_ring = rng.next_u64();
    const std::uint64_t seed_grain_a = rng.next_u64();
    const std::uint64_t seed_grain_b = rng.next_u64();
    const std::uint64_t seed_speckle = rng.next_u64();
    const double jx = rng.uniform(-4.0, 4.0);
    const double jy = rng.uniform(-4.0, 4.0);
    const double rscale = rng.uniform(0.97, 1.03);
    const double grad_phi = rng.uniform(0.0, 2.0 * kPi);

    RenderInfo info;
    info.cx = half - 0.5 + jx;
    info.cy = half - 0.5 + jy;
    info.ring_outer_radius = spec.ring_outer_r * half * rscale;
    info.coating_radius = spec.ring_inner_r * half * rscale;

    const double aa = 1.5; // edge ramp width in pixels
    const auto& tex = spec.coating_texture;
    const double gs = spec.illumination.gradient_strength;
    const double vig = spec.illumination.vignette;
    const double gx = std::cos(grad_phi), gy = std::sin(grad_phi);

    RgbImage img(n, n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            double dist = std::hypot(x - info.cx, y - info.cy);
            double in_outer = std::clamp((info.ring_outer_radius - dist) / aa + 0.5, 0.0, 1.0);
            double in_inner = std::clamp((info.coating_radius - dist) / aa + 0.5, 0.0, 1.0);
            double w_coat = in_inner;
            double w_ring = in_outer - in_inner;
            double w_bg = 1.0 - in_outer;

            double bg = 36.0 + 7.0 * value_noise(x, y, 13.0, seed_bg) +
                        2.0 * lattice(x, y, seed_speckle);
            double ring = 224.0 + 5.0 * value_noise(x, y, 11.0, seed_ring);
            double grain = 0.0;
            if (tex.grain_amplitude > 0.0) {
                grain = tex.grain_amplitude *
                        (0.7 * value_noise(x, y, tex.grain_scale, seed_grain_a) +
                         0.3 * value_noise(x, y, tex.grain_scale * 0.5, seed_grain_b));
            }
            double coat = tex.base_level + grain;
            double v = w_bg * bg + w_ring * ring + w_coat * coat;

            // illumination: linear tilt plus radial vignette
            v += gs * ((x - info.cx) * gx + (y - info.cy) * gy) / half;
            v *= 1.0 - vig * (dist / half) * (dist / half);

            auto q = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            img.at(x, y, 0) = q;
            img.at(x, y, 1) = q;
            img.at(x, y, 2) = q;
        }
    }

    GeneratedSample s;
    s.image = std::move(img);
    s.label = Label::good;
    s.defect_mask = BinaryMask(n, n, false);
    s.sensor_spec = spec;
    s.info = info;
    return s;
}

BinaryMask coating_truth(const GeneratedSample& sample) {
    const int n = sample.image.width;
    BinaryMask m(n, sample.image.height);
    for (int y = 0; y < sample.image.height; ++y)
        for (int x = 0; x < n; ++x)
            if (std::hypot(x - sample.info.cx, y - sample.info.cy) <= sample.info.coating_radius)
                m.set(x, y, true);
    return m;
}

namespace {

struct Pt {
    double x, y;
};

double dist_to_segment(double px, double py, Pt a, Pt b) {
    double vx = b.x - a.x, vy = b.y - a.y;
    double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((px - a.x) * vx + (py - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (a.x + t * vx), py - (a.y + t * vy));
}

// Fills alpha for a thick anti-aliased polyline.
void rasterize_polyline(std::vector<double>& alpha, int n, const std::vector<Pt>& pts,
                        double width) {
    const double r = width / 2.0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                d = std::min(d, dist_to_segment(x, y, pts[i], pts[i + 1]));
            double a = std::clamp(r + 0.5 - d, 0.0, 1.0);
            auto idx = static_cast<std::size_t>(y) * n + x;
            alpha[idx] = std::max(alpha[idx], a);
        }
    }
}

} // namespace

DefectSpec random_defect_spec(DefectKind kind, Rng& rng) {
    DefectSpec d;
    d.kind = kind;
    switch (kind) {
        case DefectKind::circular_groove:
            d.r_mid = rng.uniform(0.35, 0.72);
            d.width = rng.uniform(3.5, 6.5);
            d.arc_span = rng.uniform(2.4, 2.0 * kPi);
            d.intensity_delta = -rng.uniform(28.0, 45.0);
            break;
        case DefectKind::dark_blob_mark:
            d.radius = rng.uniform(7.0, 14.0);
            d.intensity_delta = -rng.uniform(30.0, 55.0);
            break;
        case DefectKind::dark_scratch:
            d.length = rng.uniform(45.0, 90.0);
            d.width = rng.uniform(1.6, 2.6);
            d.intensity_delta = -rng.uniform(35.0, 60.0);
            break;
        case DefectKind::deteriorate:
            d.area_fraction = rng.uniform(0.05, 0.10);
            d.intensity_delta = -rng.uniform(20.0, 32.0);
            break;
        case DefectKind::groove:
            d.length = rng.uniform(60.0, 110.0);
            d.width = rng.uniform(5.0, 9.0);
            d.intensity_delta = -rng.uniform(24.0, 40.0);
            break;
        case DefectKind::white_blob_mark:
            d.radius = rng.uniform(7.0, 14.0);
            d.intensity_delta = rng.uniform(30.0, 48.0);
            break;
        case DefectKind::white_scratch:
            d.length = rng.uniform(45.0, 90.0);
            d.width = rng.uniform(1.6, 2.6);
            d.intensity_delta = rng.uniform(35.0, 55.0);
            break;
        case DefectKind::white_stain:
            d.area_fraction = rng.uniform(0.03, 0.06);
            d.intensity_delta = rng.uniform(22.0, 36.0);
            break;
    }
    return d;
}

GeneratedSample inject_defect(const GeneratedSample& sample, const DefectSpec& defect,
                              std::uint64_t seed) {
    if (sample.label != Label::good)
        throw InvalidArgument("inject_defect: sample must be good");
    if (defect.intensity_delta == 0.0)
        throw InvalidArgument("inject_defect: degenerate defect (zero intensity delta)");
    const char* name = to_string(defect.kind);
    if ((name[0] == 'd' && name[1] == 'a' && defect.intensity_delta >= 0.0) ||
        (name[0] == 'w' && defect.intensity_delta <= 0.0))
        throw InvalidArgument("inject_defect: intensity delta sign does not match kind");

    const int n = sample.image.width;
    const double cx = sample.info.cx, cy = sample.info.cy;
    const double rc = sample.info.coating_radius;
    const double inset = rc - 2.0; // keep footprints clear of the ring blend
    Rng rng(seed);

    std::vector<double> alpha(static_cast<std::size_t>(n) * n, 0.0);
    switch (defect.kind) {
        case DefectKind::dark_blob_mark:
        case DefectKind::white_blob_mark: {
            double rr = defect.radius;
            double pr = std::max(0.0, inset - rr - 2.0);
            double ang = rng.uniform(0.0, 2.0 * kPi);
            double rad = std::sqrt(rng.uniform()) * pr;
            double bx = cx + rad * std::cos(ang), by = cy + rad * std::sin(ang);
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) {
                    double d = std::hypot(x - bx, y - by);
                    alpha[static_cast<std::size_t>(y) * n + x] =
                        std::clamp((rr - d) / 1.5 + 0.5, 0.0, 1.0);
                }
            break;
        }
        case DefectKind::dark_scratch:
        case DefectKind::white_scratch:
        case DefectKind::groove: {
            int segments = defect.kind == DefectKind::groove ? 1 : rng.uniform_int(2, 3);
            double seg_len = defect.length / segments;
            double ang = rng.uniform(0.0, 2.0 * kPi);
            double sr = std::sqrt(rng.uniform()) * std::max(0.0, inset - 8.0) * 0.6;
            double sa = rng.uniform(0.0, 2.0 * kPi);
            std::vector<Pt> pts{{cx + sr * std::cos(sa), cy + sr * std::sin(sa)}};
            for (int s = 0; s < segments; ++s) {
                double a2 = ang + rng.uniform(-0.45, 0.45);
                Pt nxt{pts.back().x + seg_len * std::cos(a2), pts.back().y + seg_len * std::sin(a2)};
                // keep endpoints inside the coating
                double d = std::hypot(nxt.x - cx, nxt.y - cy);
                if (d > inset - 3.0) {
                    double f = (inset - 3.0) / d;
                    nxt = {cx + (nxt.x - cx) * f, cy + (nxt.y - cy) * f};
                }
                pts.push_back(nxt);
                ang = a2;
            }
            rasterize_polyline(alpha, n, pts, defect.width);
            break;
        }
        case DefectKind::circular_groove: {
            double gx = cx + rng.uniform(-0.08, 0.08) * rc;
            double gy = cy + rng.uniform(-0.08, 0.08) * rc;
            double rm = defect.r_mid * rc;
            double hw = defect.width / 2.0;
            double a0 = rng.uniform(0.0, 2.0 * kPi);
            double span = defect.arc_span;
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) {
                    double d = std::hypot(x - gx, y - gy);
                    double band = std::clamp(hw + 0.5 - std::abs(d - rm), 0.0, 1.0);
                    if (band <= 0.0) continue;
                    double rel = std::fmod(std::atan2(y - gy, x - gx) - a0 + 4.0 * kPi, 2.0 * kPi);
                    if (rel <= span)
                        alpha[static_cast<std::size_t>(y) * n + x] = band;
                }
            break;
        }
        case DefectKind::deteriorate:
        case DefectKind::white_stain: {
            double ext = rng.uniform(0.30, 0.50) * rc;
            double ang = rng.uniform(0.0, 2.0 * kPi);
            double rad = std::sqrt(rng.uniform()) * std::max(0.0, inset - ext);
            double px = cx + rad * std::cos(ang), py = cy + rad * std::sin(ang);
            std::uint64_t nseed = rng.next_u64();
            // raw field: value noise with radial falloff
            std::vector<double> field(alpha.size(), 0.0);
            std::vector<double> inside;
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) {
                    double dc = std::hypot(x - px, y - py);
                    if (dc > ext) continue;
                    double g = std::clamp((ext - dc) / (0.4 * ext), 0.0, 1.0);
                    double v = (0.5 + 0.5 * value_noise(x, y, ext * 0.45, nseed)) * g;
                    field[static_cast<std::size_t>(y) * n + x] = v;
                    if (std::hypot(x - cx, y - cy) <= inset) inside.push_back(v);
                }
            if (inside.empty()) break;
            double coat_area = kPi * rc * rc;
            auto want = static_cast<std::size_t>(defect.area_fraction * coat_area);
            want = std::min(std::max<std::size_t>(want, 8), inside.size());
            std::sort(inside.begin(), inside.end());
            double tau = inside[inside.size() - want];
            if (tau <= 0.0) tau = 1e-6;
            for (std::size_t i = 0; i < alpha.size(); ++i)
                alpha[i] = std::clamp((field[i] - tau) / 0.08 + 0.5, 0.0, 1.0);
            break;
        }
    }

    // clip to the coating disk
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (std::hypot(x - cx, y - cy) > inset)
                alpha[static_cast<std::size_t>(y) * n + x] = 0.0;

    GeneratedSample out = sample;
    out.label = Label::bad;
    out.defect_spec = defect;
    out.defect_mask = BinaryMask(n, n, false);
    bool any = false;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            double a = alpha[static_cast<std::size_t>(y) * n + x];
            if (a <= 0.0) continue;
            for (int c = 0; c < 3; ++c) {
                double v = out.image.at(x, y, c) + a * defect.intensity_delta;
                out.image.at(x, y, c) =
                    static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
            if (a >= 0.5) {
                out.defect_mask.set(x, y, true);
                any = true;
            }
        }
    }
    if (!any)
        throw InvalidArgument("inject_defect: defect footprint falls outside the coating");
    return out;
}

DatasetManifest generate_dataset(int n_good, int n_bad, const std::filesystem::path& out_dir,
                                 std::uint64_t seed) {
    if (n_good < 0 || n_bad < 0) throw InvalidArgument("generate_dataset: negative counts");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir / "good", ec);
    fs::create_directories(out_dir / "bad", ec);
    fs::create_directories(out_dir / "masks", ec);

    DatasetManifest m;
    m.base_dir = out_dir;
    char buf[64];
    for (int i = 0; i < n_good; ++i) {
        SensorSpec spec;
        spec.rng_seed = Rng::derive(seed, static_cast<std::uint64_t>(i));
        GeneratedSample s = generate_good(spec);
        std::snprintf(buf, sizeof buf, "good/good_%04d.ppm", i);
        save_image(s.image, out_dir / buf);
        m.entries.push_back({buf, Label::good, ""});
    }
    for (int j = 0; j < n_bad; ++j) {
        SensorSpec spec;
        std::uint64_t s0 = Rng::derive(seed, static_cast<std::uint64_t>(n_good + j));
        spec.rng_seed = s0;
        GeneratedSample good = generate_good(spec);
        auto kind = static_cast<DefectKind>(j % kDefectKindCount);
        Rng drng(Rng::derive(s0, 1));
        DefectSpec dspec = random_defect_spec(kind, drng);
        GeneratedSample bad = inject_defect(good, dspec, Rng::derive(s0, 2));
        std::snprintf(buf, sizeof buf, "bad/bad_%04d_%s.ppm", j, to_string(kind));
        save_image(bad.image, out_dir / buf);
        std::string img_rel = buf;
        std::snprintf(buf, sizeof buf, "masks/bad_%04d_%s.pgm", j, to_string(kind));
        save_mask(bad.defect_mask, out_dir / buf);
        m.entries.push_back({img_rel, Label::bad, buf});
    }
    save_manifest(m, out_dir / "manifest.json");
    return m;
}

} // namespace coatflow
