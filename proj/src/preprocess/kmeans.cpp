#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "coatflow/core/error.hpp"
#include "coatflow/core/rng.hpp"
#include "coatflow/preprocess/preprocess.hpp"

namespace coatflow {

namespace {

struct Run {
    std::vector<double> centers;
    std::vector<int> assignment;
    double sse = 0.0;
};

Run lloyd_1d(const std::vector<double>& values, int k, std::uint64_t seed) {
    const std::size_t n = values.size();
    Rng rng(seed);

    // k-means++ seeding on intensities.
    std::vector<double> centers;
    centers.reserve(k);
    centers.push_back(values[rng.next_u64() % n]);
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double ctr : centers) {
                double d = values[i] - ctr;
                best = std::min(best, d * d);
            }
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            // all points coincide with existing centers; place at any value
            centers.push_back(values[rng.next_u64() % n]);
            continue;
        }
        double r = rng.uniform() * total;
        std::size_t pick = n - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= r) {
                pick = i;
                break;
            }
        }
        centers.push_back(values[pick]);
    }

    std::vector<int> assign(n, 0);
    std::vector<double> sums(k), counts(k);
    for (int iter = 0; iter < 100; ++iter) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double bd = std::abs(values[i] - centers[0]);
            for (int c = 1; c < k; ++c) {
                double d = std::abs(values[i] - centers[c]);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            assign[i] = best;
            sums[best] += values[i];
            counts[best] += 1.0;
        }
        double shift = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0.0) {
                double nc = sums[c] / counts[c];
                shift = std::max(shift, std::abs(nc - centers[c]));
                centers[c] = nc;
            }
        }
        if (shift < 1e-4) break;
    }

    Run r;
    r.centers = std::move(centers);
    r.assignment = std::move(assign);
    for (std::size_t i = 0; i < n; ++i) {
        double d = values[i] - r.centers[r.assignment[i]];
        r.sse += d * d;
    }
    return r;
}

} // namespace

Kmeans1dResult kmeans_1d(const std::vector<double>& values, int k, std::uint64_t seed) {
    if (values.empty()) throw InvalidArgument("kmeans_1d: empty input");
    if (k < 1) throw InvalidArgument("kmeans_1d: k must be >= 1");
    std::set<double> distinct(values.begin(), values.end());
    if (static_cast<int>(distinct.size()) < k)
        throw InvalidArgument("kmeans_1d: fewer distinct values than clusters");

    // Seeded restarts; keep the lowest-SSE run.
    constexpr int kRestarts = 8;
    Run best;
    best.sse = std::numeric_limits<double>::infinity();
    for (int r = 0; r < kRestarts; ++r) {
        Run run = lloyd_1d(values, k, Rng::derive(seed, static_cast<std::uint64_t>(r)));
        if (run.sse < best.sse) best = std::move(run);
    }
    return {std::move(best.centers), std::move(best.assignment), best.sse};
}

BinaryMask kmeans_segment(const GrayImage& img, const BinaryMask& domain, int k,
                          std::uint64_t seed) {
    if (img.width != domain.width || img.height != domain.height)
        throw InvalidArgument("kmeans_segment: domain shape mismatch");
    std::vector<double> values;
    std::vector<std::size_t> where;
    values.reserve(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        if (domain.data[i]) {
            values.push_back(img.data[i]);
            where.push_back(i);
        }
    }
    if (values.empty()) throw InvalidArgument("kmeans_segment: empty domain");
    auto res = kmeans_1d(values, k, seed);

    // Coating cluster = the one whose members sit closest to the image
    // center on average (the absorber disk is central, the ring peripheral).
    const double cx = (img.width - 1) / 2.0, cy = (img.height - 1) / 2.0;
    std::vector<double> dist_sum(k, 0.0), counts(k, 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        int c = res.assignment[i];
        std::size_t idx = where[i];
        double x = static_cast<double>(idx % img.width);
        double y = static_cast<double>(idx / img.width);
        dist_sum[c] += std::hypot(x - cx, y - cy);
        counts[c] += 1.0;
    }
    int coating = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
        if (counts[c] == 0.0) continue;
        double mean_dist = dist_sum[c] / counts[c];
        if (mean_dist < best || (mean_dist == best && res.centers[c] < res.centers[coating])) {
            best = mean_dist;
            coating = c;
        }
    }

    BinaryMask out(img.width, img.height);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (res.assignment[i] == coating) out.data[where[i]] = 1;
    return out;
}

BinaryMask kmeans_segment(const GrayImage& img, int k, std::uint64_t seed) {
    BinaryMask all(img.width, img.height, true);
    return kmeans_segment(img, all, k, seed);
}

} // namespace coatflow
