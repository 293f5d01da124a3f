#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coatflow/core/image.hpp"
#include "coatflow/features/features.hpp"

namespace coatflow {

/// Architecture of one per-scale flow stack: `depth` affine coupling layers,
/// each preceded by a fixed seeded channel permutation. A coupling maps the
/// second half of the channels as y_B = x_B * exp(s) + t where (s_raw, t)
/// come from a two-layer tanh perceptron on the first half and
/// s = clamp * tanh(s_raw / clamp).
struct StackConfig {
    int dim = kFeatureDim;
    int depth = 8;
    int hidden = 32;
    double clamp = 2.0;
};

class FlowStack {
public:
    FlowStack() = default;
    /// Random tanh-layer weights, zero output layer: the initial stack is an
    /// exact identity (up to permutations).
    FlowStack(const StackConfig& cfg, std::uint64_t seed);

    const StackConfig& config() const { return cfg_; }
    int split_a() const { return (cfg_.dim + 1) / 2; }
    int split_b() const { return cfg_.dim / 2; }
    int params_per_coupling() const;
    int param_count() const { return cfg_.depth * params_per_coupling(); }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<std::vector<int>>& permutations() const { return perms_; }
    void set_permutations(std::vector<std::vector<int>> perms);

    /// z = F(f); returns log|det dF/df|. Throws on non-finite input.
    double forward(std::span<const double> f, std::span<double> z) const;

    /// f = F^-1(z).
    void inverse(std::span<const double> z, std::span<double> f) const;

    /// log p(f) = sum_d log N(z_d; 0, 1) + logdet.
    double log_likelihood(std::span<const double> f) const;

    /// Mean NLL over the batch (n rows of dim) and its exact gradient with
    /// respect to all parameters (accumulated into grad, which is resized
    /// and zeroed). Reverse-mode through the coupling algebra.
    double nll_gradient(const std::vector<double>& batch, int n, std::vector<double>& grad) const;

    /// Mean NLL over a batch without gradients.
    double mean_nll(const std::vector<double>& batch, int n) const;

private:
    struct CouplingView {
        const double* w1; // hidden x A
        const double* b1; // hidden
        const double* w2; // 2B x hidden
        const double* b2; // 2B
    };
    CouplingView coupling(int layer) const;

    StackConfig cfg_;
    std::vector<std::vector<int>> perms_;
    std::vector<double> params_;
};

/// Trained per-scale flow ensemble plus everything needed to score a new
/// image: whitening statistics, scale weights, architecture and the
/// training history.
struct FlowModel {
    std::vector<FlowStack> stacks;           // one per pyramid level
    std::vector<double> lambda;              // per-level weights, sum 1
    FeatureNormStats norm_stats;
    FeatureConfig feature_config;
    std::vector<std::vector<double>> training_log; // per level: NLL, entry 0 = before training
};

struct FlowTrainConfig {
    int epochs = 100;
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    int batch = 256;
    int depth = 8;
    int hidden = 32;
    double clamp = 2.0;
    std::uint64_t seed = 1;
    std::vector<double> lambda; // empty = uniform
};

/// Maximum-likelihood training on the valid cells of good-image pyramids,
/// per level, with Adam and seeded shuffling. Parameters are rounded
/// through float32 at the end so a saved model replays bit-exactly.
FlowModel train_flow(const std::vector<FeaturePyramid>& pyramids, const FlowTrainConfig& cfg);

/// Raw-feature-space mean NLL of rows under one level's stack (includes the
/// whitening Jacobian term sum(log std)).
double model_mean_nll(const FlowModel& model, int level, const std::vector<double>& rows, int n);

/// Per-pixel anomaly map. Each level's per-cell -log p grid is bilinearly
/// upsampled to crop resolution; the combined map is sum_i lambda_i * map_i.
/// Off-coating cells carry score 0 and pixels outside the coating are
/// masked out.
struct AnomalyMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;
    BinaryMask coating;
    std::vector<std::vector<double>> per_level; // kept when requested
};

AnomalyMap anomaly_map(const FlowModel& model, const FeaturePyramid& pyramid,
                       const BinaryMask& coating, bool keep_levels = false);

/// Recombines stored per-level maps with new weights (Eq. 7 is linear in
/// lambda).
std::vector<double> combine_levels(const AnomalyMap& map, const std::vector<double>& lambda);

/// Peak of the 3x3-mean-smoothed map over coating pixels.
double image_score(const AnomalyMap& map);
double image_score_of(const std::vector<double>& data, int width, int height,
                      const BinaryMask& coating);

} // namespace coatflow
