#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hassc/grid.hpp"

namespace hassc {

// Per-voxel feature vectors on the coarse grid, voxel-major storage.
struct FeatureVolume {
    GridDims dims;
    int feature_dim = 0;
    std::vector<double> values;  // volume() * feature_dim

    std::span<const double> voxel(std::size_t v) const {
        return {values.data() + v * static_cast<std::size_t>(feature_dim),
                static_cast<std::size_t>(feature_dim)};
    }
};

// Small differentiable completion network: a two-layer tanh encoder shared
// per voxel, an affine coarse head producing class logits, and a two-layer
// refinement head applied to features gathered at selected voxels.
//
// Parameters live in one flat vector with fixed layout
//   [W1 DxD, b1 D, W2 DxD, b2 D, Wc CxD, bc C, V1 DxD, c1 D, V2 CxD, c2 C]
// (row-major, output index major). forward_coarse and refine_at record the
// intermediates backward() needs.
class ToyNet {
  public:
    ToyNet(int feature_dim, int num_classes);

    // Symmetric uniform init scaled by 1/sqrt(fan_in), fully seeded.
    static ToyNet init(int feature_dim, int num_classes, std::uint64_t seed);

    int feature_dim() const { return d_; }
    int num_classes() const { return c_; }
    std::size_t param_count() const { return params_.size(); }
    static std::size_t param_count_for(int feature_dim, int num_classes);

    std::span<const double> params() const { return params_; }
    void set_params(std::span<const double> p);

    // Encoder + coarse head + per-voxel softmax. Records intermediates.
    ProbabilityVolume forward_coarse(const FeatureVolume& f);

    // Logits behind the last forward_coarse, voxel-major.
    std::span<const double> coarse_logits() const;

    // Encoder outputs of the last forward_coarse (the fine-grained features
    // the refinement head samples from).
    std::span<const double> encoder_outputs() const;

    // Refinement head on externally supplied feature vectors; pure, does not
    // arm backward.
    std::vector<double> refine(std::span<const double> features, std::size_t count) const;

    // Refinement head on the recorded encoder outputs at the given voxels.
    // Gradients route back through the encoder. Requires a prior forward.
    std::vector<double> refine_at(std::span<const std::size_t> voxel_indices);

    // Reverse-mode gradient of the recorded forward(s) w.r.t. all
    // parameters. grad_coarse_logits has volume*C entries; grad_refine_logits
    // is empty or matches the last refine_at. Throws StateError without a
    // recorded forward.
    std::vector<double> backward(std::span<const double> grad_coarse_logits,
                                 std::span<const double> grad_refine_logits) const;

    // params -= lr * grad. Returns false (and leaves params untouched) when
    // the gradient has non-finite entries.
    bool sgd_step(std::span<const double> grad, double lr);

  private:
    struct Views {
        std::span<const double> w1, b1, w2, b2, wc, bc, v1, c1, v2, c2;
    };
    Views views() const;

    int d_ = 0;
    int c_ = 0;
    std::vector<double> params_;

    // recorded forward state
    bool has_forward_ = false;
    std::size_t fwd_voxels_ = 0;
    std::vector<double> in_;      // input features
    std::vector<double> h1_;      // first encoder activation
    std::vector<double> h2_;      // encoder output
    std::vector<double> logits_;  // coarse logits
    std::vector<std::size_t> refine_idx_;
    std::vector<double> r1_;      // refinement hidden activation
};

}  // namespace hassc
