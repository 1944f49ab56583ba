#pragma once

#include <span>
#include <vector>

#include "hassc/grid.hpp"

namespace hassc {

// One positive multiplier per class (empty class included).
struct ClassWeights {
    std::vector<double> values;

    static ClassWeights ones(int num_classes) {
        return {std::vector<double>(static_cast<std::size_t>(num_classes), 1.0)};
    }
    void validate() const;
};

// Loss value with its analytic gradient w.r.t. the input logits.
// `degenerate` flags the defined-as-zero case (no valid targets).
struct LossTerm {
    double loss = 0.0;
    std::vector<double> grad_logits;
    bool degenerate = false;
};

// Class-weighted cross entropy, mean-reduced over the voxels whose target is
// not invalid_id. Gradient covers every logit entry (zero rows at invalid
// targets).
LossTerm weighted_ce(std::span<const double> logits, int num_classes,
                     std::span<const ClassId> targets, const ClassWeights& w, ClassId invalid_id);

// Hardness-weighted cross entropy over N selected voxels, reduced by 1/N.
// Entries with an invalid label contribute zero; N stays the denominator.
LossTerm hvm_loss(std::span<const double> logits, int num_classes,
                  std::span<const ClassId> labels, std::span<const double> weights,
                  ClassId invalid_id);

// Per-step loss breakdown. affinity stays zero under the default plug.
struct LossReport {
    double total = 0.0;
    double wce = 0.0;
    double s_hvm = 0.0;
    double t_hvm = 0.0;
    double distill = 0.0;
    double affinity = 0.0;
    double grad_norm_wce = 0.0;
    double grad_norm_s_hvm = 0.0;
    double grad_norm_t_hvm = 0.0;
    double grad_norm_distill = 0.0;
};

// Fills total = wce + s_hvm + delta * t_hvm + distill + affinity. Throws
// Error naming the offending term when any part is non-finite.
LossReport compose_total(LossReport parts, double delta);

// Extension point for scene-class affinity losses defined by external
// baselines. Implementations add d(loss)/d(probability) into grad_probs.
class AffinityTerm {
  public:
    virtual ~AffinityTerm() = default;
    virtual double eval(const ProbabilityVolume& pred, const SemanticGrid& gt,
                        std::span<double> grad_probs) const = 0;
};

// Default plug: contributes nothing.
class ZeroAffinity final : public AffinityTerm {
  public:
    double eval(const ProbabilityVolume&, const SemanticGrid&, std::span<double>) const override {
        return 0.0;
    }
};

double l2_norm(std::span<const double> v);

}  // namespace hassc
