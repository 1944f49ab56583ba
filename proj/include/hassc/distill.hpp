#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hassc/grid.hpp"
#include "hassc/hardness.hpp"
#include "hassc/selection.hpp"

namespace hassc {

// Probability floor applied before log ratios in the distillation loss.
inline constexpr double kProbFloor = 1e-12;

// Parameter mirror updated by exponential moving average of the student.
struct TeacherState {
    std::vector<double> params;
    std::uint64_t step = 0;
};

struct DistillConfig {
    double lambda = 48.0;    // distillation weight
    double delta = 0.1;      // teacher-guided loss trade-off
    double gamma_cap = 0.99;

    void validate() const;
};

// min(1 - 1/(t+1), cap), evaluated at the pre-update step counter, so the
// first update copies the student outright.
double ema_gamma(std::uint64_t step, double cap = 0.99);

// theta <- gamma * theta + (1 - gamma) * student, then advances the counter.
void ema_update(TeacherState& ts, std::span<const double> student_params,
                double gamma_cap = 0.99);

// Mean IoU of argmax(teacher_pred) against gt over semantic classes (empty
// excluded, invalid masked, classes absent from both sides skipped).
double miou_scale(const ProbabilityVolume& teacher_pred, const SemanticGrid& gt,
                  bool* flagged = nullptr);

struct DistillResult {
    double loss = 0.0;
    // d loss / d student logits under the per-voxel softmax parameterization.
    std::vector<double> grad_logits;
    // d loss / d student probabilities, for chaining through interpolation.
    std::vector<double> grad_probs;
    bool flagged = false;
};

// lambda * e^mu * mean KL(teacher || student) over valid voxels. The teacher
// volume is a constant. valid_from, when given, masks voxels whose gt label
// is invalid; otherwise every voxel counts.
DistillResult distill_loss(const ProbabilityVolume& student, const ProbabilityVolume& teacher,
                           double mu, const DistillConfig& cfg,
                           const SemanticGrid* valid_from = nullptr);

struct TeacherHvmResult {
    double loss = 0.0;
    // d loss / d student final probabilities (full-resolution volume).
    std::vector<double> grad_final_probs;
    SelectionSet selection;  // teacher-chosen voxels with weights attached
    bool flagged = false;
};

// Hardness-weighted cross entropy on the student's final prediction at the
// voxels a teacher-side selection picks. The trade-off delta is applied by
// compose_total, not here.
TeacherHvmResult teacher_guided_hvm(const HardnessField& teacher_hardness,
                                    const ProbabilityVolume& student_final,
                                    const SemanticGrid& gt, const SelectionConfig& sel_cfg,
                                    const LgaConfig& lga_cfg, std::mt19937_64& rng);

// Same loss on a selection produced elsewhere (teacher_guided_hvm = select +
// attach + this). Exposed so callers can replay a fixed selection.
TeacherHvmResult teacher_hvm_on_selection(const SelectionSet& selection,
                                          const ProbabilityVolume& student_final,
                                          const SemanticGrid& gt, const GridDims& coarse_dims);

}  // namespace hassc
