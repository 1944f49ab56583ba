#include "hassc/distill.hpp"

#include <algorithm>
#include <cmath>

#include "hassc/metrics.hpp"

namespace hassc {

void DistillConfig::validate() const {
    if (lambda < 0.0) throw ConfigError("distillation weight lambda must be >= 0");
    if (delta < 0.0) throw ConfigError("trade-off delta must be >= 0");
    if (!(gamma_cap > 0.0 && gamma_cap < 1.0)) throw ConfigError("gamma cap must lie in (0, 1)");
}

double ema_gamma(std::uint64_t step, double cap) {
    return std::min(1.0 - 1.0 / static_cast<double>(step + 1), cap);
}

void ema_update(TeacherState& ts, std::span<const double> student_params, double gamma_cap) {
    if (ts.params.size() != student_params.size()) {
        throw ShapeError("teacher/student parameter lengths differ");
    }
    const double gamma = ema_gamma(ts.step, gamma_cap);
    for (std::size_t i = 0; i < ts.params.size(); ++i) {
        ts.params[i] = gamma * ts.params[i] + (1.0 - gamma) * student_params[i];
    }
    ++ts.step;
}

double miou_scale(const ProbabilityVolume& teacher_pred, const SemanticGrid& gt, bool* flagged) {
    if (!same_counts(teacher_pred.dims, gt.dims)) {
        throw ShapeError("teacher prediction and gt dims differ");
    }
    const SemanticGrid pred = argmax_labels(teacher_pred, gt.empty_id, gt.invalid_id);
    ConfusionMatrix cm(gt.num_classes);
    RangeCrop full{"full", gt.dims.x * gt.dims.voxel_size, gt.dims.y * gt.dims.voxel_size,
                   gt.dims.z * gt.dims.voxel_size};
    accumulate(cm, pred, gt, full);
    return miou(cm, gt.empty_id, /*include_empty=*/false, flagged);
}

DistillResult distill_loss(const ProbabilityVolume& student, const ProbabilityVolume& teacher,
                           double mu, const DistillConfig& cfg, const SemanticGrid* valid_from) {
    cfg.validate();
    if (!same_counts(student.dims, teacher.dims) || student.num_classes != teacher.num_classes) {
        throw ShapeError("student and teacher volumes differ in shape");
    }
    if (valid_from && !same_counts(student.dims, valid_from->dims)) {
        throw ShapeError("validity grid dims differ from prediction dims");
    }

    const std::size_t vol = student.dims.volume();
    const int C = student.num_classes;

    DistillResult out;
    out.grad_logits.assign(vol * static_cast<std::size_t>(C), 0.0);
    out.grad_probs.assign(vol * static_cast<std::size_t>(C), 0.0);

    std::size_t valid = 0;
    for (std::size_t v = 0; v < vol; ++v) {
        if (valid_from && valid_from->labels[v] == valid_from->invalid_id) continue;
        ++valid;
    }
    if (valid == 0) {
        out.flagged = true;
        return out;
    }

    const double scale = cfg.lambda * std::exp(mu) / static_cast<double>(valid);
    double kl_sum = 0.0;
    for (std::size_t v = 0; v < vol; ++v) {
        if (valid_from && valid_from->labels[v] == valid_from->invalid_id) continue;
        const double* t = teacher.probs.data() + v * C;
        const double* s = student.probs.data() + v * C;
        double* gl = out.grad_logits.data() + v * C;
        double* gp = out.grad_probs.data() + v * C;
        double t_sum = 0.0;
        for (int c = 0; c < C; ++c) {
            const double tc = std::max(t[c], kProbFloor);
            const double sc = std::max(s[c], kProbFloor);
            kl_sum += tc * (std::log(tc) - std::log(sc));
            t_sum += tc;
            gp[c] = (s[c] > kProbFloor) ? -scale * tc / s[c] : 0.0;
        }
        for (int c = 0; c < C; ++c) {
            const double tc = std::max(t[c], kProbFloor);
            gl[c] = scale * (s[c] * t_sum - tc);
        }
    }
    out.loss = scale * kl_sum;
    return out;
}

TeacherHvmResult teacher_hvm_on_selection(const SelectionSet& selection,
                                          const ProbabilityVolume& student_final,
                                          const SemanticGrid& gt, const GridDims& coarse_dims) {
    if (!same_counts(student_final.dims, gt.dims)) {
        throw ShapeError("student final prediction and gt dims differ");
    }
    const int C = student_final.num_classes;

    TeacherHvmResult out;
    out.selection = selection;
    out.grad_final_probs.assign(student_final.probs.size(), 0.0);
    if (selection.coords.empty()) {
        out.flagged = true;
        return out;
    }

    const double inv = 1.0 / static_cast<double>(selection.coords.size());
    bool any_valid = false;
    double loss = 0.0;
    for (std::size_t n = 0; n < selection.coords.size(); ++n) {
        const VoxelCoord full = center_full_coord(selection.coords[n], coarse_dims, gt.dims);
        const std::size_t v = linear_index(full, gt.dims);
        const ClassId y = gt.labels[v];
        if (y == gt.invalid_id) continue;
        any_valid = true;
        const double p = std::max(student_final.probs[v * C + y], kProbFloor);
        loss += selection.weights[n] * (-std::log(p));
        if (student_final.probs[v * C + y] > kProbFloor) {
            out.grad_final_probs[v * C + y] -= inv * selection.weights[n] / p;
        }
    }
    out.loss = loss * inv;
    out.flagged = !any_valid;
    return out;
}

TeacherHvmResult teacher_guided_hvm(const HardnessField& teacher_hardness,
                                    const ProbabilityVolume& student_final,
                                    const SemanticGrid& gt, const SelectionConfig& sel_cfg,
                                    const LgaConfig& lga_cfg, std::mt19937_64& rng) {
    SelectionSet sel = select_hard_voxels(teacher_hardness, sel_cfg, rng);
    sel = attach_local_weights(std::move(sel), gt, lga_cfg, teacher_hardness.dims);
    return teacher_hvm_on_selection(sel, student_final, gt, teacher_hardness.dims);
}

}  // namespace hassc
