#include "hassc/losses.hpp"

#include <cmath>
#include <string>

#include "hassc/softmax.hpp"

namespace hassc {

void ClassWeights::validate() const {
    if (values.empty()) throw ConfigError("class weights are empty");
    for (const double w : values) {
        if (!(w > 0.0)) throw ConfigError("class weights must be positive");
    }
}

LossTerm weighted_ce(std::span<const double> logits, int num_classes,
                     std::span<const ClassId> targets, const ClassWeights& w, ClassId invalid_id) {
    if (static_cast<int>(w.values.size()) != num_classes) {
        throw ShapeError("class weight count != number of classes");
    }
    if (logits.size() != targets.size() * static_cast<std::size_t>(num_classes)) {
        throw ShapeError("logit storage does not match target count");
    }
    w.validate();

    LossTerm out;
    out.grad_logits.assign(logits.size(), 0.0);

    std::size_t valid = 0;
    for (const ClassId t : targets) {
        if (t != invalid_id) ++valid;
    }
    if (valid == 0) {
        out.degenerate = true;
        return out;
    }

    const double inv = 1.0 / static_cast<double>(valid);
    std::vector<double> lsm(num_classes);
    double loss = 0.0;
    for (std::size_t v = 0; v < targets.size(); ++v) {
        const ClassId t = targets[v];
        if (t == invalid_id) continue;
        const auto row = logits.subspan(v * num_classes, num_classes);
        log_softmax(row, lsm);
        const double wt = w.values[t];
        loss += wt * (-lsm[t]);
        double* g = out.grad_logits.data() + v * num_classes;
        for (int c = 0; c < num_classes; ++c) {
            g[c] = inv * wt * (std::exp(lsm[c]) - (c == t ? 1.0 : 0.0));
        }
    }
    out.loss = loss * inv;
    return out;
}

LossTerm hvm_loss(std::span<const double> logits, int num_classes, std::span<const ClassId> labels,
                  std::span<const double> weights, ClassId invalid_id) {
    if (labels.size() != weights.size()) {
        throw ShapeError("label and weight counts differ");
    }
    if (logits.size() != labels.size() * static_cast<std::size_t>(num_classes)) {
        throw ShapeError("logit storage does not match selection size");
    }
    if (labels.empty()) throw ShapeError("hvm loss needs at least one voxel");

    LossTerm out;
    out.grad_logits.assign(logits.size(), 0.0);

    const double inv = 1.0 / static_cast<double>(labels.size());
    std::vector<double> lsm(num_classes);
    bool any_valid = false;
    double loss = 0.0;
    for (std::size_t n = 0; n < labels.size(); ++n) {
        const ClassId y = labels[n];
        if (y == invalid_id) continue;
        any_valid = true;
        const auto row = logits.subspan(n * num_classes, num_classes);
        log_softmax(row, lsm);
        loss += weights[n] * (-lsm[y]);
        double* g = out.grad_logits.data() + n * num_classes;
        for (int c = 0; c < num_classes; ++c) {
            g[c] = inv * weights[n] * (std::exp(lsm[c]) - (c == y ? 1.0 : 0.0));
        }
    }
    out.loss = loss * inv;
    out.degenerate = !any_valid;
    return out;
}

LossReport compose_total(LossReport parts, double delta) {
    const auto check = [](double v, const char* name) {
        if (!std::isfinite(v)) {
            throw Error(std::string("non-finite loss term: ") + name);
        }
    };
    check(parts.wce, "wce");
    check(parts.s_hvm, "s_hvm");
    check(parts.t_hvm, "t_hvm");
    check(parts.distill, "distill");
    check(parts.affinity, "affinity");
    parts.total = parts.wce + parts.s_hvm + delta * parts.t_hvm + parts.distill + parts.affinity;
    check(parts.total, "total");
    return parts;
}

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace hassc
