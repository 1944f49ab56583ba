#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace hassc {

// Max-subtracted log-softmax over one class vector.
inline void log_softmax(std::span<const double> logits, std::span<double> out) {
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.size(); ++c) sum += std::exp(logits[c] - m);
    const double lse = m + std::log(sum);
    for (std::size_t c = 0; c < logits.size(); ++c) out[c] = logits[c] - lse;
}

inline void softmax(std::span<const double> logits, std::span<double> out) {
    log_softmax(logits, out);
    for (double& v : out) v = std::exp(v);
}

// grad_logits = probs * (grad_probs - <probs, grad_probs>), the transpose of
// the softmax Jacobian applied to a probability-space gradient.
inline void softmax_backward(std::span<const double> probs, std::span<const double> grad_probs,
                             std::span<double> grad_logits) {
    double dot = 0.0;
    for (std::size_t c = 0; c < probs.size(); ++c) dot += probs[c] * grad_probs[c];
    for (std::size_t c = 0; c < probs.size(); ++c) {
        grad_logits[c] = probs[c] * (grad_probs[c] - dot);
    }
}

}  // namespace hassc
