#include "hassc/hardness.hpp"

#include <algorithm>
#include <ostream>

namespace hassc {

HardnessField global_hardness(const ProbabilityVolume& p) {
    if (p.num_classes < 2) {
        throw ConfigError("global hardness needs at least two classes");
    }
    HardnessField h;
    h.dims = p.dims;
    h.kind = HardnessKind::global;
    h.values.assign(p.dims.volume(), 0.0);

    const std::size_t vol = p.dims.volume();
    const int C = p.num_classes;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(vol); ++v) {
        const double* q = p.probs.data() + static_cast<std::size_t>(v) * C;
        double top = q[0], second = q[1];
        if (second > top) std::swap(top, second);
        for (int c = 2; c < C; ++c) {
            if (q[c] > top) {
                second = top;
                top = q[c];
            } else if (q[c] > second) {
                second = q[c];
            }
        }
        const double gap = std::max(top - second, 1.0 / kGlobalHardnessCap);
        h.values[static_cast<std::size_t>(v)] = 1.0 / gap;
    }
    return h;
}

int lga_at(const SemanticGrid& g, VoxelCoord c, const LgaConfig& cfg) {
    const ClassId own = g.labels[linear_index(c, g.dims)];
    if (own == g.invalid_id) return 0;
    int count = 0;
    for (const Offset3& d : cfg.directions) {
        const int ni = c.i + d.di, nj = c.j + d.dj, nk = c.k + d.dk;
        if (ni < 0 || nj < 0 || nk < 0 || ni >= g.dims.x || nj >= g.dims.y || nk >= g.dims.z) {
            if (cfg.oob_policy == OobPolicy::mismatch) ++count;
            continue;
        }
        const ClassId nb = g.labels[linear_index({ni, nj, nk}, g.dims)];
        if (nb == g.invalid_id) continue;
        if (nb != own) ++count;
    }
    return count;
}

HardnessField lga(const SemanticGrid& g, const LgaConfig& cfg) {
    HardnessField h;
    h.dims = g.dims;
    h.kind = HardnessKind::lga;
    h.values.assign(g.dims.volume(), 0.0);
    h.excluded.assign(g.dims.volume(), 0);

    const std::size_t vol = g.dims.volume();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(vol); ++v) {
        const std::size_t idx = static_cast<std::size_t>(v);
        if (g.labels[idx] == g.invalid_id) {
            h.excluded[idx] = 1;
            continue;  // value stays 0
        }
        h.values[idx] = lga_at(g, coord_of(idx, g.dims), cfg);
    }
    return h;
}

HardnessField local_hardness(const HardnessField& a, const LgaConfig& cfg) {
    if (a.kind != HardnessKind::lga) {
        throw Error("local hardness expects an anisotropy field");
    }
    HardnessField h;
    h.dims = a.dims;
    h.kind = HardnessKind::local;
    h.excluded = a.excluded;
    h.values.resize(a.values.size());

    const std::size_t n = a.values.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(n); ++v) {
        h.values[v] = cfg.alpha + cfg.beta * a.values[v];
    }
    return h;
}

std::uint64_t LgaHistogram::total() const {
    std::uint64_t t = 0;
    for (const auto c : empty_count) t += c;
    for (const auto c : nonempty_count) t += c;
    return t;
}

void LgaHistogram::write_csv(std::ostream& os) const {
    os << "lga_value,empty_count,nonempty_count\n";
    for (std::size_t a = 0; a < empty_count.size(); ++a) {
        os << a << ',' << empty_count[a] << ',' << nonempty_count[a] << '\n';
    }
}

LgaHistogram lga_histogram(const SemanticGrid& g, const LgaConfig& cfg) {
    const HardnessField a = lga(g, cfg);
    const std::size_t bins = cfg.directions.size() + 1;
    LgaHistogram hist;
    hist.empty_count.assign(bins, 0);
    hist.nonempty_count.assign(bins, 0);
    // Serial count over the precomputed field keeps the reduction
    // order-independent.
    for (std::size_t v = 0; v < a.values.size(); ++v) {
        if (a.excluded[v]) continue;
        const auto bin = static_cast<std::size_t>(a.values[v]);
        if (g.labels[v] == g.empty_id) {
            ++hist.empty_count[bin];
        } else {
            ++hist.nonempty_count[bin];
        }
    }
    return hist;
}

}  // namespace hassc
