#include "hassc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "hassc/rng.hpp"

namespace hassc {

std::size_t SelectionConfig::proposal_count() const {
    return static_cast<std::size_t>(std::ceil(t * static_cast<double>(n)));
}

std::size_t SelectionConfig::hard_count() const {
    return static_cast<std::size_t>(std::floor(omega * static_cast<double>(n)));
}

void SelectionConfig::validate() const {
    if (n < 1) throw ConfigError("selection count N must be >= 1");
    if (t < 1.0) throw ConfigError("over-generation factor t must be >= 1");
    if (omega < 0.0 || omega > 1.0) throw ConfigError("omega must lie in [0, 1]");
}

void SelectionSet::write_csv(std::ostream& os) const {
    os << "i,j,k,global_hardness,lga,weight,block\n";
    for (std::size_t idx = 0; idx < coords.size(); ++idx) {
        const VoxelCoord& c = coords[idx];
        os << c.i << ',' << c.j << ',' << c.k << ',' << global_hardness[idx] << ','
           << (idx < lga_values.size() ? lga_values[idx] : 0) << ','
           << (idx < weights.size() ? weights[idx] : 0.0) << ','
           << (idx < hard_count ? "hard" : "random") << '\n';
    }
}

namespace {

// Moves k uniform draws (without replacement) to the front of pool.
void partial_shuffle(std::vector<std::size_t>& pool, std::size_t k, std::mt19937_64& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_below(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
}

}  // namespace

SelectionSet select_hard_voxels(const HardnessField& h, const SelectionConfig& cfg,
                                std::mt19937_64& rng) {
    cfg.validate();

    std::vector<std::size_t> selectable;
    selectable.reserve(h.values.size());
    for (std::size_t v = 0; v < h.values.size(); ++v) {
        if (!h.is_excluded(v)) selectable.push_back(v);
    }

    const std::size_t proposals = cfg.proposal_count();
    if (selectable.size() < cfg.n) {
        throw ConfigError("selectable population " + std::to_string(selectable.size()) +
                          " smaller than N = " + std::to_string(cfg.n));
    }
    if (selectable.size() < proposals) {
        throw ConfigError("selectable population " + std::to_string(selectable.size()) +
                          " smaller than proposal count " + std::to_string(proposals));
    }

    // Stage 1: uniform distinct proposals.
    partial_shuffle(selectable, proposals, rng);
    std::vector<std::size_t> proposal_idx(selectable.begin(), selectable.begin() + proposals);

    // Stage 2: hardest proposals, ties toward the smaller index.
    const std::size_t keep = cfg.hard_count();
    std::sort(proposal_idx.begin(), proposal_idx.end(), [&](std::size_t a, std::size_t b) {
        if (h.values[a] != h.values[b]) return h.values[a] > h.values[b];
        return a < b;
    });
    proposal_idx.resize(keep);

    // Stage 3: uniform top-up from the selectable voxels not already kept.
    std::vector<std::uint8_t> kept(h.values.size(), 0);
    for (const std::size_t v : proposal_idx) kept[v] = 1;
    std::vector<std::size_t> remainder;
    remainder.reserve(selectable.size() - keep);
    for (std::size_t v = 0; v < h.values.size(); ++v) {
        if (!h.is_excluded(v) && !kept[v]) remainder.push_back(v);
    }
    const std::size_t random_count = cfg.n - keep;
    partial_shuffle(remainder, random_count, rng);

    SelectionSet out;
    out.hard_count = keep;
    out.coords.reserve(cfg.n);
    out.global_hardness.reserve(cfg.n);
    for (const std::size_t v : proposal_idx) {
        out.coords.push_back(coord_of(v, h.dims));
        out.global_hardness.push_back(h.values[v]);
    }
    for (std::size_t i = 0; i < random_count; ++i) {
        const std::size_t v = remainder[i];
        out.coords.push_back(coord_of(v, h.dims));
        out.global_hardness.push_back(h.values[v]);
    }
    return out;
}

SelectionSet attach_local_weights(SelectionSet s, const SemanticGrid& gt, const LgaConfig& cfg,
                                  const GridDims& coarse_dims) {
    integer_scale(coarse_dims, gt.dims);  // shape check
    s.lga_values.resize(s.coords.size());
    s.weights.resize(s.coords.size());
    for (std::size_t idx = 0; idx < s.coords.size(); ++idx) {
        const VoxelCoord full = center_full_coord(s.coords[idx], coarse_dims, gt.dims);
        const int a = lga_at(gt, full, cfg);
        s.lga_values[idx] = a;
        s.weights[idx] = cfg.alpha + cfg.beta * a;
    }
    return s;
}

}  // namespace hassc
