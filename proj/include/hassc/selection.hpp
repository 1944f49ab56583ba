#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "hassc/grid.hpp"
#include "hassc/hardness.hpp"

namespace hassc {

struct SelectionConfig {
    std::size_t n = 4096;  // voxels selected per step
    double t = 3.0;        // over-generation factor, >= 1
    double omega = 0.75;   // fraction kept by hardness, in [0, 1]
    std::uint64_t seed = 0;

    std::size_t proposal_count() const;  // ceil(t * n)
    std::size_t hard_count() const;      // floor(omega * n)
    void validate() const;
};

// N selected coarse voxels, hard block first then random block. lga_values
// and weights are filled by attach_local_weights.
struct SelectionSet {
    std::vector<VoxelCoord> coords;
    std::vector<double> global_hardness;  // hardness at selection time
    std::vector<int> lga_values;
    std::vector<double> weights;
    std::size_t hard_count = 0;

    std::size_t size() const { return coords.size(); }

    // CSV columns: i, j, k, global_hardness, lga, weight, block
    // where block is "hard" or "random".
    void write_csv(std::ostream& os) const;
};

// Three-stage hard voxel selection over a global-hardness field:
//   1. draw ceil(t*N) distinct proposals uniformly from the selectable
//      (non-excluded) voxels, by partial Fisher-Yates over their linear
//      indices in ascending order (one uniform_below(P - i) draw each);
//   2. keep the floor(omega*N) proposals with the largest hardness, ties
//      broken toward the smaller linear index;
//   3. draw the remaining N - floor(omega*N) voxels uniformly from the
//      selectable voxels not kept in stage 2, by the same partial
//      Fisher-Yates scheme continued on the same engine.
// Deterministic given (field, cfg, rng state); throws ConfigError when the
// selectable population is smaller than ceil(t*N) or N.
SelectionSet select_hard_voxels(const HardnessField& h, const SelectionConfig& cfg,
                                std::mt19937_64& rng);

// Fills lga_values and weights: each selected coarse voxel maps to the
// full-resolution voxel at its center, where the anisotropy count and the
// affine local hardness are evaluated against the ground truth.
SelectionSet attach_local_weights(SelectionSet s, const SemanticGrid& gt, const LgaConfig& cfg,
                                  const GridDims& coarse_dims);

}  // namespace hassc
