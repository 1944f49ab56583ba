#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hassc/grid.hpp"

namespace hassc {

// Cap applied where the top-two probability gap underflows; keeps sorts total.
inline constexpr double kGlobalHardnessCap = 1e12;

enum class HardnessKind { global, lga, local };

// Scalar per-voxel hardness values. `excluded`, when non-empty, flags voxels
// that must not take part in selection (invalid ground truth underneath).
struct HardnessField {
    GridDims dims;
    HardnessKind kind = HardnessKind::global;
    std::vector<double> values;
    std::vector<std::uint8_t> excluded;  // empty or volume() entries

    bool is_excluded(std::size_t v) const { return !excluded.empty() && excluded[v] != 0; }
};

struct Offset3 {
    int di = 0, dj = 0, dk = 0;
};

// What an out-of-bounds neighbor contributes to the anisotropy count.
enum class OobPolicy { skip, mismatch };

struct LgaConfig {
    std::vector<Offset3> directions = axis_directions();
    double alpha = 0.2;
    double beta = 1.0;
    OobPolicy oob_policy = OobPolicy::skip;

    // The six axis-aligned unit offsets.
    static std::vector<Offset3> axis_directions() {
        return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    }
};

// Per-voxel prediction uncertainty: reciprocal gap between the two largest
// class probabilities, capped at kGlobalHardnessCap.
HardnessField global_hardness(const ProbabilityVolume& p);

// Neighbor-mismatch count for one voxel. Invalid voxels score 0; invalid
// neighbors never match or mismatch.
int lga_at(const SemanticGrid& g, VoxelCoord c, const LgaConfig& cfg);

// Neighbor-mismatch counts for every voxel, empty ones included. Invalid
// voxels score 0 and are flagged excluded.
HardnessField lga(const SemanticGrid& g, const LgaConfig& cfg);

// Affine map alpha + beta * A of an anisotropy field.
HardnessField local_hardness(const HardnessField& a, const LgaConfig& cfg);

// Counts of empty- vs non-empty-labeled voxels per anisotropy value 0..M.
// Invalid voxels are excluded.
struct LgaHistogram {
    std::vector<std::uint64_t> empty_count;
    std::vector<std::uint64_t> nonempty_count;

    std::uint64_t total() const;
    // CSV columns: lga_value, empty_count, nonempty_count.
    void write_csv(std::ostream& os) const;
};

LgaHistogram lga_histogram(const SemanticGrid& g, const LgaConfig& cfg);

}  // namespace hassc
