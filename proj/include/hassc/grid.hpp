#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hassc/error.hpp"

namespace hassc {

using ClassId = std::uint16_t;

// Reserved label for unobserved voxels; never a valid class id.
inline constexpr ClassId kInvalidLabel = 0xffff;

// Shape of a dense voxel grid plus the metric edge length of one voxel.
struct GridDims {
    int x = 1;
    int y = 1;
    int z = 1;
    double voxel_size = 0.2;

    std::size_t volume() const {
        return static_cast<std::size_t>(x) * static_cast<std::size_t>(y) *
               static_cast<std::size_t>(z);
    }
    bool valid() const { return x >= 1 && y >= 1 && z >= 1 && voxel_size > 0.0; }
};

inline bool same_counts(const GridDims& a, const GridDims& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
}

struct VoxelCoord {
    int i = 0;
    int j = 0;
    int k = 0;
    bool operator==(const VoxelCoord&) const = default;
};

// Row-major, k-fastest flat index. Throws BoundsError when c is outside d.
std::size_t linear_index(VoxelCoord c, const GridDims& d);

// Inverse of linear_index.
VoxelCoord coord_of(std::size_t index, const GridDims& d);

// Dense grid of class labels. Labels are in [0, num_classes) or invalid_id.
// empty_id designates the class meaning unoccupied space.
struct SemanticGrid {
    GridDims dims;
    int num_classes = 0;
    ClassId empty_id = 0;
    ClassId invalid_id = kInvalidLabel;
    std::vector<ClassId> labels;

    ClassId at(VoxelCoord c) const { return labels[linear_index(c, dims)]; }

    // Throws on any invariant breach (size or label range).
    void validate() const;
};

// Dense grid of per-voxel class probability vectors, voxel-major storage.
struct ProbabilityVolume {
    GridDims dims;
    int num_classes = 0;
    std::vector<double> probs;  // volume() * num_classes

    std::span<const double> voxel(std::size_t v) const {
        return {probs.data() + v * static_cast<std::size_t>(num_classes),
                static_cast<std::size_t>(num_classes)};
    }
    std::span<double> voxel(std::size_t v) {
        return {probs.data() + v * static_cast<std::size_t>(num_classes),
                static_cast<std::size_t>(num_classes)};
    }

    // Checks non-negativity and per-voxel sums within tol of 1.
    void validate(double tol = 1e-6) const;
};

// Ratio full/coarse per axis; throws ShapeError unless full is an exact
// integer multiple of coarse on every axis.
struct AxisScale {
    int sx = 1, sy = 1, sz = 1;
};
AxisScale integer_scale(const GridDims& coarse, const GridDims& full);

// Trilinear upsampling of a probability volume to target dims (integer
// multiples of the source dims per axis). Output is renormalized per voxel.
// Identical target dims return an exact copy.
ProbabilityVolume upsample_trilinear(const ProbabilityVolume& p, const GridDims& target);

// Adjoint (transpose) of the upsample_trilinear interpolation operator,
// without the per-voxel renormalization. Maps a gradient w.r.t. the target
// volume back to a gradient w.r.t. the source volume. grad_target has
// target.volume()*num_classes entries; the result has
// source.volume()*num_classes.
std::vector<double> upsample_trilinear_adjoint(std::span<const double> grad_target,
                                               const GridDims& target,
                                               const GridDims& source,
                                               int num_classes);

// Majority-label pooling onto a coarser grid (source dims must be integer
// multiples of target dims). invalid_id wins only when the whole block is
// invalid; ties break toward the smallest class id.
SemanticGrid downsample_labels(const SemanticGrid& g, const GridDims& target);

// Full-resolution voxel containing the geometric center of a coarse voxel.
VoxelCoord center_full_coord(VoxelCoord coarse, const GridDims& coarse_dims,
                             const GridDims& full_dims);

// Label of the full-resolution voxel at the coarse voxel's center
// (nearest-neighbor lookup).
ClassId sample_label_at_center(const SemanticGrid& g, VoxelCoord coarse,
                               const GridDims& coarse_dims);

}  // namespace hassc
