#include "hassc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace hassc {

std::size_t linear_index(VoxelCoord c, const GridDims& d) {
    if (c.i < 0 || c.j < 0 || c.k < 0 || c.i >= d.x || c.j >= d.y || c.k >= d.z) {
        throw BoundsError("voxel (" + std::to_string(c.i) + "," + std::to_string(c.j) + "," +
                          std::to_string(c.k) + ") outside grid " + std::to_string(d.x) + "x" +
                          std::to_string(d.y) + "x" + std::to_string(d.z));
    }
    return (static_cast<std::size_t>(c.i) * d.y + c.j) * d.z + c.k;
}

VoxelCoord coord_of(std::size_t index, const GridDims& d) {
    if (index >= d.volume()) {
        throw BoundsError("linear index " + std::to_string(index) + " outside grid volume " +
                          std::to_string(d.volume()));
    }
    const std::size_t yz = static_cast<std::size_t>(d.y) * d.z;
    VoxelCoord c;
    c.i = static_cast<int>(index / yz);
    c.j = static_cast<int>((index / d.z) % d.y);
    c.k = static_cast<int>(index % d.z);
    return c;
}

void SemanticGrid::validate() const {
    if (!dims.valid()) throw ShapeError("semantic grid has degenerate dims");
    if (num_classes < 1) throw ConfigError("semantic grid needs at least one class");
    if (labels.size() != dims.volume()) {
        throw ShapeError("label storage length " + std::to_string(labels.size()) +
                         " != grid volume " + std::to_string(dims.volume()));
    }
    if (empty_id >= num_classes) throw ConfigError("empty class id outside [0, C)");
    for (const ClassId l : labels) {
        if (l != invalid_id && l >= num_classes) {
            throw DataError("label " + std::to_string(l) + " outside [0, C) u {invalid}");
        }
    }
}

void ProbabilityVolume::validate(double tol) const {
    if (!dims.valid()) throw ShapeError("probability volume has degenerate dims");
    if (num_classes < 1) throw ConfigError("probability volume needs at least one class");
    if (probs.size() != dims.volume() * static_cast<std::size_t>(num_classes)) {
        throw ShapeError("probability storage length mismatch");
    }
    const std::size_t vol = dims.volume();
    for (std::size_t v = 0; v < vol; ++v) {
        double sum = 0.0;
        for (const double p : voxel(v)) {
            if (p < 0.0) throw DataError("negative probability entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol) {
            throw DataError("voxel probabilities sum to " + std::to_string(sum));
        }
    }
}

AxisScale integer_scale(const GridDims& coarse, const GridDims& full) {
    if (!coarse.valid() || !full.valid()) throw ShapeError("degenerate grid dims");
    if (full.x % coarse.x != 0 || full.y % coarse.y != 0 || full.z % coarse.z != 0) {
        throw ShapeError("grid " + std::to_string(full.x) + "x" + std::to_string(full.y) + "x" +
                         std::to_string(full.z) + " is not an integer multiple of " +
                         std::to_string(coarse.x) + "x" + std::to_string(coarse.y) + "x" +
                         std::to_string(coarse.z));
    }
    return {full.x / coarse.x, full.y / coarse.y, full.z / coarse.z};
}

namespace {

// Source-space coordinate of a target voxel center, clamped to the valid
// interpolation range. scale = target_extent / source_extent.
inline double source_coord(int t, int scale, int source_extent) {
    double s = (t + 0.5) / scale - 0.5;
    if (s < 0.0) s = 0.0;
    const double hi = source_extent - 1.0;
    if (s > hi) s = hi;
    return s;
}

struct AxisTap {
    int lo;       // floor cell
    int hi;       // neighbor cell (clamped)
    double frac;  // weight of hi
};

inline AxisTap axis_tap(int t, int scale, int source_extent) {
    const double s = source_coord(t, scale, source_extent);
    AxisTap tap;
    tap.lo = static_cast<int>(s);
    if (tap.lo > source_extent - 1) tap.lo = source_extent - 1;
    tap.hi = std::min(tap.lo + 1, source_extent - 1);
    tap.frac = s - tap.lo;
    return tap;
}

}  // namespace

ProbabilityVolume upsample_trilinear(const ProbabilityVolume& p, const GridDims& target) {
    if (same_counts(p.dims, target)) {
        ProbabilityVolume out = p;
        out.dims.voxel_size = target.voxel_size;
        return out;
    }
    const AxisScale s = integer_scale(p.dims, target);
    const int C = p.num_classes;

    ProbabilityVolume out;
    out.dims = target;
    out.num_classes = C;
    out.probs.assign(target.volume() * static_cast<std::size_t>(C), 0.0);

    const std::size_t tvol = target.volume();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(tvol); ++v) {
        const VoxelCoord t = coord_of(static_cast<std::size_t>(v), target);
        const AxisTap tx = axis_tap(t.i, s.sx, p.dims.x);
        const AxisTap ty = axis_tap(t.j, s.sy, p.dims.y);
        const AxisTap tz = axis_tap(t.k, s.sz, p.dims.z);

        double* dst = out.probs.data() + static_cast<std::size_t>(v) * C;
        for (int ci = 0; ci < 2; ++ci) {
            const int si = ci ? tx.hi : tx.lo;
            const double wi = ci ? tx.frac : 1.0 - tx.frac;
            for (int cj = 0; cj < 2; ++cj) {
                const int sj = cj ? ty.hi : ty.lo;
                const double wij = wi * (cj ? ty.frac : 1.0 - ty.frac);
                for (int ck = 0; ck < 2; ++ck) {
                    const int sk = ck ? tz.hi : tz.lo;
                    const double w = wij * (ck ? tz.frac : 1.0 - tz.frac);
                    if (w == 0.0) continue;
                    const std::size_t src =
                        linear_index({si, sj, sk}, p.dims) * static_cast<std::size_t>(C);
                    for (int c = 0; c < C; ++c) dst[c] += w * p.probs[src + c];
                }
            }
        }
        double sum = 0.0;
        for (int c = 0; c < C; ++c) sum += dst[c];
        if (sum > 0.0) {
            for (int c = 0; c < C; ++c) dst[c] /= sum;
        }
    }
    return out;
}

std::vector<double> upsample_trilinear_adjoint(std::span<const double> grad_target,
                                               const GridDims& target, const GridDims& source,
                                               int num_classes) {
    const std::size_t expect = target.volume() * static_cast<std::size_t>(num_classes);
    if (grad_target.size() != expect) {
        throw ShapeError("adjoint gradient length " + std::to_string(grad_target.size()) +
                         " != " + std::to_string(expect));
    }
    std::vector<double> grad_source(source.volume() * static_cast<std::size_t>(num_classes), 0.0);
    if (same_counts(source, target)) {
        std::copy(grad_target.begin(), grad_target.end(), grad_source.begin());
        return grad_source;
    }
    const AxisScale s = integer_scale(source, target);
    const int C = num_classes;

    // Scatter form of the gather done in upsample_trilinear. Serial: the
    // adjoint only runs on desk-scale training grids.
    const std::size_t tvol = target.volume();
    for (std::size_t v = 0; v < tvol; ++v) {
        const VoxelCoord t = coord_of(v, target);
        const AxisTap tx = axis_tap(t.i, s.sx, source.x);
        const AxisTap ty = axis_tap(t.j, s.sy, source.y);
        const AxisTap tz = axis_tap(t.k, s.sz, source.z);

        const double* g = grad_target.data() + v * C;
        for (int ci = 0; ci < 2; ++ci) {
            const int si = ci ? tx.hi : tx.lo;
            const double wi = ci ? tx.frac : 1.0 - tx.frac;
            for (int cj = 0; cj < 2; ++cj) {
                const int sj = cj ? ty.hi : ty.lo;
                const double wij = wi * (cj ? ty.frac : 1.0 - ty.frac);
                for (int ck = 0; ck < 2; ++ck) {
                    const int sk = ck ? tz.hi : tz.lo;
                    const double w = wij * (ck ? tz.frac : 1.0 - tz.frac);
                    if (w == 0.0) continue;
                    double* dst = grad_source.data() +
                                  linear_index({si, sj, sk}, source) * static_cast<std::size_t>(C);
                    for (int c = 0; c < C; ++c) dst[c] += w * g[c];
                }
            }
        }
    }
    return grad_source;
}

SemanticGrid downsample_labels(const SemanticGrid& g, const GridDims& target) {
    const AxisScale s = integer_scale(target, g.dims);
    SemanticGrid out;
    out.dims = target;
    out.dims.voxel_size = g.dims.voxel_size * s.sx;
    out.num_classes = g.num_classes;
    out.empty_id = g.empty_id;
    out.invalid_id = g.invalid_id;
    out.labels.assign(target.volume(), g.invalid_id);

    const std::size_t tvol = target.volume();
#pragma omp parallel
    {
        std::vector<std::uint32_t> counts(g.num_classes, 0);
#pragma omp for schedule(static)
        for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(tvol); ++v) {
            const VoxelCoord t = coord_of(static_cast<std::size_t>(v), target);
            std::fill(counts.begin(), counts.end(), 0u);
            bool any_valid = false;
            for (int di = 0; di < s.sx; ++di) {
                for (int dj = 0; dj < s.sy; ++dj) {
                    for (int dk = 0; dk < s.sz; ++dk) {
                        const ClassId l = g.labels[linear_index(
                            {t.i * s.sx + di, t.j * s.sy + dj, t.k * s.sz + dk}, g.dims)];
                        if (l == g.invalid_id) continue;
                        ++counts[l];
                        any_valid = true;
                    }
                }
            }
            if (!any_valid) continue;  // stays invalid
            int best = 0;
            for (int c = 1; c < g.num_classes; ++c) {
                if (counts[c] > counts[best]) best = c;  // ties keep the smaller id
            }
            out.labels[static_cast<std::size_t>(v)] = static_cast<ClassId>(best);
        }
    }
    return out;
}

VoxelCoord center_full_coord(VoxelCoord coarse, const GridDims& coarse_dims,
                             const GridDims& full_dims) {
    const AxisScale s = integer_scale(coarse_dims, full_dims);
    // Center of coarse voxel c lies at full coordinate (c + 0.5) * scale,
    // which falls inside full voxel c*scale + scale/2.
    VoxelCoord full{coarse.i * s.sx + s.sx / 2, coarse.j * s.sy + s.sy / 2,
                    coarse.k * s.sz + s.sz / 2};
    linear_index(full, full_dims);  // bounds check
    return full;
}

ClassId sample_label_at_center(const SemanticGrid& g, VoxelCoord coarse,
                               const GridDims& coarse_dims) {
    const VoxelCoord full = center_full_coord(coarse, coarse_dims, g.dims);
    return g.labels[linear_index(full, g.dims)];
}

}  // namespace hassc
