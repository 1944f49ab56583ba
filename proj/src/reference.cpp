#include "hassc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hassc::reference {

HardnessField global_hardness_serial(const ProbabilityVolume& p) {
    if (p.num_classes < 2) {
        throw ConfigError("global hardness needs at least two classes");
    }
    HardnessField h;
    h.dims = p.dims;
    h.kind = HardnessKind::global;
    h.values.reserve(p.dims.volume());
    std::vector<double> sorted(p.num_classes);
    for (std::size_t v = 0; v < p.dims.volume(); ++v) {
        const auto q = p.voxel(v);
        sorted.assign(q.begin(), q.end());
        std::partial_sort(sorted.begin(), sorted.begin() + 2, sorted.end(), std::greater<>());
        const double gap = std::max(sorted[0] - sorted[1], 1.0 / kGlobalHardnessCap);
        h.values.push_back(1.0 / gap);
    }
    return h;
}

HardnessField lga_serial(const SemanticGrid& g, const LgaConfig& cfg) {
    HardnessField h;
    h.dims = g.dims;
    h.kind = HardnessKind::lga;
    h.values.assign(g.dims.volume(), 0.0);
    h.excluded.assign(g.dims.volume(), 0);

    for (int i = 0; i < g.dims.x; ++i) {
        for (int j = 0; j < g.dims.y; ++j) {
            for (int k = 0; k < g.dims.z; ++k) {
                const std::size_t idx = linear_index({i, j, k}, g.dims);
                const ClassId own = g.labels[idx];
                if (own == g.invalid_id) {
                    h.excluded[idx] = 1;
                    continue;
                }
                int count = 0;
                for (const Offset3& d : cfg.directions) {
                    const int ni = i + d.di, nj = j + d.dj, nk = k + d.dk;
                    if (ni < 0 || nj < 0 || nk < 0 || ni >= g.dims.x || nj >= g.dims.y ||
                        nk >= g.dims.z) {
                        if (cfg.oob_policy == OobPolicy::mismatch) ++count;
                        continue;
                    }
                    const ClassId nb = g.labels[linear_index({ni, nj, nk}, g.dims)];
                    if (nb != g.invalid_id && nb != own) ++count;
                }
                h.values[idx] = count;
            }
        }
    }
    return h;
}

namespace {

double sample_axis(double s, int extent, double* frac, int* lo, int* hi) {
    s = std::clamp(s, 0.0, extent - 1.0);
    *lo = std::min(static_cast<int>(s), extent - 1);
    *hi = std::min(*lo + 1, extent - 1);
    *frac = s - *lo;
    return s;
}

}  // namespace

ProbabilityVolume upsample_trilinear_serial(const ProbabilityVolume& p, const GridDims& target) {
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

    for (int ti = 0; ti < target.x; ++ti) {
        for (int tj = 0; tj < target.y; ++tj) {
            for (int tk = 0; tk < target.z; ++tk) {
                double fx, fy, fz;
                int x0, x1, y0, y1, z0, z1;
                sample_axis((ti + 0.5) / s.sx - 0.5, p.dims.x, &fx, &x0, &x1);
                sample_axis((tj + 0.5) / s.sy - 0.5, p.dims.y, &fy, &y0, &y1);
                sample_axis((tk + 0.5) / s.sz - 0.5, p.dims.z, &fz, &z0, &z1);

                const int xs[2] = {x0, x1};
                const int ys[2] = {y0, y1};
                const int zs[2] = {z0, z1};
                const double wx[2] = {1.0 - fx, fx};
                const double wy[2] = {1.0 - fy, fy};
                const double wz[2] = {1.0 - fz, fz};

                double* dst =
                    out.probs.data() + linear_index({ti, tj, tk}, target) * static_cast<std::size_t>(C);
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        for (int c8 = 0; c8 < 2; ++c8) {
                            const double w = wx[a] * wy[b] * wz[c8];
                            if (w == 0.0) continue;
                            const double* src =
                                p.probs.data() + linear_index({xs[a], ys[b], zs[c8]}, p.dims) *
                                                     static_cast<std::size_t>(C);
                            for (int c = 0; c < C; ++c) dst[c] += w * src[c];
                        }
                    }
                }
                double sum = 0.0;
                for (int c = 0; c < C; ++c) sum += dst[c];
                if (sum > 0.0) {
                    for (int c = 0; c < C; ++c) dst[c] /= sum;
                }
            }
        }
    }
    return out;
}

SemanticGrid downsample_labels_serial(const SemanticGrid& g, const GridDims& target) {
    const AxisScale s = integer_scale(target, g.dims);
    SemanticGrid out;
    out.dims = target;
    out.dims.voxel_size = g.dims.voxel_size * s.sx;
    out.num_classes = g.num_classes;
    out.empty_id = g.empty_id;
    out.invalid_id = g.invalid_id;
    out.labels.assign(target.volume(), g.invalid_id);

    std::vector<std::uint32_t> counts(g.num_classes);
    for (int ti = 0; ti < target.x; ++ti) {
        for (int tj = 0; tj < target.y; ++tj) {
            for (int tk = 0; tk < target.z; ++tk) {
                std::fill(counts.begin(), counts.end(), 0u);
                bool any_valid = false;
                for (int di = 0; di < s.sx; ++di) {
                    for (int dj = 0; dj < s.sy; ++dj) {
                        for (int dk = 0; dk < s.sz; ++dk) {
                            const ClassId l = g.labels[linear_index(
                                {ti * s.sx + di, tj * s.sy + dj, tk * s.sz + dk}, g.dims)];
                            if (l == g.invalid_id) continue;
                            ++counts[l];
                            any_valid = true;
                        }
                    }
                }
                if (!any_valid) continue;
                int best = 0;
                for (int c = 1; c < g.num_classes; ++c) {
                    if (counts[c] > counts[best]) best = c;
                }
                out.labels[linear_index({ti, tj, tk}, target)] = static_cast<ClassId>(best);
            }
        }
    }
    return out;
}

}  // namespace hassc::reference
