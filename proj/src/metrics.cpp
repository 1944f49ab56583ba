#include "hassc/metrics.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hassc {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const auto c : counts) t += c;
    return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.num_classes != num_classes) throw ShapeError("confusion matrix class counts differ");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    return *this;
}

namespace {

int extent_to_voxels(double extent_m, double voxel_size, const char* axis) {
    const double v = extent_m / voxel_size;
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 1.0) {
        throw ConfigError(std::string("crop extent on ") + axis + " axis (" +
                          std::to_string(extent_m) + " m) is not a whole voxel count at " +
                          std::to_string(voxel_size) + " m/voxel");
    }
    return static_cast<int>(r);
}

}  // namespace

CropWindow crop_window(const RangeCrop& crop, const GridDims& dims) {
    const int ex = std::min(extent_to_voxels(crop.extent_x, dims.voxel_size, "x"), dims.x);
    const int ey = std::min(extent_to_voxels(crop.extent_y, dims.voxel_size, "y"), dims.y);
    const int ez = std::min(extent_to_voxels(crop.extent_z, dims.voxel_size, "z"), dims.z);
    CropWindow w;
    w.x0 = 0;
    w.x1 = ex;
    w.y0 = (dims.y - ey) / 2;
    w.y1 = w.y0 + ey;
    w.z0 = 0;
    w.z1 = ez;
    return w;
}

void accumulate(ConfusionMatrix& cm, const SemanticGrid& pred, const SemanticGrid& gt,
                const RangeCrop& crop) {
    if (!same_counts(pred.dims, gt.dims)) throw ShapeError("prediction/gt dims differ");
    if (cm.num_classes != gt.num_classes) throw ShapeError("confusion matrix class count differs");
    const CropWindow w = crop_window(crop, gt.dims);

    // Shard per thread, merge after the loop; integer counts make the merge
    // order irrelevant.
#ifdef _OPENMP
    const int nthreads = omp_get_max_threads();
#else
    const int nthreads = 1;
#endif
    std::vector<ConfusionMatrix> shards(static_cast<std::size_t>(nthreads),
                                        ConfusionMatrix(cm.num_classes));
#pragma omp parallel for schedule(static) collapse(2)
    for (int i = w.x0; i < w.x1; ++i) {
        for (int j = w.y0; j < w.y1; ++j) {
#ifdef _OPENMP
            ConfusionMatrix& local = shards[static_cast<std::size_t>(omp_get_thread_num())];
#else
            ConfusionMatrix& local = shards[0];
#endif
            for (int k = w.z0; k < w.z1; ++k) {
                const std::size_t idx = linear_index({i, j, k}, gt.dims);
                const ClassId g = gt.labels[idx];
                if (g == gt.invalid_id) continue;
                const ClassId p = pred.labels[idx];
                ++local.at(p, g);
            }
        }
    }
    for (const ConfusionMatrix& s : shards) cm += s;
}

std::vector<std::optional<double>> per_class_iou(const ConfusionMatrix& cm) {
    const int C = cm.num_classes;
    std::vector<std::optional<double>> out(static_cast<std::size_t>(C));
    for (int c = 0; c < C; ++c) {
        const std::uint64_t tp = cm.at(c, c);
        std::uint64_t fp = 0, fn = 0;
        for (int o = 0; o < C; ++o) {
            if (o == c) continue;
            fp += cm.at(c, o);
            fn += cm.at(o, c);
        }
        const std::uint64_t denom = tp + fp + fn;
        if (denom > 0) {
            out[c] = static_cast<double>(tp) / static_cast<double>(denom);
        }
    }
    return out;
}

double miou(const ConfusionMatrix& cm, ClassId empty_id, bool include_empty, bool* flagged) {
    const auto ious = per_class_iou(cm);
    double sum = 0.0;
    int n = 0;
    for (int c = 0; c < cm.num_classes; ++c) {
        if (!include_empty && c == empty_id) continue;
        if (!ious[c].has_value()) continue;
        sum += *ious[c];
        ++n;
    }
    if (n == 0) {
        if (flagged) *flagged = true;
        return 0.0;
    }
    if (flagged) *flagged = false;
    return sum / n;
}

ConfusionMatrix collapse_occupancy(const ConfusionMatrix& cm, ClassId empty_id) {
    ConfusionMatrix b(2);
    for (int p = 0; p < cm.num_classes; ++p) {
        const int po = (p == empty_id) ? 0 : 1;
        for (int g = 0; g < cm.num_classes; ++g) {
            const int go = (g == empty_id) ? 0 : 1;
            b.at(po, go) += cm.at(p, g);
        }
    }
    return b;
}

double iou_geometry(const ConfusionMatrix& binary, bool* flagged) {
    if (binary.num_classes != 2) throw ShapeError("geometry IoU expects a 2x2 matrix");
    const std::uint64_t tp = binary.at(1, 1);
    const std::uint64_t denom = tp + binary.at(1, 0) + binary.at(0, 1);
    if (denom == 0) {
        if (flagged) *flagged = true;
        return 0.0;
    }
    if (flagged) *flagged = false;
    return static_cast<double>(tp) / static_cast<double>(denom);
}

SemanticGrid argmax_labels(const ProbabilityVolume& p, ClassId empty_id, ClassId invalid_id) {
    SemanticGrid g;
    g.dims = p.dims;
    g.num_classes = p.num_classes;
    g.empty_id = empty_id;
    g.invalid_id = invalid_id;
    g.labels.assign(p.dims.volume(), 0);

    const std::size_t vol = p.dims.volume();
    const int C = p.num_classes;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(vol); ++v) {
        const double* q = p.probs.data() + static_cast<std::size_t>(v) * C;
        int best = 0;
        for (int c = 1; c < C; ++c) {
            if (q[c] > q[best]) best = c;
        }
        g.labels[static_cast<std::size_t>(v)] = static_cast<ClassId>(best);
    }
    return g;
}

}  // namespace hassc
