#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hassc/grid.hpp"

namespace hassc {

// Prediction-by-ground-truth counts over valid voxels. Mergeable by addition.
struct ConfusionMatrix {
    int num_classes = 0;
    std::vector<std::uint64_t> counts;  // pred * C + gt

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int c)
        : num_classes(c), counts(static_cast<std::size_t>(c) * c, 0) {}

    std::uint64_t& at(int pred, int gt) {
        return counts[static_cast<std::size_t>(pred) * num_classes + gt];
    }
    std::uint64_t at(int pred, int gt) const {
        return counts[static_cast<std::size_t>(pred) * num_classes + gt];
    }
    std::uint64_t total() const;
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

// Evaluation window in meters per axis. The forward (x) axis is anchored at
// the near edge, the lateral (y) axis is centered on the grid mid-line, and
// z spans from the ground up; windows clamp to the grid.
struct RangeCrop {
    std::string name = "L";
    double extent_x = 51.2;
    double extent_y = 51.2;
    double extent_z = 6.4;

    static RangeCrop S() { return {"S", 12.8, 12.8, 6.4}; }
    static RangeCrop M() { return {"M", 25.6, 25.6, 6.4}; }
    static RangeCrop L() { return {"L", 51.2, 51.2, 6.4}; }
};

struct CropWindow {
    int x0 = 0, x1 = 0, y0 = 0, y1 = 0, z0 = 0, z1 = 0;
};

// Converts a metric crop to a voxel window; throws ConfigError when an
// extent is not a whole number of voxels.
CropWindow crop_window(const RangeCrop& crop, const GridDims& dims);

// Adds counts for valid voxels (gt label != invalid) inside the crop.
void accumulate(ConfusionMatrix& cm, const SemanticGrid& pred, const SemanticGrid& gt,
                const RangeCrop& crop);

// Per-class intersection over union; nullopt where TP+FP+FN = 0.
std::vector<std::optional<double>> per_class_iou(const ConfusionMatrix& cm);

// Mean IoU over evaluable classes. The empty class joins the mean only when
// include_empty is set. Returns 0 and sets *flagged when nothing is
// evaluable.
double miou(const ConfusionMatrix& cm, ClassId empty_id, bool include_empty = false,
            bool* flagged = nullptr);

// Collapses semantic classes onto {empty, occupied}; row/col 1 = occupied.
ConfusionMatrix collapse_occupancy(const ConfusionMatrix& cm, ClassId empty_id);

// IoU of the occupied class of a collapsed matrix.
double iou_geometry(const ConfusionMatrix& binary, bool* flagged = nullptr);

// Per-voxel argmax labels; ties resolve to the smallest class id.
SemanticGrid argmax_labels(const ProbabilityVolume& p, ClassId empty_id = 0,
                           ClassId invalid_id = kInvalidLabel);

}  // namespace hassc
