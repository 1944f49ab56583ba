#pragma once

#include "hassc/grid.hpp"
#include "hassc/hardness.hpp"

// Plain serial implementations of the parallel voxel kernels. They share the
// public contracts but none of the loop code; tests compare both paths and
// the benchmark target measures the speedup.
namespace hassc::reference {

HardnessField global_hardness_serial(const ProbabilityVolume& p);

HardnessField lga_serial(const SemanticGrid& g, const LgaConfig& cfg);

ProbabilityVolume upsample_trilinear_serial(const ProbabilityVolume& p, const GridDims& target);

SemanticGrid downsample_labels_serial(const SemanticGrid& g, const GridDims& target);

}  // namespace hassc::reference
