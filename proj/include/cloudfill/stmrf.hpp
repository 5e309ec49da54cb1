#pragma once

#include <vector>

#include "cloudfill/raster.hpp"

namespace cloudfill {

struct StmrfParams {
    int patch_radius = 2;        // 5x5 patches
    int search_stride = 1;       // donor grid stride
    double lambda_smooth = 0.5;  // offset-coherence weight
    int icm_iters = 5;
    int candidate_count = 10;    // top-K donors kept per pixel
};

struct StmrfDiagnostics {
    double final_energy = 0.0;
    std::vector<double> energy_trace;  // after greedy init and each ICM sweep
};

/// Fills the masked region with donor pixels from the clear part of the
/// target itself. Donor choice minimizes a reference-patch matching cost
/// plus a truncated-linear coherence penalty on donor offsets, optimized by
/// greedy init over pruned candidates and ICM sweeps. Every output pixel in
/// the region equals some clear target pixel exactly.
Raster stmrf_reconstruct(const Raster& target, const Mask& m, const Raster& reference,
                         const StmrfParams& p, StmrfDiagnostics* diag = nullptr);

}  // namespace cloudfill
