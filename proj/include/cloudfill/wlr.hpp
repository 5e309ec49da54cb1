#pragma once

#include "cloudfill/raster.hpp"

namespace cloudfill {

struct WlrParams {
    int initial_window = 21;  // odd
    int max_window = 61;      // odd, >= initial_window
    int min_samples = 20;     // >= 3
    int n_similar = 40;       // >= min_samples
};

struct WlrDiagnostics {
    size_t fallback_count = 0;  // pixels filled by inverse-distance mean
    size_t starved_count = 0;   // pixels with < min_samples within max_window
};

/// Per-pixel per-band weighted affine regression from reference to target
/// over clear samples in a growing window; missing pixels get a*ref+c,
/// clear pixels pass through exactly. Starved or degenerate pixels fall back
/// to an inverse-distance-weighted mean of the sampled target values.
Raster wlr_reconstruct(const Raster& target, const Mask& m, const Raster& reference,
                       const WlrParams& p, WlrDiagnostics* diag = nullptr);

}  // namespace cloudfill
