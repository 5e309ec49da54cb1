#pragma once

#include "cloudfill/raster.hpp"

namespace cloudfill {

struct StarfmParams {
    int window = 31;    // odd, >= 1
    int n_classes = 4;  // spectral-similarity threshold divisor
    double eps = 1e-6;  // guard against zero S/T differences
};

/// Single-pair spatiotemporal fusion: predicts the HR image at t0 from the
/// HR image at t1 and the LR pair (t1, t0). LR rasters are co-registered by
/// nearest-neighbor upsampling. When `roi` is given, the prediction is
/// computed only over roi's bounding box padded by the window; other pixels
/// copy hr_t1.
Raster starfm_predict(const Raster& hr_t1, const Raster& lr_t1, const Raster& lr_t0,
                      int scale, const StarfmParams& p, const Mask* roi = nullptr);

}  // namespace cloudfill
