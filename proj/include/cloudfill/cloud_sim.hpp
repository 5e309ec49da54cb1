#pragma once

#include <cstdint>

#include "cloudfill/raster.hpp"

namespace cloudfill {

/// Synthetic cloud shape knobs. Masks are reproducible: the generator is
/// pinned to splitmix64 so identical parameters give identical masks on
/// every platform.
struct CloudShapeParams {
    double coverage_fraction = 0.25;  // in [0.01, 0.9]
    int smoothness = 3;               // box-blur passes, >= 1
    uint64_t seed = 0;
};

/// Thresholded smoothed noise: seeded uniform noise, `smoothness` 3x3 box
/// blurs, then a bisection on the threshold until achieved coverage is within
/// +-2 percentage points of the target. Components smaller than 4 cells are
/// dropped so the region stays blob-like.
Mask simulate_mask(int width, int height, const CloudShapeParams& p);

/// Overwrites masked cells with `fill` in every band; clear cells untouched.
Raster apply_mask(const Raster& r, const Mask& m, double fill);

/// splitmix64 step; the pinned RNG behind simulate_mask, exposed for tests.
uint64_t splitmix64_next(uint64_t& state);

}  // namespace cloudfill
