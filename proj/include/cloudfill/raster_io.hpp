#pragma once

#include <string>
#include <vector>

#include "cloudfill/raster.hpp"

namespace cloudfill {

// RASB container: <stem>.json header + <stem>.rasb payload of f32 little-endian
// values, band-sequential row-major. Paths may be given as the stem, the
// .json file, or the .rasb file.

Raster load_raster(const std::string& path);
void save_raster(const Raster& r, const std::string& path);

/// Masks use the same container with values 0.0 / 1.0.
Mask load_mask(const std::string& path);
void save_mask(const Mask& m, const std::string& path);

struct PgmStretch {
    int band;
    double lo;
    double hi;
};

/// 8-bit per-band min-max stretch, one PGM per band (<stem>_b<k>.pgm).
/// Lossy; for visual inspection only. Returns the stretch bounds used.
std::vector<PgmStretch> export_pgm(const Raster& r, const std::string& stem);

}  // namespace cloudfill
