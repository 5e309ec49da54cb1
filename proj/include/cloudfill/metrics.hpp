#pragma once

#include <span>
#include <string>
#include <vector>

#include "cloudfill/raster.hpp"

namespace cloudfill {

struct BandMetrics {
    double cc = 0.0;
    double nmse = 0.0;
    double uiqi = 0.0;
    std::string error;  // non-empty when the band's metrics are undefined
    bool ok() const { return error.empty(); }
};

/// CC / NMSE / UIQI per band plus arithmetic means over the bands that
/// evaluated cleanly.
struct MetricsReport {
    std::vector<BandMetrics> per_band;
    double mean_cc = 0.0;
    double mean_nmse = 0.0;
    double mean_uiqi = 0.0;
    size_t n_cells = 0;  // evaluated cells per band
};

/// Pearson correlation, sample (n-1) normalization. Throws if either
/// sequence is constant.
double cc(std::span<const double> x, std::span<const double> y);

/// Sum of squared errors over sum of squared truth. Throws on all-zero truth.
double nmse(std::span<const double> truth, std::span<const double> est);

/// Universal image quality index, Q = 4*sxy*mx*my / ((sx^2+sy^2)*(mx^2+my^2)),
/// computed globally over the sequence with sample normalization.
/// Throws on zero denominator.
double uiqi(std::span<const double> x, std::span<const double> y);

/// Metrics over exactly the cells where `region` is true, per band, then
/// averaged. Per-band metric failures are recorded in BandMetrics::error and
/// excluded from the means. Throws on shape mismatch or empty region.
MetricsReport evaluate(const Raster& original, const Raster& recon, const Mask& region);

}  // namespace cloudfill
