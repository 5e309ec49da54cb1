#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cloudfill/cloud_sim.hpp"
#include "cloudfill/metrics.hpp"
#include "cloudfill/pipeline.hpp"
#include "cloudfill/raster.hpp"

namespace cloudfill {

/// Per-band affine (gain, offset) applied to simulated LR rasters to model
/// cross-sensor radiometric inconsistency. Scalar entries broadcast.
struct LrBias {
    std::vector<double> gain{1.0};
    std::vector<double> offset{0.0};

    bool is_identity() const;
    double band_gain(int b) const { return gain[gain.size() == 1 ? 0 : b]; }
    double band_offset(int b) const { return offset[offset.size() == 1 ? 0 : b]; }
};

struct MethodSpec {
    MethodId id;
    MethodParams params;
};

struct ExperimentConfig {
    std::string target_path;           // clean HR truth at t0
    std::string ref_path;              // clear HR at t1
    int scale = 8;
    std::optional<CloudShapeParams> mask_params;  // exactly one of these two
    std::optional<std::string> mask_path;
    bool lr_from_files = false;
    std::string ref_lr_path;           // when lr_from_files
    std::string target_lr_path;
    LrBias lr_bias;
    std::vector<MethodSpec> methods;
    std::string out_dir;
};

/// Parses the JSON config documented in the README; unknown keys are errors.
ExperimentConfig parse_config(const std::string& path);

struct MethodRow {
    std::string method;
    MetricsReport report;
    std::map<std::string, double> diagnostics;
    double wall_time_s = 0.0;
    std::string error;  // non-empty when the method failed
    bool ok() const { return error.empty(); }
};

struct ExperimentReport {
    std::vector<MethodRow> rows;
    size_t mask_cells = 0;
    bool all_ok() const;
};

/// Loads/validates inputs and assembles the bundle; in derive mode the LR
/// rasters are block-mean downsamples of the HR truth with lr_bias applied.
/// Returns the bundle plus the clean original for evaluation.
std::pair<SceneBundle, Raster> build_scene(const ExperimentConfig& cfg);

/// Runs every configured method, evaluates over the mask, and writes
/// <out_dir>/{metrics.csv, report.json, <method>.rasb, <method>_b*.pgm}.
/// Method failures are recorded per row; the remaining methods still run.
/// Timing is reported on stdout only, never in the files, so reruns are
/// byte-identical.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// metrics.csv contents for a report (full precision; the stdout table uses
/// 4 decimals).
std::string report_csv(const ExperimentReport& rep);
std::string report_json(const ExperimentConfig& cfg, const ExperimentReport& rep);
std::string report_table(const ExperimentReport& rep);

}  // namespace cloudfill
