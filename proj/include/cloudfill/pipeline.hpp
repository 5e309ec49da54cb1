#pragma once

#include <map>
#include <string>

#include "cloudfill/poisson.hpp"
#include "cloudfill/raster.hpp"
#include "cloudfill/starfm.hpp"
#include "cloudfill/stmrf.hpp"
#include "cloudfill/wlr.hpp"

namespace cloudfill {

enum class MethodId { poisson, wlr, stmrf, proposed };

std::string method_name(MethodId m);
MethodId method_from_name(const std::string& name);  // throws on unknown name

/// Per-method parameter bundle used by the uniform dispatch surface; each
/// method reads only its own block.
struct MethodParams {
    SolverOptions solver;
    WlrParams wlr;
    StmrfParams stmrf;
    StarfmParams starfm;
};

struct ReconstructionResult {
    Raster output;
    std::map<std::string, double> diagnostics;
    double wall_time_s = 0.0;
};

/// The proposed method: STARFM fusion for the preliminary prediction over
/// the masked region, then Poisson adjustment against the clear target.
/// Diagnostics carry the solver residual and the pre-adjustment boundary
/// seam magnitude.
ReconstructionResult proposed_reconstruct(const SceneBundle& b, const StarfmParams& sp,
                                          const SolverOptions& po);

/// Uniform dispatch; poisson/wlr/stmrf use only target_hr, mask, ref_hr.
ReconstructionResult reconstruct(MethodId method, const SceneBundle& b,
                                 const MethodParams& params);

}  // namespace cloudfill
