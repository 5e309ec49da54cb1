#include "cloudfill/pipeline.hpp"

#include <chrono>
#include <cmath>

namespace cloudfill {

std::string method_name(MethodId m) {
    switch (m) {
        case MethodId::poisson: return "poisson";
        case MethodId::wlr: return "wlr";
        case MethodId::stmrf: return "stmrf";
        case MethodId::proposed: return "proposed";
    }
    return "?";
}

MethodId method_from_name(const std::string& name) {
    if (name == "poisson") return MethodId::poisson;
    if (name == "wlr") return MethodId::wlr;
    if (name == "stmrf") return MethodId::stmrf;
    if (name == "proposed") return MethodId::proposed;
    throw Error("unknown method: " + name);
}

namespace {

// Max |prediction - target| over clear cells 4-adjacent to the masked region.
double boundary_seam(const Raster& target, const Mask& m, const Raster& prediction) {
    const int w = target.width(), h = target.height();
    double seam = 0.0;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            if (m.at(i, j)) continue;
            const bool adj = (i > 0 && m.at(i - 1, j)) || (i < h - 1 && m.at(i + 1, j)) ||
                             (j > 0 && m.at(i, j - 1)) || (j < w - 1 && m.at(i, j + 1));
            if (!adj) continue;
            for (int b = 0; b < target.bands(); ++b)
                seam = std::max(seam, std::abs(prediction.at(b, i, j) - target.at(b, i, j)));
        }
    return seam;
}

}  // namespace

ReconstructionResult proposed_reconstruct(const SceneBundle& b, const StarfmParams& sp,
                                          const SolverOptions& po) {
    auto errs = validate_bundle(b);
    if (!errs.empty()) throw Error("proposed_reconstruct: invalid bundle: " + errs.front());
    if (b.mask.count_true() == 0) throw Error("proposed_reconstruct: empty mask region");

    const auto t_start = std::chrono::steady_clock::now();
    Raster prediction = starfm_predict(b.ref_hr, b.ref_lr, b.target_lr, b.scale, sp, &b.mask);
    PoissonStats ps;
    Raster output = poisson_adjust(b.target_hr, b.mask, prediction, po, &ps);
    const auto t_end = std::chrono::steady_clock::now();

    ReconstructionResult res{std::move(output), {}, 0.0};
    res.diagnostics["residual"] = ps.max_residual;
    res.diagnostics["border_cells_dropped"] = ps.border_cells_dropped;
    res.diagnostics["seam_magnitude"] = boundary_seam(b.target_hr, b.mask, prediction);
    res.diagnostics["fused_cells"] = static_cast<double>(b.mask.count_true());
    res.wall_time_s = std::chrono::duration<double>(t_end - t_start).count();
    return res;
}

ReconstructionResult reconstruct(MethodId method, const SceneBundle& b,
                                 const MethodParams& params) {
    if (method == MethodId::proposed)
        return proposed_reconstruct(b, params.starfm, params.solver);

    if (!b.mask.matches(b.target_hr) || !b.target_hr.same_shape(b.ref_hr))
        throw Error("reconstruct: target_hr / ref_hr / mask shapes must agree");

    const auto t_start = std::chrono::steady_clock::now();
    ReconstructionResult res{b.target_hr, {}, 0.0};
    switch (method) {
        case MethodId::poisson: {
            PoissonStats ps;
            res.output = poisson_replace(b.target_hr, b.mask, b.ref_hr, params.solver, &ps);
            res.diagnostics["residual"] = ps.max_residual;
            res.diagnostics["border_cells_dropped"] = ps.border_cells_dropped;
            break;
        }
        case MethodId::wlr: {
            WlrDiagnostics wd;
            res.output = wlr_reconstruct(b.target_hr, b.mask, b.ref_hr, params.wlr, &wd);
            res.diagnostics["fallback_count"] = static_cast<double>(wd.fallback_count);
            res.diagnostics["starved_count"] = static_cast<double>(wd.starved_count);
            break;
        }
        case MethodId::stmrf: {
            StmrfDiagnostics sd;
            res.output = stmrf_reconstruct(b.target_hr, b.mask, b.ref_hr, params.stmrf, &sd);
            res.diagnostics["final_energy"] = sd.final_energy;
            res.diagnostics["icm_sweeps"] = static_cast<double>(sd.energy_trace.size() - 1);
            break;
        }
        default: break;
    }
    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

}  // namespace cloudfill
