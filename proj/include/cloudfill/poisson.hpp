#pragma once

#include <vector>

#include "cloudfill/raster.hpp"

namespace cloudfill {

/// Forward-difference gradient components per band, same grid as the source.
struct GuidanceField {
    int width = 0;
    int height = 0;
    int bands = 0;
    std::vector<double> gx;  // band-sequential row-major, like Raster
    std::vector<double> gy;

    size_t index(int band, int row, int col) const {
        return (static_cast<size_t>(band) * height + row) * width + col;
    }
};

struct SolverOptions {
    double tol = 1e-8;   // relative residual threshold
    int max_iters = 0;   // 0 = auto: min(10*|Omega|, 100000)
};

struct PoissonStats {
    double max_residual = 0.0;      // worst final relative residual
    int total_iters = 0;            // CG iterations summed over bands/components
    int border_cells_dropped = 0;   // Omega cells on the image border, treated as known
    int components = 0;             // 4-connected components solved
};

/// gx(i,j) = src(i,j+1) - src(i,j); gy(i,j) = src(i+1,j) - src(i,j);
/// last column / row padded with zero.
GuidanceField gradient_field(const Raster& src);

/// Solves the discrete Poisson equation over the masked region with Dirichlet
/// values taken from boundary_src; cells outside the region pass through
/// bit-exactly. Conjugate gradient per band per 4-connected component,
/// row-major unknown order, sequential reductions (bitwise deterministic).
/// Omega cells on the image border are dropped to the known set first.
Raster poisson_solve(const Raster& boundary_src, const Mask& m, const GuidanceField& g,
                     const SolverOptions& opts, PoissonStats* stats = nullptr);

/// Clones `reference` texture into the masked region while matching the
/// target's boundary brightness (guidance = gradient_field(reference)).
Raster poisson_replace(const Raster& target, const Mask& m, const Raster& reference,
                       const SolverOptions& opts, PoissonStats* stats = nullptr);

/// Adjusts a fusion prediction to agree with the clear part of the target;
/// identical construction to poisson_replace with reference = prediction.
Raster poisson_adjust(const Raster& target, const Mask& m, const Raster& prediction,
                      const SolverOptions& opts, PoissonStats* stats = nullptr);

}  // namespace cloudfill
