#pragma once

// Dense direct solve of the Dirichlet 5-point stencil system over the masked
// region, via Gaussian elimination with partial pivoting. Test-only oracle,
// independent of the CG path.

#include <cmath>
#include <vector>

#include "cloudfill/poisson.hpp"
#include "cloudfill/raster.hpp"

namespace cloudfill::test {

inline Raster dense_poisson_solve(const Raster& boundary_src, const Mask& m,
                                  const GuidanceField& g) {
    const int w = boundary_src.width(), h = boundary_src.height();
    std::vector<int> unknown;  // row-major linear indices, interior mask cells
    std::vector<int> pos(static_cast<size_t>(w) * h, -1);
    for (int i = 1; i < h - 1; ++i)
        for (int j = 1; j < w - 1; ++j)
            if (m.at(i, j)) {
                pos[static_cast<size_t>(i) * w + j] = static_cast<int>(unknown.size());
                unknown.push_back(i * w + j);
            }
    const int n = static_cast<int>(unknown.size());
    Raster out = boundary_src;
    if (n == 0) return out;

    for (int band = 0; band < boundary_src.bands(); ++band) {
        const size_t base = static_cast<size_t>(band) * h * w;
        std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
        for (int u = 0; u < n; ++u) {
            const int c = unknown[u];
            a[u][u] = 4.0;
            double rhs = -(g.gx[base + c] - g.gx[base + c - 1] + g.gy[base + c] -
                           g.gy[base + c - w]);
            for (int nb : {c - w, c + w, c - 1, c + 1}) {
                if (pos[nb] >= 0)
                    a[u][pos[nb]] = -1.0;
                else
                    rhs += boundary_src.values()[base + nb];
            }
            a[u][n] = rhs;
        }
        // Gaussian elimination, partial pivoting.
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            std::swap(a[col], a[piv]);
            for (int r = 0; r < n; ++r) {
                if (r == col || a[r][col] == 0.0) continue;
                const double f = a[r][col] / a[col][col];
                for (int k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
            }
        }
        for (int u = 0; u < n; ++u)
            out.values()[base + unknown[u]] = a[u][n] / a[u][u];
    }
    return out;
}

}  // namespace cloudfill::test
