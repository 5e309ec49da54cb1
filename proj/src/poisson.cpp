#include "cloudfill/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cloudfill {

GuidanceField gradient_field(const Raster& src) {
    GuidanceField g;
    g.width = src.width();
    g.height = src.height();
    g.bands = src.bands();
    g.gx.assign(src.values().size(), 0.0);
    g.gy.assign(src.values().size(), 0.0);
    for (int b = 0; b < src.bands(); ++b)
        for (int i = 0; i < src.height(); ++i)
            for (int j = 0; j < src.width(); ++j) {
                const size_t k = g.index(b, i, j);
                if (j + 1 < src.width()) g.gx[k] = src.at(b, i, j + 1) - src.at(b, i, j);
                if (i + 1 < src.height()) g.gy[k] = src.at(b, i + 1, j) - src.at(b, i, j);
            }
    return g;
}

namespace {

// Unknowns of one 4-connected mask component, row-major order.
struct Component {
    std::vector<int> cells;  // row-major linear indices into the grid
};

// Labels interior (non-border) mask cells with component ids; -1 elsewhere.
std::vector<Component> find_components(const Mask& m, std::vector<int>& label,
                                       int* border_dropped) {
    const int w = m.width(), h = m.height();
    label.assign(static_cast<size_t>(w) * h, -1);
    std::vector<uint8_t> interior(label.size(), 0);
    int dropped = 0;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            if (m.at(i, j)) {
                if (i == 0 || j == 0 || i == h - 1 || j == w - 1)
                    ++dropped;
                else
                    interior[m.index(i, j)] = 1;
            }
    if (border_dropped) *border_dropped = dropped;

    std::vector<Component> comps;
    std::vector<int> stack;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const int start = i * w + j;
            if (!interior[start] || label[start] >= 0) continue;
            const int id = static_cast<int>(comps.size());
            comps.push_back({});
            stack.assign(1, start);
            label[start] = id;
            while (!stack.empty()) {
                const int c = stack.back();
                stack.pop_back();
                comps[id].cells.push_back(c);
                const int ci = c / w, cj = c % w;
                const int nb[4] = {c - w, c + w, c - 1, c + 1};
                const bool ok[4] = {ci > 0, ci < h - 1, cj > 0, cj < w - 1};
                for (int k = 0; k < 4; ++k)
                    if (ok[k] && interior[nb[k]] && label[nb[k]] < 0) {
                        label[nb[k]] = id;
                        stack.push_back(nb[k]);
                    }
            }
            std::sort(comps[id].cells.begin(), comps[id].cells.end());
        }
    return comps;
}

// y = A x for the Dirichlet 5-point Laplacian restricted to one component.
// `pos` maps grid index -> unknown index within this component (or -1).
void apply_stencil(const Component& comp, const std::vector<int>& pos, int width,
                   const std::vector<double>& x, std::vector<double>& y) {
    const int n = static_cast<int>(comp.cells.size());
    for (int u = 0; u < n; ++u) {
        const int c = comp.cells[u];
        double v = 4.0 * x[u];
        for (int nb : {c - width, c + width, c - 1, c + 1}) {
            const int p = pos[nb];
            if (p >= 0) v -= x[p];
        }
        y[u] = v;
    }
}

}  // namespace

Raster poisson_solve(const Raster& boundary_src, const Mask& m, const GuidanceField& g,
                     const SolverOptions& opts, PoissonStats* stats) {
    const int w = boundary_src.width(), h = boundary_src.height();
    if (!m.matches(boundary_src)) throw Error("poisson_solve: mask dimension mismatch");
    if (g.width != w || g.height != h || g.bands != boundary_src.bands())
        throw Error("poisson_solve: guidance field dimension mismatch");
    if (opts.tol <= 0.0) throw Error("poisson_solve: tol must be > 0");
    if (m.count_true() == 0) throw Error("poisson_solve: empty mask region");

    std::vector<int> label;
    int dropped = 0;
    std::vector<Component> comps = find_components(m, label, &dropped);
    PoissonStats st;
    st.border_cells_dropped = dropped;
    st.components = static_cast<int>(comps.size());

    Raster out = boundary_src;
    std::vector<int> pos(label.size(), -1);
    for (const Component& comp : comps) {
        const int n = static_cast<int>(comp.cells.size());
        for (int u = 0; u < n; ++u) pos[comp.cells[u]] = u;
        const int max_iters =
            opts.max_iters > 0 ? opts.max_iters : std::min(10 * n, 100000);

        std::vector<double> b(n), x(n), r(n), p(n), ap(n);
        for (int band = 0; band < boundary_src.bands(); ++band) {
            const size_t base = static_cast<size_t>(band) * h * w;
            // RHS: -div g plus Dirichlet contributions from known neighbors.
            // Component cells never touch the image border, so the backward
            // differences below always exist.
            for (int u = 0; u < n; ++u) {
                const int c = comp.cells[u];
                const double div = g.gx[base + c] - g.gx[base + c - 1] +
                                   g.gy[base + c] - g.gy[base + c - w];
                double rhs = -div;
                for (int nb : {c - w, c + w, c - 1, c + 1})
                    if (pos[nb] < 0) rhs += boundary_src.values()[base + nb];
                b[u] = rhs;
            }
            double bnorm = 0.0;
            for (double v : b) bnorm += v * v;
            bnorm = std::sqrt(bnorm);

            std::fill(x.begin(), x.end(), 0.0);
            double rel = 0.0;
            if (bnorm > 0.0) {
                r = b;
                p = r;
                double rr = 0.0;
                for (double v : r) rr += v * v;
                rel = std::sqrt(rr) / bnorm;
                int it = 0;
                while (rel > opts.tol && it < max_iters) {
                    apply_stencil(comp, pos, w, p, ap);
                    double pap = 0.0;
                    for (int u = 0; u < n; ++u) pap += p[u] * ap[u];
                    const double alpha = rr / pap;
                    for (int u = 0; u < n; ++u) {
                        x[u] += alpha * p[u];
                        r[u] -= alpha * ap[u];
                    }
                    double rr_new = 0.0;
                    for (double v : r) rr_new += v * v;
                    const double beta = rr_new / rr;
                    for (int u = 0; u < n; ++u) p[u] = r[u] + beta * p[u];
                    rr = rr_new;
                    rel = std::sqrt(rr) / bnorm;
                    ++it;
                }
                st.total_iters += it;
                if (rel > opts.tol)
                    throw Error("poisson_solve: no convergence in " +
                                std::to_string(max_iters) + " iterations (relative residual " +
                                std::to_string(rel) + ", tol " + std::to_string(opts.tol) + ")");
            }
            st.max_residual = std::max(st.max_residual, rel);
            for (int u = 0; u < n; ++u) out.values()[base + comp.cells[u]] = x[u];
        }
        for (int c : comp.cells) pos[c] = -1;
    }
    if (stats) *stats = st;
    return out;
}

Raster poisson_replace(const Raster& target, const Mask& m, const Raster& reference,
                       const SolverOptions& opts, PoissonStats* stats) {
    if (!target.same_shape(reference))
        throw Error("poisson_replace: target/reference shape mismatch");
    return poisson_solve(target, m, gradient_field(reference), opts, stats);
}

Raster poisson_adjust(const Raster& target, const Mask& m, const Raster& prediction,
                      const SolverOptions& opts, PoissonStats* stats) {
    return poisson_replace(target, m, prediction, opts, stats);
}

}  // namespace cloudfill
