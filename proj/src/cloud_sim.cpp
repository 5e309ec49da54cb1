#include "cloudfill/cloud_sim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cloudfill {

uint64_t splitmix64_next(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

// 3x3 box blur with edge clamping, applied in place via a scratch buffer.
void box_blur(std::vector<double>& grid, int width, int height) {
    std::vector<double> out(grid.size());
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) {
            double sum = 0.0;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    const int ci = std::clamp(i + di, 0, height - 1);
                    const int cj = std::clamp(j + dj, 0, width - 1);
                    sum += grid[static_cast<size_t>(ci) * width + cj];
                }
            out[static_cast<size_t>(i) * width + j] = sum / 9.0;
        }
    grid.swap(out);
}

// Drops 4-connected true components smaller than 4 cells.
void prune_small_components(Mask& m) {
    const int w = m.width(), h = m.height();
    std::vector<uint8_t> seen(static_cast<size_t>(w) * h, 0);
    std::vector<size_t> stack, component;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const size_t start = m.index(i, j);
            if (!m.at(i, j) || seen[start]) continue;
            stack.assign(1, start);
            component.clear();
            seen[start] = 1;
            while (!stack.empty()) {
                const size_t c = stack.back();
                stack.pop_back();
                component.push_back(c);
                const int ci = static_cast<int>(c) / w, cj = static_cast<int>(c) % w;
                const int ni[4] = {ci - 1, ci + 1, ci, ci};
                const int nj[4] = {cj, cj, cj - 1, cj + 1};
                for (int k = 0; k < 4; ++k) {
                    if (ni[k] < 0 || ni[k] >= h || nj[k] < 0 || nj[k] >= w) continue;
                    const size_t n = m.index(ni[k], nj[k]);
                    if (m.at(ni[k], nj[k]) && !seen[n]) {
                        seen[n] = 1;
                        stack.push_back(n);
                    }
                }
            }
            if (component.size() < 4)
                for (size_t c : component)
                    m.set(static_cast<int>(c) / w, static_cast<int>(c) % w, false);
        }
}

// Border cells stay clear: simulated clouds never cross the frame edge, so
// every masked cell has a proper Dirichlet boundary for the Poisson methods.
Mask threshold_mask(const std::vector<double>& noise, int width, int height, double thr) {
    Mask m(width, height);
    for (int i = 1; i < height - 1; ++i)
        for (int j = 1; j < width - 1; ++j)
            m.set(i, j, noise[static_cast<size_t>(i) * width + j] > thr);
    prune_small_components(m);
    return m;
}

}  // namespace

Mask simulate_mask(int width, int height, const CloudShapeParams& p) {
    if (width < 8 || height < 8)
        throw Error("simulate_mask: width and height must be >= 8");
    if (p.coverage_fraction < 0.01 || p.coverage_fraction > 0.9)
        throw Error("simulate_mask: coverage_fraction outside [0.01, 0.9]");
    if (p.smoothness < 1) throw Error("simulate_mask: smoothness must be >= 1");

    const size_t n = static_cast<size_t>(width) * height;
    std::vector<double> noise(n);
    uint64_t state = p.seed;
    for (size_t i = 0; i < n; ++i)
        noise[i] = static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
    for (int pass = 0; pass < p.smoothness; ++pass) box_blur(noise, width, height);

    auto [lo_it, hi_it] = std::minmax_element(noise.begin(), noise.end());
    double lo = *lo_it, hi = *hi_it;
    // Bisection on the threshold; pruning makes coverage non-monotone in
    // detail but monotone enough for the +-2pp tolerance.
    Mask best(width, height);
    double best_err = 1e9;
    for (int iter = 0; iter < 48; ++iter) {
        const double thr = 0.5 * (lo + hi);
        Mask m = threshold_mask(noise, width, height, thr);
        const double cov = static_cast<double>(m.count_true()) / static_cast<double>(n);
        const double err = std::abs(cov - p.coverage_fraction);
        if (err < best_err) {
            best_err = err;
            best = m;
        }
        if (err <= 0.005) break;
        if (cov > p.coverage_fraction)
            lo = thr;
        else
            hi = thr;
    }
    if (best_err > 0.02)
        throw Error("simulate_mask: could not reach coverage " +
                    std::to_string(p.coverage_fraction) + " (best off by " +
                    std::to_string(best_err) + ")");
    return best;
}

Raster apply_mask(const Raster& r, const Mask& m, double fill) {
    if (!m.matches(r)) throw Error("apply_mask: dimension mismatch");
    Raster out = r;
    for (int b = 0; b < r.bands(); ++b)
        for (int i = 0; i < r.height(); ++i)
            for (int j = 0; j < r.width(); ++j)
                if (m.at(i, j)) out.at(b, i, j) = fill;
    return out;
}

}  // namespace cloudfill
