#include "cloudfill/wlr.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cloudfill {

namespace {

struct Sample {
    int row, col;
    double ref;       // reference value at the sample
    double tgt;       // target value at the sample
    double sim;       // |ref(s) - ref(q)|
    double dist;      // Euclidean cell distance to q
    size_t order;     // row-major index, the deterministic tie-breaker
};

void check_params(const WlrParams& p) {
    if (p.initial_window % 2 == 0 || p.max_window % 2 == 0)
        throw Error("wlr: windows must be odd");
    if (p.initial_window > p.max_window)
        throw Error("wlr: initial_window must be <= max_window");
    if (p.min_samples < 3) throw Error("wlr: min_samples must be >= 3");
    if (p.n_similar < p.min_samples) throw Error("wlr: n_similar must be >= min_samples");
}

}  // namespace

Raster wlr_reconstruct(const Raster& target, const Mask& m, const Raster& reference,
                       const WlrParams& p, WlrDiagnostics* diag) {
    if (!target.same_shape(reference)) throw Error("wlr: target/reference shape mismatch");
    if (!m.matches(target)) throw Error("wlr: mask dimension mismatch");
    check_params(p);

    const int w = target.width(), h = target.height();
    WlrDiagnostics d;

    // Per-band std of reference over clear cells, guarded near zero.
    std::vector<double> sigma(target.bands(), 1.0);
    {
        size_t n_valid = 0;
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j)
                if (!m.at(i, j)) ++n_valid;
        if (n_valid >= 2) {
            for (int b = 0; b < target.bands(); ++b) {
                double sum = 0.0;
                for (int i = 0; i < h; ++i)
                    for (int j = 0; j < w; ++j)
                        if (!m.at(i, j)) sum += reference.at(b, i, j);
                const double mean = sum / static_cast<double>(n_valid);
                double var = 0.0;
                for (int i = 0; i < h; ++i)
                    for (int j = 0; j < w; ++j)
                        if (!m.at(i, j)) {
                            const double dv = reference.at(b, i, j) - mean;
                            var += dv * dv;
                        }
                const double s = std::sqrt(var / static_cast<double>(n_valid - 1));
                sigma[b] = s < 1e-12 ? 1.0 : s;
            }
        }
    }

    Raster out = target;
    std::vector<Sample> samples;
    for (int qi = 0; qi < h; ++qi)
        for (int qj = 0; qj < w; ++qj) {
            if (!m.at(qi, qj)) continue;
            // Grow the window until enough clear samples are found.
            int radius = p.initial_window / 2;
            const int max_radius = p.max_window / 2;
            size_t found = 0;
            for (;; ++radius) {
                found = 0;
                const int i0 = std::max(0, qi - radius), i1 = std::min(h - 1, qi + radius);
                const int j0 = std::max(0, qj - radius), j1 = std::min(w - 1, qj + radius);
                for (int i = i0; i <= i1; ++i)
                    for (int j = j0; j <= j1; ++j)
                        if (!m.at(i, j)) ++found;
                if (found >= static_cast<size_t>(p.min_samples) || radius >= max_radius) break;
            }
            const bool starved = found < static_cast<size_t>(p.min_samples);
            if (starved) ++d.starved_count;
            if (found == 0) {
                ++d.fallback_count;
                continue;  // nothing to interpolate from; leave the fill value
            }

            for (int b = 0; b < target.bands(); ++b) {
                const double ref_q = reference.at(b, qi, qj);
                samples.clear();
                const int i0 = std::max(0, qi - radius), i1 = std::min(h - 1, qi + radius);
                const int j0 = std::max(0, qj - radius), j1 = std::min(w - 1, qj + radius);
                for (int i = i0; i <= i1; ++i)
                    for (int j = j0; j <= j1; ++j)
                        if (!m.at(i, j)) {
                            Sample s;
                            s.row = i;
                            s.col = j;
                            s.ref = reference.at(b, i, j);
                            s.tgt = target.at(b, i, j);
                            s.sim = std::abs(s.ref - ref_q);
                            const double di = i - qi, dj = j - qj;
                            s.dist = std::sqrt(di * di + dj * dj);
                            s.order = static_cast<size_t>(i) * w + j;
                            samples.push_back(s);
                        }
                if (samples.size() > static_cast<size_t>(p.n_similar)) {
                    std::nth_element(samples.begin(), samples.begin() + p.n_similar,
                                     samples.end(), [](const Sample& a, const Sample& b) {
                                         return a.sim != b.sim ? a.sim < b.sim
                                                               : a.order < b.order;
                                     });
                    samples.resize(p.n_similar);
                }

                double sw = 0.0, swr = 0.0, swt = 0.0, swrr = 0.0, swrt = 0.0;
                double fallback_num = 0.0, fallback_den = 0.0;
                for (const Sample& s : samples) {
                    const double wgt = 1.0 / (s.dist * (1.0 + s.sim / sigma[b]));
                    sw += wgt;
                    swr += wgt * s.ref;
                    swt += wgt * s.tgt;
                    swrr += wgt * s.ref * s.ref;
                    swrt += wgt * s.ref * s.tgt;
                    const double idw = 1.0 / s.dist;
                    fallback_num += idw * s.tgt;
                    fallback_den += idw;
                }
                // Weighted normal equations for target ~ a*ref + c.
                const double det = sw * swrr - swr * swr;
                const double ref_var = swrr / sw - (swr / sw) * (swr / sw);
                if (starved || ref_var < 1e-12 || det == 0.0) {
                    out.at(b, qi, qj) = fallback_num / fallback_den;
                    if (b == 0) ++d.fallback_count;
                } else {
                    const double a = (sw * swrt - swr * swt) / det;
                    const double c = (swrr * swt - swr * swrt) / det;
                    out.at(b, qi, qj) = a * ref_q + c;
                }
            }
        }
    if (diag) *diag = d;
    return out;
}

}  // namespace cloudfill
