#include "cloudfill/starfm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cloudfill {

namespace {

void check_params(const StarfmParams& p) {
    if (p.window < 1 || p.window % 2 == 0) throw Error("starfm: window must be odd >= 1");
    if (p.n_classes < 1) throw Error("starfm: n_classes must be >= 1");
    if (p.eps <= 0.0) throw Error("starfm: eps must be > 0");
}

// Sample std of one band over the full image.
double band_std(const Raster& r, int band) {
    const size_t n = r.cells_per_band();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (int i = 0; i < r.height(); ++i)
        for (int j = 0; j < r.width(); ++j) sum += r.at(band, i, j);
    const double mean = sum / static_cast<double>(n);
    double var = 0.0;
    for (int i = 0; i < r.height(); ++i)
        for (int j = 0; j < r.width(); ++j) {
            const double d = r.at(band, i, j) - mean;
            var += d * d;
        }
    return std::sqrt(var / static_cast<double>(n - 1));
}

}  // namespace

Raster starfm_predict(const Raster& hr_t1, const Raster& lr_t1, const Raster& lr_t0,
                      int scale, const StarfmParams& p, const Mask* roi) {
    check_params(p);
    if (!lr_t1.same_shape(lr_t0)) throw Error("starfm: LR rasters must share shape");
    if (lr_t1.bands() != hr_t1.bands()) throw Error("starfm: band count mismatch");
    if (scale < 1 || hr_t1.width() != lr_t1.width() * scale ||
        hr_t1.height() != lr_t1.height() * scale)
        throw Error("starfm: hr dimensions must equal lr dimensions x scale");
    if (roi && !roi->matches(hr_t1)) throw Error("starfm: roi dimension mismatch");

    const Raster m1 = upsample_nearest(lr_t1, scale);
    const Raster m0 = upsample_nearest(lr_t0, scale);
    const int w = hr_t1.width(), h = hr_t1.height();
    const int radius = p.window / 2;

    // Prediction region: roi bounding box padded by the window, else the
    // whole image.
    int r0 = 0, r1 = h - 1, c0 = 0, c1 = w - 1;
    if (roi) {
        r0 = h;
        r1 = -1;
        c0 = w;
        c1 = -1;
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j)
                if (roi->at(i, j)) {
                    r0 = std::min(r0, i);
                    r1 = std::max(r1, i);
                    c0 = std::min(c0, j);
                    c1 = std::max(c1, j);
                }
        if (r1 < 0) return hr_t1;  // empty roi: nothing to predict
        r0 = std::max(0, r0 - p.window);
        r1 = std::min(h - 1, r1 + p.window);
        c0 = std::max(0, c0 - p.window);
        c1 = std::min(w - 1, c1 + p.window);
    }

    Raster out = hr_t1;
    for (int b = 0; b < hr_t1.bands(); ++b) {
        const double thr = 2.0 * band_std(hr_t1, b) / p.n_classes;
        for (int i = r0; i <= r1; ++i)
            for (int j = c0; j <= c1; ++j) {
                const double lx = hr_t1.at(b, i, j);
                double wsum = 0.0, psum = 0.0, last_v = 0.0;
                int n_cand = 0;
                for (int ki = std::max(0, i - radius); ki <= std::min(h - 1, i + radius); ++ki)
                    for (int kj = std::max(0, j - radius); kj <= std::min(w - 1, j + radius);
                         ++kj) {
                        const double lk = hr_t1.at(b, ki, kj);
                        const bool self = ki == i && kj == j;
                        if (!self && std::abs(lk - lx) > thr) continue;
                        const double s = std::abs(lk - m1.at(b, ki, kj)) + p.eps;
                        const double t = std::abs(m0.at(b, ki, kj) - m1.at(b, ki, kj)) + p.eps;
                        double dfac = 1.0;
                        if (radius > 0) {
                            const double di = ki - i, dj = kj - j;
                            dfac = 1.0 + std::sqrt(di * di + dj * dj) / radius;
                        }
                        const double wk = 1.0 / (s * t * dfac);
                        last_v = lk + m0.at(b, ki, kj) - m1.at(b, ki, kj);
                        wsum += wk;
                        psum += wk * last_v;
                        ++n_cand;
                    }
                // Candidate set is never empty (self-inclusion); a lone
                // candidate passes through without a rounding round-trip.
                out.at(b, i, j) = n_cand == 1 ? last_v : psum / wsum;
            }
    }
    return out;
}

}  // namespace cloudfill
