#include "cloudfill/metrics.hpp"

#include <cmath>

namespace cloudfill {

namespace {

struct Moments {
    double mean_x, mean_y, var_x, var_y, cov;  // sample (n-1) normalization
};

Moments moments(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    double sx = 0.0, sy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double vx = 0.0, vy = 0.0, cov = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        vx += dx * dx;
        vy += dy * dy;
        cov += dx * dy;
    }
    const double inv = 1.0 / static_cast<double>(n - 1);
    return {mx, my, vx * inv, vy * inv, cov * inv};
}

}  // namespace

double cc(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("cc: length mismatch");
    if (x.size() < 2) throw Error("cc: need at least 2 samples");
    const Moments m = moments(x, y);
    const double denom = std::sqrt(m.var_x * m.var_y);
    if (denom == 0.0) throw Error("cc: undefined for constant sequence");
    return m.cov / denom;
}

double nmse(std::span<const double> truth, std::span<const double> est) {
    if (truth.size() != est.size()) throw Error("nmse: length mismatch");
    if (truth.empty()) throw Error("nmse: empty input");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < truth.size(); ++i) {
        const double d = truth[i] - est[i];
        num += d * d;
        den += truth[i] * truth[i];
    }
    if (den == 0.0) throw Error("nmse: all-zero truth, normalization undefined");
    return num / den;
}

double uiqi(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("uiqi: length mismatch");
    if (x.size() < 2) throw Error("uiqi: need at least 2 samples");
    const Moments m = moments(x, y);
    const double denom = (m.var_x + m.var_y) * (m.mean_x * m.mean_x + m.mean_y * m.mean_y);
    if (denom == 0.0) throw Error("uiqi: zero denominator");
    return 4.0 * m.cov * m.mean_x * m.mean_y / denom;
}

MetricsReport evaluate(const Raster& original, const Raster& recon, const Mask& region) {
    if (!original.same_shape(recon)) throw Error("evaluate: raster shape mismatch");
    if (!region.matches(original)) throw Error("evaluate: mask dimension mismatch");
    const size_t n = region.count_true();
    if (n == 0) throw Error("evaluate: empty region");

    MetricsReport rep;
    rep.n_cells = n;
    std::vector<double> x, y;
    x.reserve(n);
    y.reserve(n);
    int ok_bands = 0;
    for (int b = 0; b < original.bands(); ++b) {
        x.clear();
        y.clear();
        for (int i = 0; i < original.height(); ++i)
            for (int j = 0; j < original.width(); ++j)
                if (region.at(i, j)) {
                    x.push_back(original.at(b, i, j));
                    y.push_back(recon.at(b, i, j));
                }
        BandMetrics bm;
        try {
            bm.cc = cc(x, y);
            bm.nmse = nmse(x, y);
            bm.uiqi = uiqi(x, y);
        } catch (const Error& e) {
            bm.error = e.what();
        }
        if (bm.ok()) {
            rep.mean_cc += bm.cc;
            rep.mean_nmse += bm.nmse;
            rep.mean_uiqi += bm.uiqi;
            ++ok_bands;
        }
        rep.per_band.push_back(std::move(bm));
    }
    if (ok_bands > 0) {
        rep.mean_cc /= ok_bands;
        rep.mean_nmse /= ok_bands;
        rep.mean_uiqi /= ok_bands;
    }
    return rep;
}

}  // namespace cloudfill
