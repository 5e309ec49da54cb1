#include "cloudfill/stmrf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cloudfill {

namespace {

struct Candidate {
    int donor;    // row-major linear index of the donor pixel
    double cost;  // unary patch-matching cost
};

// Mean squared reference-patch difference between pixels q and d. Offsets
// where either patch cell is off-image are skipped; q-side cells inside the
// masked region are skipped too, except the center (its reference value is
// valid, the reference being cloud-free).
double patch_cost(const Raster& ref, const Mask& m, int qi, int qj, int di, int dj,
                  int radius) {
    const int w = ref.width(), h = ref.height();
    double sum = 0.0;
    int count = 0;
    for (int oi = -radius; oi <= radius; ++oi)
        for (int oj = -radius; oj <= radius; ++oj) {
            const int ai = qi + oi, aj = qj + oj;
            const int bi = di + oi, bj = dj + oj;
            if (ai < 0 || ai >= h || aj < 0 || aj >= w) continue;
            if (bi < 0 || bi >= h || bj < 0 || bj >= w) continue;
            if ((oi != 0 || oj != 0) && m.at(ai, aj)) continue;
            for (int b = 0; b < ref.bands(); ++b) {
                const double dv = ref.at(b, ai, aj) - ref.at(b, bi, bj);
                sum += dv * dv;
                ++count;
            }
        }
    return count > 0 ? sum / count : std::numeric_limits<double>::infinity();
}

// Truncated-linear penalty on the difference of donor offsets.
double pairwise(int donor_a, int qa, int donor_b, int qb, int width) {
    const int oa_i = donor_a / width - qa / width, oa_j = donor_a % width - qa % width;
    const int ob_i = donor_b / width - qb / width, ob_j = donor_b % width - qb % width;
    const double l1 = std::abs(oa_i - ob_i) + std::abs(oa_j - ob_j);
    return std::min(l1, 4.0);
}

}  // namespace

Raster stmrf_reconstruct(const Raster& target, const Mask& m, const Raster& reference,
                         const StmrfParams& p, StmrfDiagnostics* diag) {
    if (!target.same_shape(reference)) throw Error("stmrf: target/reference shape mismatch");
    if (!m.matches(target)) throw Error("stmrf: mask dimension mismatch");
    if (p.patch_radius < 0 || p.search_stride < 1 || p.lambda_smooth < 0.0 ||
        p.icm_iters < 0 || p.candidate_count < 1)
        throw Error("stmrf: invalid parameters");

    const int w = target.width(), h = target.height();
    std::vector<int> missing, donors;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            if (m.at(i, j))
                missing.push_back(i * w + j);
            else if (i % p.search_stride == 0 && j % p.search_stride == 0)
                donors.push_back(i * w + j);
        }
    if (missing.empty()) {
        if (diag) *diag = {0.0, {0.0}};
        return target;
    }
    if (donors.empty()) throw Error("stmrf: clear region empty");

    // Top-K candidate donors per missing pixel, by unary cost then donor index.
    const size_t k = std::min<size_t>(p.candidate_count, donors.size());
    std::vector<std::vector<Candidate>> cands(missing.size());
    for (size_t qi = 0; qi < missing.size(); ++qi) {
        const int q = missing[qi];
        std::vector<Candidate>& cs = cands[qi];
        cs.reserve(donors.size());
        for (int d : donors)
            cs.push_back({d, patch_cost(reference, m, q / w, q % w, d / w, d % w,
                                        p.patch_radius)});
        std::partial_sort(cs.begin(), cs.begin() + k, cs.end(),
                          [](const Candidate& a, const Candidate& b) {
                              return a.cost != b.cost ? a.cost < b.cost : a.donor < b.donor;
                          });
        cs.resize(k);
    }

    // Map from grid index to missing-pixel slot, for neighbor lookups.
    std::vector<int> slot(static_cast<size_t>(w) * h, -1);
    for (size_t qi = 0; qi < missing.size(); ++qi) slot[missing[qi]] = static_cast<int>(qi);

    std::vector<int> label(missing.size(), 0);  // candidate index per pixel

    auto neighbor_slots = [&](int q, int out[4]) {
        const int i = q / w, j = q % w;
        int n = 0;
        if (i > 0 && slot[q - w] >= 0) out[n++] = slot[q - w];
        if (i < h - 1 && slot[q + w] >= 0) out[n++] = slot[q + w];
        if (j > 0 && slot[q - 1] >= 0) out[n++] = slot[q - 1];
        if (j < w - 1 && slot[q + 1] >= 0) out[n++] = slot[q + 1];
        return n;
    };

    auto total_energy = [&]() {
        double e = 0.0;
        for (size_t qi = 0; qi < missing.size(); ++qi) {
            e += cands[qi][label[qi]].cost;
            const int q = missing[qi];
            const int i = q / w, j = q % w;
            // Count each edge once: right and down neighbors only.
            for (int nq : {j < w - 1 ? q + 1 : -1, i < h - 1 ? q + w : -1}) {
                if (nq < 0 || slot[nq] < 0) continue;
                const size_t ni = static_cast<size_t>(slot[nq]);
                e += p.lambda_smooth *
                     pairwise(cands[qi][label[qi]].donor, q, cands[ni][label[ni]].donor, nq, w);
            }
        }
        return e;
    };

    StmrfDiagnostics d;
    d.energy_trace.push_back(total_energy());

    for (int sweep = 0; sweep < p.icm_iters; ++sweep) {
        bool changed = false;
        for (size_t qi = 0; qi < missing.size(); ++qi) {
            const int q = missing[qi];
            int nbs[4];
            const int nn = neighbor_slots(q, nbs);
            int best = label[qi];
            double best_e = std::numeric_limits<double>::infinity();
            for (size_t ci = 0; ci < cands[qi].size(); ++ci) {
                double e = cands[qi][ci].cost;
                for (int t = 0; t < nn; ++t) {
                    const int ni = nbs[t];
                    e += p.lambda_smooth * pairwise(cands[qi][ci].donor, q,
                                                    cands[ni][label[ni]].donor, missing[ni], w);
                }
                if (e < best_e) {
                    best_e = e;
                    best = static_cast<int>(ci);
                }
            }
            if (best != label[qi]) {
                label[qi] = best;
                changed = true;
            }
        }
        d.energy_trace.push_back(total_energy());
        if (!changed) break;
    }
    d.final_energy = d.energy_trace.back();

    Raster out = target;
    for (size_t qi = 0; qi < missing.size(); ++qi) {
        const int q = missing[qi], donor = cands[qi][label[qi]].donor;
        for (int b = 0; b < target.bands(); ++b)
            out.at(b, q / w, q % w) = target.at(b, donor / w, donor % w);
    }
    if (diag) *diag = d;
    return out;
}

}  // namespace cloudfill
