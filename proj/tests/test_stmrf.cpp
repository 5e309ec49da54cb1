#include <doctest.h>

#include <cmath>

#include "cloudfill/stmrf.hpp"
#include "test_util.hpp"

using namespace cloudfill;

namespace {

// 2-periodic tile pattern.
Raster periodic_tiles(int w, int h, int bands) {
    Raster r(w, h, bands);
    const double vals[2][2] = {{0.2, 0.8}, {0.5, 0.3}};
    for (int b = 0; b < bands; ++b)
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) r.at(b, i, j) = vals[i % 2][j % 2] + 0.05 * b;
    return r;
}

}  // namespace

TEST_CASE("periodic tile: exact recovery at zero energy") {
    Raster ref = periodic_tiles(16, 16, 1);
    Raster target = ref;
    Mask m(16, 16);
    for (int i = 6; i < 8; ++i)
        for (int j = 6; j < 8; ++j) m.set(i, j, true);
    StmrfDiagnostics d;
    Raster out = stmrf_reconstruct(apply_mask(target, m, 1.0), m, ref, {}, &d);
    CHECK(d.final_energy == 0.0);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) CHECK(out.at(0, i, j) == target.at(0, i, j));
}

TEST_CASE("empty mask passes through") {
    uint64_t st = 61;
    Raster target = test::random_raster(12, 12, 2, st);
    Raster ref = test::random_raster(12, 12, 2, st);
    Raster out = stmrf_reconstruct(target, Mask(12, 12), ref, {});
    CHECK(out.values() == target.values());
}

TEST_CASE("lambda=0, radius=0 equals brute-force nearest reference value") {
    uint64_t st = 62;
    Raster target = test::random_raster(16, 16, 1, st);
    Raster ref = test::random_raster(16, 16, 1, st);
    Mask m = test::random_mask(16, 16, 0.2, st);
    StmrfParams p{0, 1, 0.0, 5, 10};
    Raster out = stmrf_reconstruct(target, m, ref, p);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            if (!m.at(i, j)) continue;
            // Brute-force: clear pixel minimizing squared reference difference,
            // ties to the smaller row-major index.
            double best = 1e30;
            int bi = -1, bj = -1;
            for (int di = 0; di < 16; ++di)
                for (int dj = 0; dj < 16; ++dj) {
                    if (m.at(di, dj)) continue;
                    const double dv = ref.at(0, i, j) - ref.at(0, di, dj);
                    const double c = dv * dv;
                    if (c < best) {
                        best = c;
                        bi = di;
                        bj = dj;
                    }
                }
            CHECK(out.at(0, i, j) == target.at(0, bi, bj));
        }
}

TEST_CASE("pass-through outside the mask is bit-exact") {
    uint64_t st = 63;
    Raster target = test::random_raster(16, 16, 2, st);
    Raster ref = test::random_raster(16, 16, 2, st);
    Mask m = test::random_mask(16, 16, 0.25, st);
    Raster out = stmrf_reconstruct(target, m, ref, {});
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j)
                if (!m.at(i, j)) CHECK(out.at(b, i, j) == target.at(b, i, j));
}

TEST_CASE("donor provenance: every filled value comes from a clear pixel") {
    uint64_t st = 64;
    Raster target = test::random_raster(16, 16, 1, st);
    Raster ref = test::random_raster(16, 16, 1, st);
    Mask m = test::random_mask(16, 16, 0.2, st);
    Raster out = stmrf_reconstruct(target, m, ref, {});
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            if (!m.at(i, j)) continue;
            bool found = false;
            for (int di = 0; di < 16 && !found; ++di)
                for (int dj = 0; dj < 16 && !found; ++dj)
                    if (!m.at(di, dj) && out.at(0, i, j) == target.at(0, di, dj)) found = true;
            CHECK(found);
        }
}

TEST_CASE("energy trace is non-increasing across ICM sweeps") {
    uint64_t st = 65;
    Raster target = test::random_raster(24, 24, 1, st);
    Raster ref = test::random_raster(24, 24, 1, st);
    Mask m = test::random_mask(24, 24, 0.3, st);
    StmrfDiagnostics d;
    stmrf_reconstruct(target, m, ref, {2, 1, 0.5, 8, 10}, &d);
    REQUIRE(d.energy_trace.size() >= 2);
    for (size_t k = 1; k < d.energy_trace.size(); ++k)
        CHECK(d.energy_trace[k] <= d.energy_trace[k - 1] + 1e-12);
}

TEST_CASE("determinism") {
    uint64_t st = 66;
    Raster target = test::random_raster(16, 16, 1, st);
    Raster ref = test::random_raster(16, 16, 1, st);
    Mask m = test::random_mask(16, 16, 0.3, st);
    Raster a = stmrf_reconstruct(target, m, ref, {});
    Raster b = stmrf_reconstruct(target, m, ref, {});
    CHECK(a.values() == b.values());
}

TEST_CASE("fully masked image is an error") {
    Raster t(8, 8, 1);
    Mask m(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) m.set(i, j, true);
    CHECK_THROWS_AS(stmrf_reconstruct(t, m, t, {}), Error);
}
