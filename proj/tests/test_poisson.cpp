#include <doctest.h>

#include <cmath>

#include "cloudfill/poisson.hpp"
#include "poisson_oracle.hpp"
#include "test_util.hpp"

using namespace cloudfill;

namespace {

double rms_on_mask(const Raster& a, const Raster& b, const Mask& m) {
    double sum = 0.0;
    size_t n = 0;
    for (int band = 0; band < a.bands(); ++band)
        for (int i = 0; i < a.height(); ++i)
            for (int j = 0; j < a.width(); ++j)
                if (m.at(i, j)) {
                    const double d = a.at(band, i, j) - b.at(band, i, j);
                    sum += d * d;
                    ++n;
                }
    return n ? std::sqrt(sum / n) : 0.0;
}

Mask center_blob(int w, int h, int r0, int r1, int c0, int c1) {
    Mask m(w, h);
    for (int i = r0; i <= r1; ++i)
        for (int j = c0; j <= c1; ++j) m.set(i, j, true);
    return m;
}

}  // namespace

TEST_CASE("gradient_field basics") {
    Raster c(4, 4, 1, std::vector<double>(16, 0.4));
    GuidanceField gc = gradient_field(c);
    for (double v : gc.gx) CHECK(v == 0.0);
    for (double v : gc.gy) CHECK(v == 0.0);

    Raster ramp(4, 4, 1);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ramp.at(0, i, j) = j;
    GuidanceField gr = gradient_field(ramp);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) CHECK(gr.gx[gr.index(0, i, j)] == 1.0);
    for (int i = 0; i < 4; ++i) CHECK(gr.gx[gr.index(0, i, 3)] == 0.0);
    for (double v : gr.gy) CHECK(v == 0.0);

    uint64_t st = 31;
    Raster rnd = test::random_raster(4, 4, 2, st);
    GuidanceField g = gradient_field(rnd);
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double ex = j + 1 < 4 ? rnd.at(b, i, j + 1) - rnd.at(b, i, j) : 0.0;
                const double ey = i + 1 < 4 ? rnd.at(b, i + 1, j) - rnd.at(b, i, j) : 0.0;
                CHECK(g.gx[g.index(b, i, j)] == ex);
                CHECK(g.gy[g.index(b, i, j)] == ey);
            }
}

TEST_CASE("zero guidance, constant boundary fills with the constant") {
    Raster t(8, 8, 1, std::vector<double>(64, 0.6));
    Mask m = center_blob(8, 8, 2, 5, 2, 5);
    GuidanceField zero = gradient_field(Raster(8, 8, 1));
    Raster out = poisson_solve(t, m, zero, {});
    for (int i = 2; i <= 5; ++i)
        for (int j = 2; j <= 5; ++j) CHECK(out.at(0, i, j) == doctest::Approx(0.6).epsilon(1e-7));
}

TEST_CASE("single missing cell, zero guidance: mean of 4 neighbors") {
    Raster t(5, 5, 1);
    t.at(0, 1, 2) = 1.0;  // up
    t.at(0, 3, 2) = 2.0;  // down
    t.at(0, 2, 1) = 3.0;  // left
    t.at(0, 2, 3) = 4.0;  // right
    Mask m(5, 5);
    m.set(2, 2, true);
    Raster out = poisson_solve(t, m, gradient_field(Raster(5, 5, 1)), {});
    CHECK(out.at(0, 2, 2) == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("solve reproduces the field of its own gradient") {
    uint64_t st = 33;
    Raster w = test::random_raster(16, 16, 2, st);
    Mask m = center_blob(16, 16, 4, 11, 3, 12);
    Raster out = poisson_solve(w, m, gradient_field(w), {});
    CHECK(rms_on_mask(out, w, m) < 1e-4);
}

TEST_CASE("matches dense direct solve on small masks") {
    uint64_t st = 34;
    for (int t = 0; t < 5; ++t) {
        Raster src = test::random_raster(10, 10, 1, st);
        Mask m(10, 10);
        int placed = 0;
        while (placed < 8) {
            const int i = 1 + static_cast<int>(splitmix64_next(st) % 8);
            const int j = 1 + static_cast<int>(splitmix64_next(st) % 8);
            if (!m.at(i, j)) {
                m.set(i, j, true);
                ++placed;
            }
        }
        uint64_t st2 = st;
        Raster guide = test::random_raster(10, 10, 1, st2);
        GuidanceField g = gradient_field(guide);
        Raster cg = poisson_solve(src, m, g, {1e-12, 0});
        Raster direct = test::dense_poisson_solve(src, m, g);
        for (size_t k = 0; k < cg.values().size(); ++k)
            CHECK(std::abs(cg.values()[k] - direct.values()[k]) < 1e-9);
    }
}

TEST_CASE("pass-through outside the region is bit-exact") {
    uint64_t st = 35;
    Raster t = test::random_raster(12, 12, 3, st);
    Raster ref = test::random_raster(12, 12, 3, st);
    Mask m = center_blob(12, 12, 3, 8, 4, 9);
    Raster out = poisson_replace(t, m, ref, {});
    for (int b = 0; b < 3; ++b)
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                if (!m.at(i, j)) CHECK(out.at(b, i, j) == t.at(b, i, j));
}

TEST_CASE("poisson_replace self-consistency and offset removal") {
    uint64_t st = 36;
    Raster t = test::random_raster(16, 16, 1, st);
    Mask m = center_blob(16, 16, 5, 10, 5, 10);

    Raster same = poisson_replace(t, m, t, {});
    CHECK(rms_on_mask(same, t, m) < 1e-6);

    Raster shifted = t;
    for (double& v : shifted.values()) v += 0.3;
    Raster out = poisson_replace(t, m, shifted, {});
    CHECK(rms_on_mask(out, t, m) < 1e-4);
}

TEST_CASE("offset invariance of the guidance") {
    uint64_t st = 37;
    Raster t = test::random_raster(16, 16, 1, st);
    Raster ref = test::random_raster(16, 16, 1, st);
    Mask m = center_blob(16, 16, 4, 10, 4, 10);
    SolverOptions opts{1e-10, 0};
    Raster a = poisson_replace(t, m, ref, opts);
    Raster shifted = ref;
    for (double& v : shifted.values()) v += 0.3;
    Raster b = poisson_replace(t, m, shifted, opts);
    CHECK(rms_on_mask(a, b, m) < 10 * opts.tol);
}

TEST_CASE("maximum principle with zero guidance") {
    uint64_t st = 38;
    Raster t = test::random_raster(12, 12, 1, st);
    Mask m = center_blob(12, 12, 3, 8, 3, 8);
    Raster out = poisson_solve(t, m, gradient_field(Raster(12, 12, 1)), {});
    double lo = 1e30, hi = -1e30;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            if (!m.at(i, j)) {
                lo = std::min(lo, t.at(0, i, j));
                hi = std::max(hi, t.at(0, i, j));
            }
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            if (m.at(i, j)) {
                CHECK(out.at(0, i, j) >= lo - 1e-7);
                CHECK(out.at(0, i, j) <= hi + 1e-7);
            }
}

TEST_CASE("border mask cells are dropped to the known set") {
    uint64_t st = 39;
    Raster t = test::random_raster(8, 8, 1, st);
    Mask m(8, 8);
    m.set(0, 3, true);  // on the border
    m.set(3, 3, true);
    m.set(3, 4, true);
    PoissonStats stats;
    Raster out = poisson_solve(t, m, gradient_field(t), {}, &stats);
    CHECK(stats.border_cells_dropped == 1);
    CHECK(out.at(0, 0, 3) == t.at(0, 0, 3));  // held at the contaminated value
}

TEST_CASE("disconnected components are both solved") {
    uint64_t st = 40;
    Raster t = test::random_raster(12, 12, 1, st);
    Mask m(12, 12);
    m.set(2, 2, true);
    m.set(2, 3, true);
    m.set(8, 8, true);
    m.set(9, 8, true);
    PoissonStats stats;
    Raster out = poisson_replace(t, m, t, {}, &stats);
    CHECK(stats.components == 2);
    CHECK(rms_on_mask(out, t, m) < 1e-6);
}

TEST_CASE("non-convergence reports achieved residual") {
    uint64_t st = 41;
    Raster t = test::random_raster(16, 16, 1, st);
    Raster ref = test::random_raster(16, 16, 1, st);
    Mask m = center_blob(16, 16, 2, 13, 2, 13);
    CHECK_THROWS_WITH_AS(poisson_replace(t, m, ref, {1e-12, 1}),
                         doctest::Contains("relative residual"), Error);
}

TEST_CASE("empty mask region is an error") {
    Raster t(8, 8, 1);
    CHECK_THROWS_AS(poisson_solve(t, Mask(8, 8), gradient_field(t), {}), Error);
}
