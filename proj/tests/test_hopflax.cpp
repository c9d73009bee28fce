#include <cmath>
#include <random>

#include "doctest.h"
#include "hj/hopflax.hpp"
#include "hj/piecewise.hpp"
#include "test_util.hpp"

using namespace hj;

namespace {
const Hamiltonian& quad1() {
    static const Hamiltonian h = Hamiltonian::from_descriptor("quadratic:1");
    return h;
}
}  // namespace

TEST_CASE("forward of affine data is an exact shift") {
    // S_t(a x + b) = a x + b - t H(a); exact because affine data are
    // steady profiles of the inf-convolution.
    const double a = 0.75, b = -0.4, t = 0.8;
    const GridFn u0 = testutil::make_1d(-6, 6, 601,
                                        [=](double x) { return a * x + b; });
    const GridFn out = forward(quad1(), u0, t);
    for (int i = 80; i < 521; ++i) {  // interior beyond the margin
        CHECK(out.at(i) ==
              doctest::Approx(a * out.coord(0, i) + b - t * a * a / 2)
                  .epsilon(1e-10));
    }
    // Scalar Hamiltonian variant: H(a) = a^4/4.
    const auto h4 = Hamiltonian::from_descriptor("scalar1d:p^4/4:[-4,4]");
    const GridFn out4 = forward(h4, u0, t);
    // Grid quantization of the minimizer costs O(h^2 L''), not exactness.
    for (int i = 80; i < 521; ++i) {
        CHECK(std::abs(out4.at(i) - (a * out4.coord(0, i) + b -
                                     t * std::pow(a, 4) / 4)) <= 5e-4);
    }
}

TEST_CASE("forward of |x| is the analytic rarefaction profile") {
    const double t = 1.0;
    const GridFn u0 = testutil::make_1d(-5, 5, 1001,
                                        [](double x) { return std::abs(x); });
    const GridFn out = forward(quad1(), u0, t);
    for (int i = 0; i < out.res(0); ++i) {
        const double x = out.coord(0, i);
        if (std::abs(x) > 3.5) continue;  // dependence margin
        const double exact =
            std::abs(x) <= t ? x * x / (2 * t) : std::abs(x) - t / 2;
        CHECK(std::abs(out.at(i) - exact) <= 2 * out.spacing(0));
    }
}

TEST_CASE("backward of |x| lifts by t/2") {
    // S_t^-(|x|)(x) = |x| + t/2: the sup-convolution rides up the slopes.
    const double t = 1.0;
    const GridFn ut = testutil::make_1d(-5, 5, 1001,
                                        [](double x) { return std::abs(x); });
    const GridFn out = backward(quad1(), ut, t);
    for (int i = 0; i < out.res(0); ++i) {
        const double x = out.coord(0, i);
        if (std::abs(x) > 3.5) continue;
        CHECK(std::abs(out.at(i) - (std::abs(x) + t / 2)) <=
              2 * out.spacing(0));
    }
    // Affine terminal data: a x + b + t H(a).
    const GridFn aff = testutil::make_1d(-5, 5, 501,
                                         [](double x) { return 0.5 * x; });
    const GridFn bout = backward(quad1(), aff, 2.0);
    CHECK(bout.at(bout.node_index(0, 0.0)) ==
          doctest::Approx(2.0 * 0.125).epsilon(1e-9));
}

TEST_CASE("forward matches the independent brute oracle") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 3; ++rep) {
        const auto f = testutil::random_pwl(rng, -4, 4, 2.0);
        const GridFn u0 = testutil::make_1d(-4, 4, 321, f);
        const double t = 0.7;
        const GridFn out = forward(quad1(), u0, t);
        const GridFn oracle = testutil::forward_oracle_1d(
            u0, t, [](double q) { return q * q / 2; });
        // The oracle scans the whole grid; agreement on the interior.
        CHECK(testutil::sup_diff_inner(out, oracle, 100) <= 1e-10);
    }
}

TEST_CASE("fast separable path equals brute force") {
    std::mt19937_64 rng(23);
    const auto f = testutil::random_pwl(rng, -4, 4, 1.5);
    const GridFn u0 = testutil::make_1d(-4, 4, 801, f);
    const GridFn fast = forward(quad1(), u0, 0.9);
    const GridFn brute = forward_brute(quad1(), u0, 0.9);
    CHECK(sup_norm_diff(fast, brute) <= 1e-10);

    const auto hd = Hamiltonian::from_descriptor("quadratic:[[1,0],[0,2]]");
    const GridFn u2 = testutil::make_2d(
        Box::rect(-2, 2, -2, 2), 81, 81, [&](double x, double y) {
            return std::abs(x) - 0.5 * std::abs(y - 0.3) + 0.2 * x;
        });
    CHECK(sup_norm_diff(forward(hd, u2, 0.4), forward_brute(hd, u2, 0.4)) <=
          1e-10);
}

TEST_CASE("operator identities on random data") {
    std::mt19937_64 rng(31);
    const double t = 0.5;
    for (int rep = 0; rep < 5; ++rep) {
        const auto f = testutil::random_pwl(rng, -5, 5, 1.5);
        const GridFn u0 = testutil::make_1d(-5, 5, 501, f);
        const double tol = 5 * u0.spacing(0) * (1 + lipschitz_estimate(u0));
        const GridFn fw = forward(quad1(), u0, t);
        const GridFn bw_fw = backward(quad1(), fw, t);
        const GridFn fw_bw_fw = forward(quad1(), bw_fw, t);
        const int skip = 120;  // two dependence margins in cells
        // backward(forward(u0)) <= u0; forward of it recovers forward(u0).
        for (int i = skip; i < u0.res(0) - skip; ++i) {
            CHECK(bw_fw.at(i) <= u0.at(i) + tol);
        }
        CHECK(testutil::sup_diff_inner(fw_bw_fw, fw, skip) <= tol);
        // forward(backward(ut)) >= ut.
        const GridFn bw = backward(quad1(), u0, t);
        const GridFn fw_bw = forward(quad1(), bw, t);
        for (int i = skip; i < u0.res(0) - skip; ++i) {
            CHECK(fw_bw.at(i) >= u0.at(i) - tol);
        }
        // Semigroup split.
        const GridFn half = forward(quad1(), forward(quad1(), u0, t / 2), t / 2);
        CHECK(testutil::sup_diff_inner(half, fw, skip) <=
              4 * u0.spacing(0) * (1 + lipschitz_estimate(u0)));
        // Monotonicity.
        GridFn v0 = u0;
        for (auto& v : v0.values()) v += 0.3;
        const GridFn fv = forward(quad1(), v0, t);
        for (int i = skip; i < u0.res(0) - skip; ++i) {
            CHECK(fw.at(i) <= fv.at(i) + 1e-12);
        }
    }
}

TEST_CASE("translation equivariance at node-aligned shifts") {
    std::mt19937_64 rng(37);
    const auto f = testutil::random_pwl(rng, -6, 6, 1.0);
    const GridFn u0 = testutil::make_1d(-6, 6, 601, f);
    const double h = u0.spacing(0);
    const int shift = 25;
    GridFn u0s = u0;
    for (int i = 0; i < u0.res(0); ++i) {
        u0s.at(i) = u0.at(std::max(0, i - shift));
    }
    const GridFn a = forward(quad1(), u0, 0.5);
    const GridFn b = forward(quad1(), u0s, 0.5);
    for (int i = 150; i < 450; ++i) {
        CHECK(b.at(i) == doctest::Approx(a.at(i - shift)).epsilon(1e-10));
    }
    (void)h;
}

TEST_CASE("argmin map: uniqueness and shocks") {
    const GridFn conv = testutil::make_1d(-4, 4, 401,
                                          [](double x) { return std::abs(x); });
    const auto [outc, amc] = forward_with_argmin(quad1(), conv, 1.0);
    // Convex data: unique minimizer everywhere; on the slopes it sits at
    // x - t * sign(x).
    const int i = outc.node_index(0, 2.0);
    REQUIRE(amc.minimizers[i].size() >= 1);
    CHECK(amc.minimizers[i].size() <= 2);
    CHECK(outc.coord(0, static_cast<int>(amc.minimizers[i][0])) ==
          doctest::Approx(1.0).epsilon(0.05));

    const GridFn conc = testutil::make_1d(
        -4, 4, 401, [](double x) { return -std::abs(x); });
    const auto [outk, amk] = forward_with_argmin(quad1(), conc, 1.0);
    // Concave kink at 0: two symmetric minimizers near +-t (shock point).
    const int j = outk.node_index(0, 0.0);
    CHECK(amk.minimizers[j].size() >= 2);
    double lo = 1e9, hi = -1e9;
    for (const auto idx : amk.minimizers[j]) {
        const double y = outk.coord(0, static_cast<int>(idx));
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    CHECK(lo == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(hi == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("projection: fixed points and landmark values") {
    // Concave targets are fixed points of the projection.
    const GridFn conc = testutil::make_1d(
        -6, 6, 1201, [](double x) { return -std::abs(x); });
    const GridFn proj = compose_project(quad1(), conc, 0.5);
    CHECK(testutil::sup_diff_inner(proj, conc, 200) <= 2 * conc.spacing(0));

    // u3 projection: published curve has (-1.008, -0.499968); analytic
    // parabolic arcs give -0.5, 0, -0.5 at -1, 0, 1.
    const auto h = quad1();
    const GridFn u3 =
        sample_enlarged(catalog("u3"), h, Box::interval(-4, 4), {1001, 1},
                        1.0, 2.0);
    const GridFn p3 = compose_project(h, u3, 1.0);
    CHECK(std::abs(p3.at(p3.node_index(0, -1.0)) + 0.5) <= 0.02);
    CHECK(std::abs(p3.at(p3.node_index(0, 0.0))) <= 0.02);
    CHECK(std::abs(p3.at(p3.node_index(0, 1.0)) + 0.5) <= 0.02);

    // Idempotence.
    const GridFn pp3 = compose_project(h, p3, 1.0);
    CHECK(testutil::sup_diff_inner(pp3, p3, 300) <=
          4 * u3.spacing(0) * (1 + lipschitz_estimate(u3)));

    // u4 with T = 0.5: projection value 0 at the origin (published datum
    // 0.000064 at x = 0.008).
    const GridFn u4 =
        sample_enlarged(catalog("u4"), h, Box::interval(-4, 4), {1001, 1},
                        0.5, 2.0);
    const GridFn p4 = compose_project(h, u4, 0.5);
    CHECK(std::abs(p4.at(p4.node_index(0, 0.0))) <= 0.02);
}

TEST_CASE("Example 3.1 target value") {
    const auto h = quad1();
    const GridFn u1 = sample_enlarged(catalog("u1"), h, Box::interval(-4, 4),
                                      {1001, 1}, 0.5, 1.0);
    const GridFn target = forward(h, u1, 0.5);
    // Published plotted point (-1, 0.750016).
    CHECK(target.at(target.node_index(0, -1.0)) ==
          doctest::Approx(0.75).epsilon(0.01));
}
