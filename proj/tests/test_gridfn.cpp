#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hj/errors.hpp"
#include "hj/gridfn.hpp"
#include "test_util.hpp"

using namespace hj;

TEST_CASE("CSV round trip is bit exact") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    GridFn f(Box::interval(-4.0, 4.0), {57, 1});
    for (auto& v : f.values()) v = u(rng);
    std::stringstream ss;
    write_csv(f, ss);
    const GridFn g = read_csv(ss);
    REQUIRE(g.same_grid(f));
    for (std::int64_t k = 0; k < f.size(); ++k) {
        CHECK(g.values()[k] == f.values()[k]);  // bitwise
    }

    GridFn f2(Box::rect(-1.0, 1.0, 0.0, 2.0), {13, 9});
    for (auto& v : f2.values()) v = u(rng);
    std::stringstream ss2;
    write_csv(f2, ss2);
    const GridFn g2 = read_csv(ss2);
    REQUIRE(g2.same_grid(f2));
    for (std::int64_t k = 0; k < f2.size(); ++k) {
        CHECK(g2.values()[k] == f2.values()[k]);
    }
}

TEST_CASE("eval: nodes, interpolation, extension") {
    const GridFn f = testutil::make_2d(Box::rect(0, 2, 0, 2), 3, 3,
                                       [](double x, double y) { return x * y; });
    CHECK(f.eval({1.0, 2.0}) == doctest::Approx(2.0));
    // Bilinear between nodes: x*y is reproduced exactly by bilinear
    // interpolation on each cell.
    CHECK(f.eval({0.5, 1.5}) == doctest::Approx(0.75));

    GridFn g = testutil::make_1d(-1, 1, 21, [](double x) { return std::abs(x); });
    g.set_extension(Extension::forbidden());
    CHECK_THROWS_AS(g.eval({2.0, 0.0}), Error);
    g.set_extension(Extension::linear_lipschitz(1.0));
    CHECK(g.eval({1.5, 0.0}) == doctest::Approx(1.5));
    CHECK(g.eval({-2.0, 0.0}) == doctest::Approx(2.0));
}

TEST_CASE("lipschitz_estimate") {
    const GridFn f = testutil::make_1d(-2, 2, 401,
                                       [](double x) { return std::abs(x); });
    CHECK(lipschitz_estimate(f) == doctest::Approx(1.0));
    const GridFn c = testutil::make_1d(-2, 2, 401, [](double) { return 3.0; });
    CHECK(lipschitz_estimate(c) == 0.0);
    // Monotone under refinement.
    const GridFn f2 = testutil::make_1d(-2, 2, 801,
                                        [](double x) { return std::abs(x); });
    CHECK(lipschitz_estimate(f2) >= lipschitz_estimate(f) - 1e-12);
}

TEST_CASE("dependence_margin closed form and linearity in T") {
    const auto h = Hamiltonian::from_descriptor("quadratic:1");
    const GridFn f = testutil::make_1d(-2, 2, 401,
                                       [](double x) { return std::abs(x); });
    CHECK(dependence_margin(h, f, 0.5) == doctest::Approx(0.5));
    CHECK(dependence_margin(h, f, 1.0) ==
          doctest::Approx(2.0 * dependence_margin(h, f, 0.5)));

    const auto h2 = Hamiltonian::from_descriptor("quadratic:[[2,1],[1,1]]");
    const GridFn f2 = testutil::make_2d(Box::rect(-1, 1, -1, 1), 41, 41,
                                        [](double x, double) { return x; });
    CHECK(dependence_margin(h2, f2, 1.0) ==
          doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0));

    const GridFn z = testutil::make_1d(-2, 2, 41, [](double) { return 1.0; });
    CHECK(dependence_margin(h, z, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("sup_norm_diff and restrict_to") {
    const GridFn f = testutil::make_1d(-4, 4, 201,
                                       [](double x) { return x * x; });
    GridFn g = f;
    for (auto& v : g.values()) v += 0.25;
    CHECK(sup_norm_diff(f, g) == doctest::Approx(0.25));
    CHECK(sup_norm_diff(f, f) == 0.0);

    const GridFn r = restrict_to(f, Box::interval(-2.0, 2.0));
    CHECK(r.res(0) == 101);
    CHECK(r.box().lo[0] == doctest::Approx(-2.0));
    for (int i = 0; i < r.res(0); ++i) {
        CHECK(r.at(i) == f.at(i + 50));  // node values preserved
    }
    CHECK_THROWS_AS(restrict_to(f, Box::interval(-2.01, 2.0)), Error);

    const GridFn other = testutil::make_1d(-4, 4, 200,
                                           [](double x) { return x; });
    CHECK_THROWS_AS(sup_norm_diff(f, other), GridMismatch);
}

TEST_CASE("node_index") {
    const GridFn f = testutil::make_1d(-4, 4, 801, [](double x) { return x; });
    CHECK(f.node_index(0, -4.0) == 0);
    CHECK(f.node_index(0, 0.0) == 400);
    CHECK(f.node_index(0, 4.0) == 800);
}
