// Acceptance suite: one pass/fail line per criterion. Exit code 0 iff all
// criteria hold. Tolerances are pinned here, not read from configuration.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hj/envelope.hpp"
#include "hj/hopflax.hpp"
#include "hj/inverse_set.hpp"
#include "hj/piecewise.hpp"
#include "hj/reachability.hpp"
#include "hj/viscosity_oracle.hpp"
#include "test_util.hpp"

using namespace hj;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass,
            const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL",
                criterion, what.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

const Hamiltonian& quad1() {
    static const Hamiltonian h = Hamiltonian::from_descriptor("quadratic:1");
    return h;
}
const Hamiltonian& quad21() {
    static const Hamiltonian h =
        Hamiltonian::from_descriptor("quadratic:[[2,1],[1,1]]");
    return h;
}

GridFn ex31_target(int res) {
    const GridFn u1 = sample_enlarged(catalog("u1"), quad1(),
                                      Box::interval(-4, 4), {res, 1}, 0.5,
                                      3.0);
    return forward(quad1(), u1, 0.5);
}

// Largest deviation of the mask-complement interval endpoints from the
// published values +-{0.5, 1.5}, measured inside [-3, 3].
double xset_endpoint_error(const XSetMask& xs) {
    std::vector<double> edges;
    bool open = false;
    double start = 0;
    const auto& g = xs.grid;
    for (int i = 0; i < g.res(0); ++i) {
        const double x = g.coord(0, i);
        if (x < -3.0 || x > 3.0) continue;
        if (!xs.at(i) && !open) {
            open = true;
            start = x;
        } else if (xs.at(i) && open) {
            edges.push_back(start);
            edges.push_back(x - g.spacing(0));
            open = false;
        }
    }
    if (edges.size() != 4) return 1e9;
    const double golden[4] = {-1.5, -0.5, 0.5, 1.5};
    double err = 0;
    for (int k = 0; k < 4; ++k) err = std::max(err, std::abs(edges[k] - golden[k]));
    return err;
}

void criterion1() {
    const XSetMask xs1 = xset_gradient(quad1(), ex31_target(1001), 0.5);
    const XSetMask xs2 = xset_gradient(quad1(), ex31_target(2001), 0.5);
    const double h1 = 0.008, h2 = 0.004;
    const double e1 = xset_endpoint_error(xs1);
    const double e2 = xset_endpoint_error(xs2);
    const bool pass = e1 <= 3 * h1 && e2 <= 3 * h2 && e2 <= 0.75 * e1 + 1e-12;
    char d[128];
    std::snprintf(d, sizeof d, "err(h)=%.4f err(h/2)=%.4f", e1, e2);
    report(1, "X-set endpoints converge at the published interval", pass, d);
}

void criterion2() {
    double worst = 0.0, agree = 0.0;
    struct Case { const char* id; double t; double x; double v; };
    for (const Case& c : {Case{"u3", 1.0, -1.0, -0.5}, Case{"u3", 1.0, 0.0, 0.0},
                          Case{"u3", 1.0, 1.0, -0.5}, Case{"u4", 0.5, 0.0, 0.0}}) {
        const GridFn ut = sample_enlarged(catalog(c.id), quad1(),
                                          Box::interval(-4, 4), {1001, 1},
                                          c.t, 2.0);
        const GridFn proj = compose_project(quad1(), ut, c.t);
        const GridFn env = semiconcave_envelope(quad1(), ut, c.t);
        worst = std::max(worst, std::abs(proj.at(proj.node_index(0, c.x)) - c.v));
        worst = std::max(worst, std::abs(env.at(env.node_index(0, c.x)) - c.v));
        agree = std::max(agree,
                         sup_norm_diff(restrict_to(proj, Box::interval(-4, 4)),
                                       restrict_to(env, Box::interval(-4, 4))));
    }
    char d[128];
    std::snprintf(d, sizeof d, "max value error %.4f, proj vs env %.4f",
                  worst, agree);
    report(2, "envelope landmark values via both routes", worst <= 0.02 && agree <= 0.01, d);
}

void criterion3() {
    bool pass = true;
    std::string detail;
    // Catalog verdicts.
    {
        const auto rep = full_report(quad1(), ex31_target(1001), 0.5, -1.0,
                                     Box::interval(-4, 4));
        if (rep.verdict != Verdict::Reachable) { pass = false; detail += "ex31 "; }
    }
    struct Case { const char* id; double t; const Hamiltonian* h; };
    for (const Case& c : {Case{"u3", 1.0, &quad1()}, Case{"u4", 0.5, &quad1()}}) {
        const GridFn ut = sample_enlarged(catalog(c.id), *c.h,
                                          Box::interval(-4, 4), {1001, 1},
                                          c.t, 2.0);
        if (full_report(*c.h, ut, c.t).verdict != Verdict::NotReachable) {
            pass = false;
            detail += std::string(c.id) + " ";
        }
    }
    for (const Case& c : {Case{"u5", 1.0, &quad21()}, Case{"u6", 0.5, &quad21()}}) {
        const GridFn ut = sample_enlarged(catalog(c.id), *c.h,
                                          Box::rect(-4, 4, -2, 2), {129, 65},
                                          c.t, 2.0);
        const auto rep = full_report(*c.h, ut, c.t);
        const bool in_band = rep.fixedpoint_residual >= rep.tol_reach / 2 &&
                             rep.fixedpoint_residual <= 2 * rep.tol_reach;
        // u6 is pinned NotReachable; u5 must at least agree modulo the band.
        if (std::string(c.id) == "u6" && rep.verdict != Verdict::NotReachable) {
            pass = false;
            detail += "u6 ";
        }
        if (rep.verdict == Verdict::Indeterminate && !in_band) {
            pass = false;
            detail += std::string(c.id) + "-band ";
        }
    }
    // 50 randomized piecewise-linear 1D targets.
    std::mt19937_64 rng(101);
    int disagreements_outside_band = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto f = testutil::random_pwl(rng, -6, 6, 1.5);
        const GridFn ut = testutil::make_1d(-6, 6, 601, f);
        const double t = 1.0;
        const double tol = default_tol_reach(ut, t);
        const auto [fp, res] = check_fixedpoint(quad1(), ut, t);
        // Compare like for like: the fixed-point residual is measured on
        // the margin-shrunk interior, so test the differential criterion
        // on the same region (a kink outside it is invisible to one
        // criterion but not the other).
        const int cells = static_cast<int>(
            std::ceil(2.0 * dependence_margin(quad1(), ut, t) /
                      ut.spacing(0)));
        const Box roi = Box::interval(ut.coord(0, cells),
                                      ut.coord(0, ut.res(0) - 1 - cells));
        const bool diff = check_differential(quad1(), restrict_to(ut, roi), t);
        const bool in_band = res >= tol / 2 && res <= 2 * tol;
        if (fp != diff && !in_band) ++disagreements_outside_band;
    }
    if (disagreements_outside_band > 0) {
        pass = false;
        detail += "random-disagreements=" + std::to_string(disagreements_outside_band);
    }
    report(3, "reachability verdicts and criterion agreement", pass,
           detail.empty() ? "all verdicts as published" : detail);
}

void criterion4() {
    std::mt19937_64 rng(202);
    const double t = 0.5;
    int failures = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto f = testutil::random_pwl(rng, -5, 5, 1.5);
        const GridFn u0 = testutil::make_1d(-5, 5, 501, f);
        const double h = u0.spacing(0);
        const double lip = lipschitz_estimate(u0);
        const double tol = 5 * h * (1 + lip);
        const int skip = static_cast<int>(std::ceil(2 * t * lip / h)) + 4;
        bool ok = true;

        const GridFn fw = forward(quad1(), u0, t);
        const GridFn bwfw = backward(quad1(), fw, t);
        const GridFn fwbwfw = forward(quad1(), bwfw, t);
        const GridFn bw = backward(quad1(), u0, t);
        const GridFn fwbw = forward(quad1(), bw, t);
        const GridFn bwfwbw = backward(quad1(), fwbw, t);
        for (int i = skip; i < u0.res(0) - skip; ++i) {
            ok = ok && bwfw.at(i) <= u0.at(i) + tol;        // bw。fw <= id
            ok = ok && fwbw.at(i) >= u0.at(i) - tol;        // fw。bw >= id
        }
        worst = std::max(worst, testutil::sup_diff_inner(fwbwfw, fw, skip));
        worst = std::max(worst, testutil::sup_diff_inner(bwfwbw, bw, skip));
        ok = ok && testutil::sup_diff_inner(fwbwfw, fw, skip) <= tol;
        ok = ok && testutil::sup_diff_inner(bwfwbw, bw, skip) <= tol;

        const GridFn half = forward(quad1(), forward(quad1(), u0, t / 2), t / 2);
        ok = ok && testutil::sup_diff_inner(half, fw, skip) <= tol;

        GridFn v0 = u0;
        for (auto& v : v0.values()) v += 0.1;
        const GridFn fv = forward(quad1(), v0, t);
        const GridFn bv = backward(quad1(), v0, t);
        for (int i = skip; i < u0.res(0) - skip; ++i) {
            ok = ok && fw.at(i) <= fv.at(i) + 1e-12;
            ok = ok && bw.at(i) <= bv.at(i) + 1e-12;
        }
        if (!ok) ++failures;
    }
    char d[128];
    std::snprintf(d, sizeof d, "failures %d/100, worst composite gap %.2e",
                  failures, worst);
    report(4, "operator identity property suite", failures == 0, d);
}

// Picks a node whose (2r+2)-cell neighborhood lies entirely in the mask
// complement (want_complement) or interior of the mask (!want_complement).
bool find_bump_center(const XSetMask& xs, std::mt19937_64& rng,
                      int radius_cells, bool want_complement,
                      std::array<double, 2>* center) {
    const auto& g = xs.grid;
    const int n0 = g.res(0), n1 = g.dim() == 2 ? g.res(1) : 1;
    std::uniform_int_distribution<int> di(radius_cells + 2,
                                          n0 - radius_cells - 3);
    std::uniform_int_distribution<int> dj(g.dim() == 2 ? radius_cells + 2 : 0,
                                          g.dim() == 2 ? n1 - radius_cells - 3 : 0);
    for (int tries = 0; tries < 4000; ++tries) {
        const int i = di(rng), j = dj(rng);
        bool all = true;
        for (int a = -radius_cells - 2; a <= radius_cells + 2 && all; ++a) {
            for (int b = -radius_cells - 2; b <= radius_cells + 2 && all; ++b) {
                if (g.dim() == 1 && b != 0) continue;
                const bool m = xs.at(i + a, g.dim() == 2 ? j + b : 0);
                if (m == want_complement) all = false;
            }
        }
        if (all) {
            (*center)[0] = g.coord(0, i);
            (*center)[1] = g.dim() == 2 ? g.coord(1, j) : 0.0;
            return true;
        }
    }
    return false;
}

void criterion5() {
    std::mt19937_64 rng(303);
    bool pass = true;
    std::string detail;

    struct Target {
        std::string name;
        Hamiltonian h;
        GridFn ut;
        double t;
    };
    std::vector<Target> targets;
    targets.push_back({"ex31", quad1(), ex31_target(1001), 0.5});
    {
        const auto hi = Hamiltonian::from_descriptor("quadratic:[[1,0],[0,1]]");
        const GridFn u2 = sample_enlarged(catalog("u2"), hi,
                                          Box::rect(-4, 4, -2, 2), {161, 81},
                                          0.5, 3.0);
        targets.push_back({"ex32", hi, forward(hi, u2, 0.5), 0.5});
    }
    for (const auto& tgt : targets) {
        const GridFn u0min = minimal_initial(tgt.h, tgt.ut, tgt.t);
        const XSetMask xs = xset_gradient(tgt.h, tgt.ut, tgt.t);
        const double h = tgt.ut.max_spacing();
        const double tol = default_tol_reach(tgt.ut, tgt.t);
        const int rc = std::max(2, static_cast<int>(0.15 / h));
        // Adversarial cone of height b, radius r on a flat run raises the
        // image by min(b, r^2 / 2T); size it well past the tolerance.
        const int rc_adv = static_cast<int>(std::ceil(0.7 / h));
        int member_fail = 0, adversarial_pass = 0;
        for (int k = 0; k < 20; ++k) {
            std::array<double, 2> c{0, 0};
            if (!find_bump_center(xs, rng, rc, true, &c)) { ++member_fail; continue; }
            std::uniform_real_distribution<double> uh(0.05, 0.3);
            const GridFn m = sample_member(u0min, xs,
                                           BumpSpec{c, rc * h, uh(rng)});
            const bool member = membership(tgt.h, m, tgt.ut, tgt.t, -1.0, true);
            const GridFn re = forward(tgt.h, m, tgt.t);
            const int skip = static_cast<int>(
                std::ceil(dependence_margin(tgt.h, tgt.ut, tgt.t) / h)) + 2;
            const bool roundtrip =
                testutil::sup_diff_inner(re, tgt.ut, skip) <= tol;
            if (!member || !roundtrip) ++member_fail;
        }
        for (int k = 0; k < 20; ++k) {
            std::array<double, 2> c{0, 0};
            if (!find_bump_center(xs, rng, rc_adv, false, &c)) { ++adversarial_pass; continue; }
            GridFn adv = u0min;
            const int n1 = adv.dim() == 2 ? adv.res(1) : 1;
            for (int i = 0; i < adv.res(0); ++i) {
                for (int j = 0; j < n1; ++j) {
                    const double dx = adv.coord(0, i) - c[0];
                    const double dy = adv.dim() == 2 ? adv.coord(1, j) - c[1] : 0;
                    const double r = std::sqrt(dx * dx + dy * dy);
                    adv.at(i, j) += std::max(0.0, 1.0 * (1 - r / (rc_adv * h)));
                }
            }
            const bool member = membership(tgt.h, adv, tgt.ut, tgt.t, -1.0, true);
            const GridFn re = forward(tgt.h, adv, tgt.t);
            const int skip = static_cast<int>(
                std::ceil(dependence_margin(tgt.h, tgt.ut, tgt.t) / h)) + 2;
            const bool resolve_differs =
                testutil::sup_diff_inner(re, tgt.ut, skip) > tol;
            if (member || !resolve_differs) ++adversarial_pass;
        }
        if (member_fail || adversarial_pass) {
            pass = false;
            detail += tgt.name + ": member_fail=" + std::to_string(member_fail) +
                      " adversarial_pass=" + std::to_string(adversarial_pass) + " ";
        }
    }
    report(5, "membership roundtrip with in/out bumps", pass,
           detail.empty() ? "40 members pass. 40 adversarial fail" : detail);
}

void criterion6() {
    bool pass = true;
    char detail[256] = {0};
    size_t off = 0;
    struct Case { const char* id; double t; const Hamiltonian* h; Box roi; std::array<int,2> res; };
    const std::vector<Case> cases = {
        {"u3", 1.0, &quad1(), Box::interval(-4, 4), {1001, 1}},
        {"u4", 0.5, &quad1(), Box::interval(-4, 4), {1001, 1}},
        {"u5", 1.0, &quad21(), Box::rect(-4, 4, -2, 2), {161, 81}},
        {"u6", 0.5, &quad21(), Box::rect(-4, 4, -2, 2), {161, 81}},
    };
    for (const auto& c : cases) {
        const GridFn ut = sample_enlarged(catalog(c.id), *c.h, c.roi, c.res,
                                          c.t, 2.0);
        const GridFn env = semiconcave_envelope(*c.h, ut, c.t);
        const auto res = obstacle_residual(restrict_to(env, c.roi),
                                           restrict_to(ut, c.roi), *c.h, c.t);
        if (res.min_violation != 0.0 || res.complementarity > 0.05) pass = false;
        off += std::snprintf(detail + off, sizeof detail - off,
                             "%s: viol=%.3g comp=%.3g  ", c.id,
                             res.min_violation, res.complementarity);
    }
    report(6, "obstacle residual of catalog envelopes", pass, detail);
}

void criterion7() {
    bool pass = true;
    char detail[256] = {0};
    size_t off = 0;
    struct Case { const char* id; double t; bool backward_too; int res; };
    // u4 is twice as steep, so the h-scale numerical viscosity needs a
    // finer grid to sit inside the 0.05 budget.
    for (const Case& c : {Case{"u1", 0.5, false, 1001},
                          Case{"u3", 1.0, true, 1001},
                          Case{"u4", 0.5, false, 2001}}) {
        const GridFn u0 = sample_enlarged(catalog(c.id), quad1(),
                                          Box::interval(-4, 4), {c.res, 1},
                                          c.t, 2.0);
        const int skip = static_cast<int>(
            std::ceil(dependence_margin(quad1(), u0, c.t) / u0.spacing(0))) + 2;
        const GridFn hopf = forward(quad1(), u0, c.t);
        const GridFn par = parabolic_forward(quad1(), u0, c.t, 1e-3);
        const double d = testutil::sup_diff_inner(par, hopf, skip);
        if (d > 0.05) pass = false;
        off += std::snprintf(detail + off, sizeof detail - off, "%s: %.3f ",
                             c.id, d);
        if (c.backward_too) {
            const GridFn hb = backward(quad1(), u0, c.t);
            const GridFn pb = parabolic_backward(quad1(), u0, c.t, 1e-3);
            const double db = testutil::sup_diff_inner(pb, hb, skip);
            if (db > 0.05) pass = false;
            off += std::snprintf(detail + off, sizeof detail - off,
                                 "%s-bw: %.3f ", c.id, db);
        }
    }
    // Epsilon refinement on u1.
    {
        const GridFn u0 = sample_enlarged(catalog("u1"), quad1(),
                                          Box::interval(-4, 4), {1001, 1},
                                          0.5, 2.0);
        const int skip = static_cast<int>(
            std::ceil(dependence_margin(quad1(), u0, 0.5) / u0.spacing(0))) + 2;
        const GridFn hopf = forward(quad1(), u0, 0.5);
        double prev = 1e9;
        for (double eps : {1e-2, 3e-3, 1e-3}) {
            const double d = testutil::sup_diff_inner(
                parabolic_forward(quad1(), u0, 0.5, eps), hopf, skip);
            if (d > prev * 1.2) pass = false;
            prev = d;
        }
        off += std::snprintf(detail + off, sizeof detail - off,
                             "refine-final: %.3f", prev);
    }
    report(7, "vanishing-viscosity oracle agreement", pass, detail);
}

void criterion8() {
    std::mt19937_64 rng(404);
    const double t = 1.0;
    const double s5 = std::sqrt(5.0);
    const double necessary = 2.0 / (3.0 - s5);   // 1/(T lambda_1)
    const double sufficient = 2.0 / (3.0 + s5);  // 1/(T lambda_n)
    bool pass = true;
    char detail[256] = {0};
    size_t off = 0;

    // Necessary bound: semiconcavity of forward images (reachable by
    // construction) stays below 1/(T lambda_1) + tol.
    std::uniform_real_distribution<double> uz(-2.0, 2.0), us(0.1, 0.4),
        ua(-0.2, 0.2);
    double worst_const = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
        std::vector<std::array<double, 3>> cones;  // (zx, zy, scale)
        for (int k = 0; k < 3; ++k) cones.push_back({uz(rng), uz(rng), us(rng)});
        const double ax = ua(rng), ay = ua(rng);
        const auto f = [&](double x, double y) {
            double v = ax * x + ay * y;
            for (const auto& cn : cones) {
                v += cn[2] * std::hypot(x - cn[0], y - cn[1]);
            }
            return v;
        };
        const Box roi = Box::rect(-4, 4, -4, 4);
        GridFn u0 = testutil::make_2d(roi, 101, 101, f);
        const double margin = dependence_margin(quad21(), u0, t);
        const double h = u0.spacing(0);
        const int cells = static_cast<int>(std::ceil(margin / h)) + 1;
        const Box big = Box::rect(roi.lo[0] - cells * h, roi.hi[0] + cells * h,
                                  roi.lo[1] - cells * h, roi.hi[1] + cells * h);
        u0 = testutil::make_2d(big, 101 + 2 * cells, 101 + 2 * cells, f);
        const GridFn target = restrict_to(forward(quad21(), u0, t), roi);
        worst_const = std::max(worst_const, semiconcavity_constant(target));
    }
    if (worst_const > necessary + 0.15) pass = false;
    off += std::snprintf(detail + off, sizeof detail - off,
                         "max semiconcavity %.3f <= %.3f  ", worst_const,
                         necessary + 0.15);

    // Sufficient bound: targets built with curvature c < 1/(T lambda_n)
    // minus margin are verdict-Reachable.
    int not_reachable = 0;
    for (const double c : {0.05, 0.15, 0.25}) {
        std::vector<std::array<double, 3>> cones;
        for (int k = 0; k < 2; ++k) cones.push_back({uz(rng) / 2, uz(rng) / 2, us(rng) / 2});
        const auto f = [&](double x, double y) {
            double v = 0.5 * c * (x * x + y * y) + 0.1 * x;
            for (const auto& cn : cones) {
                v -= cn[2] * std::hypot(x - cn[0], y - cn[1]);
            }
            return v;
        };
        const Box roi = Box::rect(-2, 2, -2, 2);
        GridFn probe = testutil::make_2d(roi, 51, 51, f);
        const double margin = 2.0 * dependence_margin(quad21(), probe, t);
        const double h = probe.spacing(0);
        const int cells = static_cast<int>(std::ceil(margin / h)) + 1;
        const Box big = Box::rect(roi.lo[0] - cells * h, roi.hi[0] + cells * h,
                                  roi.lo[1] - cells * h, roi.hi[1] + cells * h);
        const GridFn ut = testutil::make_2d(big, 51 + 2 * cells, 51 + 2 * cells, f);
        if (semiconcavity_constant(ut) > sufficient - 0.05) {
            not_reachable += 100;  // construction broke its own premise
            continue;
        }
        if (full_report(quad21(), ut, t, -1.0, roi).verdict != Verdict::Reachable) {
            ++not_reachable;
        }
    }
    if (not_reachable > 0) pass = false;
    off += std::snprintf(detail + off, sizeof detail - off,
                         "sufficient-side failures %d/3", not_reachable);
    report(8, "curvature bounds from the spectral constants", pass, detail);
}

void criterion9() {
    double worst = 0.0;
    for (const char* id : {"u1", "u2", "u3", "u4"}) {
        const auto& spec = catalog(id);
        if (spec.dimension != 1) continue;
        const GridFn u0 = sample_enlarged(spec, quad1(), Box::interval(-4, 4),
                                          {1001, 1}, 0.5, 1.0);
        worst = std::max(worst, sup_norm_diff(forward(quad1(), u0, 0.5),
                                              forward_brute(quad1(), u0, 0.5)));
    }
    {
        const auto hd = Hamiltonian::from_descriptor("quadratic:[[1,0],[0,2]]");
        std::mt19937_64 rng(505);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        GridFn u0(Box::rect(-4, 4, -4, 4), {201, 201});
        // Random Lipschitz field: smoothed noise via a coarse lattice.
        const auto fx = testutil::random_pwl(rng, -4, 4, 1.0);
        const auto fy = testutil::random_pwl(rng, -4, 4, 1.0);
        for (int i = 0; i < 201; ++i) {
            for (int j = 0; j < 201; ++j) {
                u0.at(i, j) = fx(u0.coord(0, i)) + fy(u0.coord(1, j)) +
                              0.3 * std::abs(u0.coord(0, i) - u0.coord(1, j));
            }
        }
        u0.set_extension(Extension::linear_lipschitz(lipschitz_estimate(u0)));
        worst = std::max(worst, sup_norm_diff(forward(hd, u0, 0.25),
                                              forward_brute(hd, u0, 0.25)));
    }
    char d[64];
    std::snprintf(d, sizeof d, "max |fast - brute| = %.2e", worst);
    report(9, "separable fast path equals brute force", worst <= 1e-10, d);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
