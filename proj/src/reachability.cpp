#include "hj/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hj/envelope.hpp"
#include "hj/hopflax.hpp"
#include "json.hpp"

namespace hj {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Reachable: return "Reachable";
        case Verdict::NotReachable: return "NotReachable";
        default: return "Indeterminate";
    }
}

double default_tol_reach(const GridFn& ut, double t) {
    // The leading constant is calibrated on the demo catalog: it must pass
    // genuinely reachable targets (projection error O(h^2/T + h Lip)) while
    // staying below the smallest kink-induced residual seen in practice.
    return ut.max_spacing() * (1.0 + lipschitz_estimate(ut)) *
           (1.0 + 1.0 / t);
}

namespace {

Box default_roi(const Hamiltonian& h, const GridFn& ut, double t,
                double factor) {
    const double m = factor * dependence_margin(h, ut, t);
    Box roi = ut.box();
    for (int a = 0; a < roi.dim; ++a) {
        // Snap inward to grid nodes.
        const int cells = static_cast<int>(std::ceil(m / ut.spacing(a)));
        const int keep = ut.res(a) - 1 - 2 * cells;
        if (keep < 2) {
            throw BoxTooSmall("grid too small for the dependence margin");
        }
        roi.lo[a] += cells * ut.spacing(a);
        roi.hi[a] -= cells * ut.spacing(a);
    }
    return roi;
}

}  // namespace

std::pair<bool, double> check_fixedpoint(const Hamiltonian& h,
                                         const GridFn& ut, double t,
                                         double tol_reach,
                                         std::optional<Box> roi) {
    if (tol_reach < 0.0) tol_reach = default_tol_reach(ut, t);
    const GridFn proj = compose_project(h, ut, t);
    const Box region = roi ? *roi : default_roi(h, ut, t, 2.0);
    const double residual = sup_norm_diff(restrict_to(proj, region),
                                          restrict_to(ut, region));
    return {residual <= tol_reach, residual};
}

bool check_differential(const Hamiltonian& h, const GridFn& ut, double t,
                        double tol) {
    if (h.is_quadratic()) {
        GridFn shifted = ut;
        const GridFn q = sample_quadratic_shift(h.quadratic_form(), ut, t);
        for (std::int64_t k = 0; k < ut.size(); ++k) {
            shifted.values()[k] -= q.values()[k];
        }
        // Tolerance keyed to the target's own Lipschitz constant; the
        // shifted function's constant grows with the box and would wash
        // out genuine convex kinks. Interpolation sag of a concave
        // function is O(h^2), so 2h(1+Lip) cleanly separates it from
        // kink-induced envelope gaps.
        if (tol < 0.0) {
            tol = 2.0 * ut.max_spacing() * (1.0 + lipschitz_estimate(ut));
        }
        return discrete_concavity_check(shifted, tol);
    }
    if (ut.dim() != 1) {
        throw UnsupportedCase(
            "differential criterion for general H is 1D only");
    }
    if (tol < 0.0) tol = 10.0 * ut.spacing(0) * (1.0 + 1.0 / t);
    const double hx = ut.spacing(0);
    for (int i = 1; i + 1 < ut.res(0); ++i) {
        // Parabola interpolating the 3-point stencil touches uT from below
        // at the center node; its curvature must obey the bound there.
        const double d2 =
            (ut.at(i + 1) - 2.0 * ut.at(i) + ut.at(i - 1)) / (hx * hx);
        if (d2 <= 0.0) continue;  // concave kinks pass vacuously
        const double d1 = (ut.at(i + 1) - ut.at(i - 1)) / (2.0 * hx);
        if (d2 > 1.0 / (t * h.hess1(d1)) + tol) return false;
    }
    return true;
}

double semiconcavity_constant(const GridFn& ut) {
    double c = 0.0;
    const int n0 = ut.res(0), n1 = ut.dim() == 2 ? ut.res(1) : 1;
    const double h0 = ut.spacing(0), h1 = ut.dim() == 2 ? ut.spacing(1) : 0.0;
    const int kmax0 = std::max(1, (n0 - 1) / 4);
    for (int k = 1; k <= kmax0; k *= 2) {
        const int k1 = ut.dim() == 2 ? k : 0;
        for (int i = 0; i < n0; ++i) {
            for (int j = 0; j < n1; ++j) {
                auto quot = [&](int di, int dj) {
                    const int jlo = std::min(j - dj, j + dj);
                    const int jhi = std::max(j - dj, j + dj);
                    if (i - di < 0 || i + di >= n0 || jlo < 0 || jhi >= n1) {
                        return;
                    }
                    const double num = ut.at(i + di, j + dj) +
                                       ut.at(i - di, j - dj) -
                                       2.0 * ut.at(i, j);
                    const double step2 = di * di * h0 * h0 +
                                         double(dj) * dj * h1 * h1;
                    c = std::max(c, num / step2);
                };
                quot(k, 0);
                if (ut.dim() == 2) {
                    quot(0, k1);
                    quot(k, k1);
                    quot(k, -k1);
                }
            }
        }
    }
    return c;
}

ReachabilityReport full_report(const Hamiltonian& h, const GridFn& ut,
                               double t, double tol_reach,
                               std::optional<Box> roi) {
    ReachabilityReport rep;
    rep.tol_reach = tol_reach < 0.0 ? default_tol_reach(ut, t) : tol_reach;
    std::tie(rep.fixedpoint_verdict, rep.fixedpoint_residual) =
        check_fixedpoint(h, ut, t, rep.tol_reach, roi);
    rep.differential_verdict = check_differential(h, ut, t);
    rep.semiconcavity_constant = semiconcavity_constant(ut);
    if (h.is_quadratic()) {
        const auto& a = h.quadratic_form();
        rep.necessary_bound = 1.0 / (t * a.lambda_min());
        rep.sufficient_bound = 1.0 / (t * a.lambda_max());
    } else {
        // Probe H_pp extremes over the slope window.
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        const int probes = 257;
        for (int i = 0; i < probes; ++i) {
            const double p = h.slope_limit() *
                             (2.0 * i / double(probes - 1) - 1.0);
            const double hp = h.hess1(p);
            lo = std::min(lo, hp);
            hi = std::max(hi, hp);
        }
        rep.necessary_bound = 1.0 / (t * lo);
        rep.sufficient_bound = 1.0 / (t * hi);
    }
    if (rep.fixedpoint_verdict == rep.differential_verdict) {
        rep.verdict = rep.fixedpoint_verdict ? Verdict::Reachable
                                             : Verdict::NotReachable;
    } else {
        rep.verdict = Verdict::Indeterminate;  // discretization artifact
    }
    return rep;
}

std::string ReachabilityReport::to_json(const GridFn& grid) const {
    nlohmann::json j;
    j["fixedpoint_residual"] = fixedpoint_residual;
    j["fixedpoint_verdict"] = fixedpoint_verdict;
    j["differential_verdict"] = differential_verdict;
    j["semiconcavity_constant"] = semiconcavity_constant;
    j["necessary_bound"] = necessary_bound;
    j["sufficient_bound"] = sufficient_bound;
    j["tol_reach"] = tol_reach;
    j["verdict"] = to_string(verdict);
    j["grid"]["dim"] = grid.dim();
    for (int a = 0; a < grid.dim(); ++a) {
        j["grid"]["box"].push_back({grid.box().lo[a], grid.box().hi[a]});
        j["grid"]["res"].push_back(grid.res(a));
        j["grid"]["h"].push_back(grid.spacing(a));
    }
    return j.dump(2);
}

}  // namespace hj
