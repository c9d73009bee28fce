#include "hj/inverse_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "hj/envelope.hpp"
#include "hj/hopflax.hpp"
#include "hj/reachability.hpp"
#include "json.hpp"

namespace hj {

namespace {

// --- tiny dense LP (Seidel's randomized algorithm, d <= 3) ---------------
//
// maximize c.y subject to a_i.y <= b_i and |y_k| <= bound_k. Used to price
// the envelope after removing one hull point; dimensions are 2 (1D grids)
// or 3 (2D grids).

struct LpConstraint {
    std::array<double, 3> a{0.0, 0.0, 0.0};
    double b = 0.0;
};

constexpr double kLpEps = 1e-9;

std::optional<std::array<double, 3>> seidel_lp(
    std::vector<LpConstraint> cons, std::array<double, 3> c,
    std::array<double, 3> bound, int d, std::mt19937_64& rng) {
    if (d == 1) {
        double lo = -bound[0], hi = bound[0];
        for (const auto& cc : cons) {
            if (cc.a[0] > kLpEps) {
                hi = std::min(hi, cc.b / cc.a[0]);
            } else if (cc.a[0] < -kLpEps) {
                lo = std::max(lo, cc.b / cc.a[0]);
            } else if (cc.b < -kLpEps) {
                return std::nullopt;
            }
        }
        if (lo > hi + kLpEps) return std::nullopt;
        return std::array<double, 3>{c[0] >= 0.0 ? hi : lo, 0.0, 0.0};
    }
    std::shuffle(cons.begin(), cons.end(), rng);
    std::array<double, 3> y{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k) y[k] = c[k] >= 0.0 ? bound[k] : -bound[k];

    auto dot = [d](const std::array<double, 3>& a,
                   const std::array<double, 3>& y2) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += a[k] * y2[k];
        return s;
    };

    for (size_t i = 0; i < cons.size(); ++i) {
        if (dot(cons[i].a, y) <= cons[i].b + kLpEps) continue;
        // Optimum moves onto the violated constraint's hyperplane.
        const auto& av = cons[i].a;
        int piv = 0;
        for (int k = 1; k < d; ++k) {
            if (std::abs(av[k]) > std::abs(av[piv])) piv = k;
        }
        if (std::abs(av[piv]) < kLpEps) return std::nullopt;

        // Eliminate y[piv] = (b - sum_{j != piv} a_j y_j) / a_piv.
        auto reduce = [&](const std::array<double, 3>& a, double b,
                          std::array<double, 3>& ra, double& rb) {
            const double f = a[piv] / av[piv];
            int t = 0;
            for (int k = 0; k < d; ++k) {
                if (k == piv) continue;
                ra[t++] = a[k] - f * av[k];
            }
            rb = b - f * cons[i].b;
        };
        std::vector<LpConstraint> sub;
        sub.reserve(i + 2);
        for (size_t j = 0; j < i; ++j) {
            LpConstraint rc;
            reduce(cons[j].a, cons[j].b, rc.a, rc.b);
            sub.push_back(rc);
        }
        // The eliminated variable's box bound becomes two constraints.
        for (const double sgn : {1.0, -1.0}) {
            std::array<double, 3> a{0.0, 0.0, 0.0};
            a[piv] = sgn;
            LpConstraint rc;
            reduce(a, bound[piv], rc.a, rc.b);
            sub.push_back(rc);
        }
        std::array<double, 3> rc_obj{0.0, 0.0, 0.0};
        double unused = 0.0;
        reduce(c, 0.0, rc_obj, unused);
        std::array<double, 3> rbound{0.0, 0.0, 0.0};
        {
            int t = 0;
            for (int k = 0; k < d; ++k) {
                if (k != piv) rbound[t++] = bound[k];
            }
        }
        const auto sol = seidel_lp(std::move(sub), rc_obj, rbound, d - 1, rng);
        if (!sol) return std::nullopt;
        int t = 0;
        double pv = cons[i].b;
        for (int k = 0; k < d; ++k) {
            if (k == piv) continue;
            y[k] = (*sol)[t++];
            pv -= av[k] * y[k];
        }
        y[piv] = pv / av[piv];
    }
    return y;
}

}  // namespace

bool XSetMask::eroded_at(int i, int j, int cells) const {
    const int n0 = grid.res(0), n1 = grid.dim() == 2 ? grid.res(1) : 1;
    for (int di = -cells; di <= cells; ++di) {
        for (int dj = -cells; dj <= cells; ++dj) {
            const int ii = i + di, jj = j + dj;
            if (ii < 0 || ii >= n0 || jj < 0 || jj >= n1) return false;
            if (!at(ii, jj)) return false;
        }
    }
    return true;
}

void XSetMask::write_csv_file(const std::string& path) const {
    GridFn f = grid;
    for (std::int64_t k = 0; k < f.size(); ++k) {
        f.values()[k] = mask[static_cast<size_t>(k)] ? 1.0 : 0.0;
    }
    hj::write_csv_file(f, path);
}

std::string XSetMask::pushforward_json() const {
    nlohmann::json j;
    j["method"] = method == Method::GradientPushforward ? "gradient_pushforward"
                                                        : "exposed_point";
    auto& arr = j["pushforward_points"];
    arr = nlohmann::json::array();
    for (const auto& p : pushforward_points) {
        nlohmann::json e;
        for (int a = 0; a < grid.dim(); ++a) {
            e["source"].push_back(p.source[a]);
            e["image"].push_back(p.image[a]);
        }
        arr.push_back(e);
    }
    return j.dump();
}

GridFn minimal_initial(const Hamiltonian& h, const GridFn& ut, double t,
                       double tol_reach) {
    const auto [ok, residual] = check_fixedpoint(h, ut, t, tol_reach);
    if (!ok) {
        throw TargetNotReachable("fixed-point residual " +
                                 std::to_string(residual) +
                                 " exceeds tolerance");
    }
    return backward(h, ut, t);
}

double default_diff_tol(const GridFn& ut) {
    return 5.0 * ut.max_spacing() * (1.0 + lipschitz_estimate(ut));
}

namespace {

void rasterize_image(XSetMask& xs, std::array<double, 2> img) {
    const auto& g = xs.grid;
    const int n0 = g.res(0), n1 = g.dim() == 2 ? g.res(1) : 1;
    // Dilation radius 1.5 cells around the image point.
    const double ti = (img[0] - g.box().lo[0]) / g.spacing(0);
    const double tj =
        g.dim() == 2 ? (img[1] - g.box().lo[1]) / g.spacing(1) : 0.0;
    for (int i = std::max(0, int(std::ceil(ti - 1.5)));
         i <= std::min(n0 - 1, int(std::floor(ti + 1.5))); ++i) {
        if (g.dim() == 1) {
            xs.mask[static_cast<size_t>(g.flat(i, 0))] = 1;
            continue;
        }
        for (int j = std::max(0, int(std::ceil(tj - 1.5)));
             j <= std::min(n1 - 1, int(std::floor(tj + 1.5))); ++j) {
            const double d2 = (i - ti) * (i - ti) + (j - tj) * (j - tj);
            if (d2 <= 1.5 * 1.5) {
                xs.mask[static_cast<size_t>(g.flat(i, j))] = 1;
            }
        }
    }
}

}  // namespace

XSetMask xset_gradient(const Hamiltonian& h, const GridFn& ut, double t,
                       double diff_tol, double tol_reach) {
    const auto [ok, residual] = check_fixedpoint(h, ut, t, tol_reach);
    if (!ok) {
        throw TargetNotReachable("xset_gradient: target not reachable");
    }
    if (diff_tol < 0.0) diff_tol = default_diff_tol(ut);

    XSetMask xs;
    xs.grid = ut;
    std::fill(xs.grid.values().begin(), xs.grid.values().end(), 0.0);
    xs.mask.assign(static_cast<size_t>(ut.size()), 0);
    xs.method = XSetMask::Method::GradientPushforward;

    const int n0 = ut.res(0), n1 = ut.dim() == 2 ? ut.res(1) : 1;
    for (int i = 1; i + 1 < n0; ++i) {
        for (int j = (ut.dim() == 2 ? 1 : 0);
             j < (ut.dim() == 2 ? n1 - 1 : 1); ++j) {
            bool differentiable = true;
            Eigen::VectorXd grad(ut.dim());
            {
                const double fwd = (ut.at(i + 1, j) - ut.at(i, j)) / ut.spacing(0);
                const double bwd = (ut.at(i, j) - ut.at(i - 1, j)) / ut.spacing(0);
                if (std::abs(fwd - bwd) > diff_tol) differentiable = false;
                grad(0) = 0.5 * (fwd + bwd);
            }
            if (ut.dim() == 2 && differentiable) {
                const double fwd = (ut.at(i, j + 1) - ut.at(i, j)) / ut.spacing(1);
                const double bwd = (ut.at(i, j) - ut.at(i, j - 1)) / ut.spacing(1);
                if (std::abs(fwd - bwd) > diff_tol) differentiable = false;
                grad(1) = 0.5 * (fwd + bwd);
            }
            if (!differentiable) continue;

            const Eigen::VectorXd speed = h.grad(grad);
            std::array<double, 2> src{ut.coord(0, i),
                                      ut.dim() == 2 ? ut.coord(1, j) : 0.0};
            std::array<double, 2> img{src[0] - t * speed(0),
                                      ut.dim() == 2 ? src[1] - t * speed(1)
                                                    : 0.0};
            xs.pushforward_points.push_back({src, img});
            rasterize_image(xs, img);
        }
    }
    return xs;
}

XSetMask xset_exposed(const Hamiltonian& h, const GridFn& u0_any, double t,
                      const GridFn* ut, double expose_tol, double tol_reach) {
    const auto& a = h.quadratic_form();  // throws NotQuadratic otherwise
    if (ut) {
        if (tol_reach < 0.0) tol_reach = default_tol_reach(*ut, t);
        const GridFn fwd = forward(h, u0_any, t);
        Box roi = ut->box();
        const double m = dependence_margin(h, u0_any, t);
        for (int ax = 0; ax < roi.dim; ++ax) {
            const int cells = int(std::ceil(m / ut->spacing(ax)));
            roi.lo[ax] += cells * ut->spacing(ax);
            roi.hi[ax] -= cells * ut->spacing(ax);
        }
        if (sup_norm_diff(restrict_to(fwd, roi), restrict_to(*ut, roi)) >
            tol_reach) {
            throw NotMember("xset_exposed: u0 does not reproduce the target");
        }
    }
    if (expose_tol < 0.0) {
        // A strictly exposed node on a curvature-1/(t lambda) arc rises by
        // h^2 / (2 t lambda) when excluded; use half of the weakest such
        // signal so marginal vertices are not lost to rounding.
        const double hmax = u0_any.max_spacing();
        expose_tol = hmax * hmax / (4.0 * t * a.lambda_max());
    }

    // g = u0 + Q; its lower convex envelope is -concave_envelope(-g).
    GridFn g = u0_any;
    const GridFn q = sample_quadratic_shift(a, u0_any, t);
    for (std::int64_t k = 0; k < g.size(); ++k) {
        g.values()[k] += q.values()[k];
    }
    GridFn neg = g;
    for (auto& v : neg.values()) v = -v;
    const EnvelopeResult hull = concave_envelope(neg);
    GridFn env = hull.envelope;
    for (auto& v : env.values()) v = -v;  // lower convex envelope of g

    XSetMask xs;
    xs.grid = u0_any;
    std::fill(xs.grid.values().begin(), xs.grid.values().end(), 0.0);
    xs.mask.assign(static_cast<size_t>(g.size()), 0);
    xs.method = XSetMask::Method::ExposedPoint;

    const int n0 = g.res(0), n1 = g.dim() == 2 ? g.res(1) : 1;

    if (g.dim() == 1) {
        // Exact 1D exposure: a contact node is a hull vertex iff, with the
        // node removed, the envelope there is carried by the chord through
        // its neighboring contact nodes and rises by more than expose_tol.
        // The 1D envelope is exact chord arithmetic, so true contacts sit
        // at rounding distance; testing at exposure scale keeps strictly
        // interior (non-minimizer) nodes out regardless of the data's
        // Lipschitz constant.
        std::vector<int> contacts;
        for (int i = 0; i < n0; ++i) {
            if (g.at(i) - env.at(i) <= expose_tol) contacts.push_back(i);
        }
        for (size_t m = 0; m < contacts.size(); ++m) {
            const int k = contacts[m];
            double rise;
            if (m == 0 || m + 1 == contacts.size()) {
                rise = 2.0 * expose_tol;  // box-edge anchors stay marked
            } else {
                const int a0 = contacts[m - 1], b0 = contacts[m + 1];
                const double w = double(k - a0) / double(b0 - a0);
                rise = (1.0 - w) * g.at(a0) + w * g.at(b0) - g.at(k);
            }
            if (rise > expose_tol) {
                xs.mask[static_cast<size_t>(k)] = 1;
                xs.pushforward_points.push_back(
                    {{g.coord(0, k), 0.0}, {g.coord(0, k), 0.0}});
            }
        }
        return xs;
    }

    double gmax = 1.0;
    for (double v : g.values()) gmax = std::max(gmax, std::abs(v));
    const double slope_bound =
        10.0 * (1.0 + lipschitz_estimate(g));
    const double gamma_bound =
        10.0 * (gmax + slope_bound * (std::abs(g.box().hi[0]) +
                                      std::abs(g.box().lo[0]) + 10.0));
    const int d = g.dim() + 1;
    // Candidate pricing is restricted to a window in 2D; a supporting plane
    // pivoting about nearby contacts decides exposure at grid scale.
    const int window = g.dim() == 1 ? n0 : 25;
    std::mt19937_64 rng(12345);

    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            const auto k = static_cast<size_t>(g.flat(i, j));
            if (g.values()[k] - env.values()[k] > hull.contact_tol) continue;

            const double x0 = g.coord(0, i);
            const double y0 = g.dim() == 2 ? g.coord(1, j) : 0.0;
            std::vector<LpConstraint> cons;
            for (int ii = std::max(0, i - window);
                 ii <= std::min(n0 - 1, i + window); ++ii) {
                for (int jj = std::max(0, j - (g.dim() == 2 ? window : 0));
                     jj <= std::min(n1 - 1, j + (g.dim() == 2 ? window : 0));
                     ++jj) {
                    if (ii == i && jj == j) continue;
                    LpConstraint cc;
                    cc.a[0] = g.coord(0, ii);
                    if (g.dim() == 2) cc.a[1] = g.coord(1, jj);
                    cc.a[d - 1] = 1.0;
                    cc.b = g.at(ii, jj);
                    cons.push_back(cc);
                }
            }
            std::array<double, 3> obj{x0, 0.0, 0.0};
            obj[d - 1] = 1.0;
            if (g.dim() == 2) obj[1] = y0;
            std::array<double, 3> bound{slope_bound, slope_bound, slope_bound};
            bound[d - 1] = gamma_bound;
            const auto sol = seidel_lp(cons, obj, bound, d, rng);
            if (!sol) continue;
            double lifted = (*sol)[d - 1] + (*sol)[0] * x0;
            if (g.dim() == 2) lifted += (*sol)[1] * y0;
            if (lifted - g.values()[k] > expose_tol) {
                xs.mask[k] = 1;
                xs.pushforward_points.push_back(
                    {{x0, y0}, {x0, y0}});
            }
        }
    }
    return xs;
}

bool membership(const Hamiltonian& h, const GridFn& u0, const GridFn& ut,
                double t, double tol, bool resolve) {
    if (!u0.same_grid(ut)) throw GridMismatch("membership: grids differ");
    if (tol < 0.0) tol = default_tol_reach(ut, t);
    const GridFn u0_min = minimal_initial(h, ut, t);  // throws if unreachable
    const XSetMask xs = xset_gradient(h, ut, t);

    const int n0 = u0.res(0), n1 = u0.dim() == 2 ? u0.res(1) : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            const double d = u0.at(i, j) - u0_min.at(i, j);
            if (d < -tol) return false;
            if (xs.eroded_at(i, j, 2) && std::abs(d) > tol) return false;
        }
    }
    if (resolve) {
        const GridFn fwd = forward(h, u0, t);
        Box roi = ut.box();
        const double m = dependence_margin(h, u0, t);
        for (int ax = 0; ax < roi.dim; ++ax) {
            const int cells = int(std::ceil(m / ut.spacing(ax)));
            roi.lo[ax] += cells * ut.spacing(ax);
            roi.hi[ax] -= cells * ut.spacing(ax);
        }
        if (sup_norm_diff(restrict_to(fwd, roi), restrict_to(ut, roi)) > tol) {
            return false;
        }
    }
    return true;
}

GridFn sample_member(const GridFn& u0_min, const XSetMask& xset,
                     const BumpSpec& bump) {
    if (!u0_min.same_grid(xset.grid)) {
        throw GridMismatch("sample_member: mask grid differs");
    }
    if (bump.height < 0.0 || bump.radius < 0.0) {
        throw Error("sample_member: bump height/radius must be nonnegative");
    }
    GridFn out = u0_min;
    if (bump.height == 0.0 || bump.radius == 0.0) return out;

    const int n0 = out.res(0), n1 = out.dim() == 2 ? out.res(1) : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            double dx = out.coord(0, i) - bump.center[0];
            double dist = std::abs(dx);
            if (out.dim() == 2) {
                dist = std::hypot(dx, out.coord(1, j) - bump.center[1]);
            }
            if (dist >= bump.radius) continue;
            // Support node: the surrounding 2-cell neighborhood must avoid
            // the mask (support inside the complement eroded by 2 cells).
            for (int di = -2; di <= 2; ++di) {
                for (int dj = (out.dim() == 2 ? -2 : 0);
                     dj <= (out.dim() == 2 ? 2 : 0); ++dj) {
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= n0 || jj < 0 || jj >= n1) continue;
                    if (xset.at(ii, jj)) {
                        throw SupportViolation(
                            "sample_member: bump support meets X_T mask");
                    }
                }
            }
            out.at(i, j) += bump.height * (1.0 - dist / bump.radius);
        }
    }
    return out;
}

}  // namespace hj
