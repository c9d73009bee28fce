#include "hj/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hull3d.hpp"

namespace hj {

namespace {

GridFn upper_hull_1d(const GridFn& f) {
    const int n = f.res(0);
    const double h = f.spacing(0);
    // Monotone chain over (i*h, f_i); long double keeps the cross products
    // of desk-scale grids exact to well below any contact tolerance.
    std::vector<int> st;
    st.reserve(n);
    auto cross = [&](int o, int a, int b) -> long double {
        const long double ax = (long double)(a - o) * h;
        const long double ay = (long double)f.at(a) - f.at(o);
        const long double bx = (long double)(b - o) * h;
        const long double by = (long double)f.at(b) - f.at(o);
        return ax * by - ay * bx;
    };
    for (int i = 0; i < n; ++i) {
        while (st.size() >= 2 &&
               cross(st[st.size() - 2], st[st.size() - 1], i) >= 0.0L) {
            st.pop_back();
        }
        st.push_back(i);
    }
    GridFn env = f;
    for (size_t k = 0; k + 1 < st.size(); ++k) {
        const int a = st[k], b = st[k + 1];
        for (int i = a; i <= b; ++i) {
            const double w = double(i - a) / double(b - a);
            env.at(i) = (1.0 - w) * f.at(a) + w * f.at(b);
        }
    }
    return env;
}

GridFn lifted_hull_2d(const GridFn& f) {
    using detail::HullPoint;
    const int n0 = f.res(0), n1 = f.res(1);
    // Scale values to integers; the quantization error is far below the
    // grid-scale tolerances everything downstream uses.
    double fmax = 1.0;
    for (double v : f.values()) fmax = std::max(fmax, std::abs(v));
    const double scale = double(std::int64_t(1) << 40) / fmax;

    std::vector<HullPoint> pts;
    pts.reserve(static_cast<size_t>(f.size()));
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            pts.push_back({i, j, std::llround(f.at(i, j) * scale)});
        }
    }
    const auto faces = detail::convex_hull_3d(pts);

    GridFn env = f;
    std::fill(env.values().begin(), env.values().end(),
              std::numeric_limits<double>::infinity());
    for (const auto& face : faces) {
        const int ai = int(face.a) / n1, aj = int(face.a) % n1;
        const int bi = int(face.b) / n1, bj = int(face.b) % n1;
        const int ci = int(face.c) / n1, cj = int(face.c) % n1;
        // Outward normal z-component; keep upper facets only.
        const long long nz =
            (long long)(bi - ai) * (cj - aj) - (long long)(bj - aj) * (ci - ai);
        if (nz <= 0) continue;
        // Facet plane from the original (unquantized) samples. Every facet
        // plane of a concave surface dominates the surface globally, so a
        // pointwise min over covering facets reproduces it exactly.
        const double fa = f.at(ai, aj), fb = f.at(bi, bj), fc = f.at(ci, cj);
        const double det = double(nz);
        const double alpha =
            ((fb - fa) * (cj - aj) - (fc - fa) * (bj - aj)) / det;
        const double beta =
            ((fc - fa) * (bi - ai) - (fb - fa) * (ci - ai)) / det;
        const int ilo = std::min({ai, bi, ci}), ihi = std::max({ai, bi, ci});
        const int jlo = std::min({aj, bj, cj}), jhi = std::max({aj, bj, cj});
        for (int i = ilo; i <= ihi; ++i) {
            for (int j = jlo; j <= jhi; ++j) {
                const double val = fa + alpha * (i - ai) + beta * (j - aj);
                env.at(i, j) = std::min(env.at(i, j), val);
            }
        }
    }
    return env;
}

}  // namespace

double default_contact_tol(const GridFn& f) {
    return 5.0 * f.max_spacing() * (1.0 + lipschitz_estimate(f));
}

EnvelopeResult concave_envelope(const GridFn& f, double contact_tol) {
    if (contact_tol < 0.0) contact_tol = default_contact_tol(f);
    EnvelopeResult out;
    out.contact_tol = contact_tol;
    if (f.dim() == 1) {
        out.envelope = upper_hull_1d(f);
        out.method = EnvelopeResult::Method::UpperHull1D;
    } else {
        out.envelope = lifted_hull_2d(f);
        out.method = EnvelopeResult::Method::LiftedHull2D;
    }
    out.contact.resize(static_cast<size_t>(f.size()));
    for (std::int64_t k = 0; k < f.size(); ++k) {
        out.contact[k] =
            out.envelope.values()[k] - f.values()[k] <= contact_tol;
    }
    return out;
}

GridFn sample_quadratic_shift(const SpdMatrix& a, const GridFn& like,
                              double t) {
    GridFn q = like;
    const auto& inv = a.inverse();
    const int n1 = like.dim() == 2 ? like.res(1) : 1;
    for (int i = 0; i < like.res(0); ++i) {
        const double x = like.coord(0, i);
        for (int j = 0; j < n1; ++j) {
            double val = inv(0, 0) * x * x;
            if (like.dim() == 2) {
                const double y = like.coord(1, j);
                val += 2.0 * inv(0, 1) * x * y + inv(1, 1) * y * y;
            }
            q.at(i, j) = val / (2.0 * t);
        }
    }
    return q;
}

GridFn semiconcave_envelope(const Hamiltonian& h, const GridFn& ut, double t) {
    if (!h.is_quadratic()) {
        throw NotQuadratic("semiconcave_envelope needs a quadratic form");
    }
    if (!(t > 0.0)) throw Error("semiconcave_envelope: T must be positive");
    const GridFn q = sample_quadratic_shift(h.quadratic_form(), ut, t);
    GridFn shifted = ut;
    for (std::int64_t k = 0; k < ut.size(); ++k) {
        shifted.values()[k] -= q.values()[k];
    }
    GridFn env = concave_envelope(shifted).envelope;
    for (std::int64_t k = 0; k < ut.size(); ++k) {
        env.values()[k] += q.values()[k];
    }
    return env;
}

ObstacleResidual obstacle_residual(const GridFn& v, const GridFn& ut,
                                   const Hamiltonian& h, double t,
                                   double tol_a, double tol_b,
                                   double kink_tol) {
    if (!v.same_grid(ut)) throw GridMismatch("obstacle_residual: grids");
    const auto& inv = h.quadratic_form().inverse();
    const double hmax = v.max_spacing();
    if (tol_a < 0.0) tol_a = 10.0 * hmax;
    if (tol_b < 0.0) tol_b = 10.0 * hmax;
    if (kink_tol < 0.0) kink_tol = 0.5 * std::max(1.0, lipschitz_estimate(v));

    ObstacleResidual res;
    double worst = std::numeric_limits<double>::infinity();
    const int n0 = v.res(0), n1 = v.dim() == 2 ? v.res(1) : 1;
    const double h0 = v.spacing(0), h1 = v.dim() == 2 ? v.spacing(1) : 1.0;
    for (int i = 1; i + 1 < n0; ++i) {
        for (int j = (v.dim() == 2 ? 1 : 0);
             j < (v.dim() == 2 ? n1 - 1 : 1); ++j) {
            const double a = v.at(i, j) - ut.at(i, j);

            bool kink =
                std::abs((v.at(i + 1, j) - v.at(i, j)) / h0 -
                         (v.at(i, j) - v.at(i - 1, j)) / h0) > kink_tol;
            if (v.dim() == 2 && !kink) {
                kink = std::abs((v.at(i, j + 1) - v.at(i, j)) / h1 -
                                (v.at(i, j) - v.at(i, j - 1)) / h1) > kink_tol;
            }
            if (kink) {
                ++res.kink_exempt_nodes;
                worst = std::min(worst, a + tol_a);
                continue;
            }

            double b;
            if (v.dim() == 1) {
                const double d2 =
                    (v.at(i + 1) - 2.0 * v.at(i) + v.at(i - 1)) / (h0 * h0);
                b = -(d2 - inv(0, 0) / t);
            } else {
                const double dxx = (v.at(i + 1, j) - 2.0 * v.at(i, j) +
                                    v.at(i - 1, j)) /
                                   (h0 * h0);
                const double dyy = (v.at(i, j + 1) - 2.0 * v.at(i, j) +
                                    v.at(i, j - 1)) /
                                   (h1 * h1);
                const double dxy = (v.at(i + 1, j + 1) - v.at(i + 1, j - 1) -
                                    v.at(i - 1, j + 1) + v.at(i - 1, j - 1)) /
                                   (4.0 * h0 * h1);
                const double mxx = dxx - inv(0, 0) / t;
                const double myy = dyy - inv(1, 1) / t;
                const double mxy = dxy - inv(0, 1) / t;
                const double mean = 0.5 * (mxx + myy);
                const double disc =
                    std::sqrt(0.25 * (mxx - myy) * (mxx - myy) + mxy * mxy);
                b = -(mean + disc);
            }
            // The variational inequality: v >= uT everywhere; off contact
            // the curvature bound saturates (b = 0). At contact nodes b is
            // unconstrained -- the obstacle's own curvature shows through
            // wherever it exceeds the bound, e.g. along cone flanks.
            worst = std::min(worst, a + tol_a);
            if (a > tol_a) worst = std::min(worst, b + tol_b);
            // Complementarity defect: a node strictly above the obstacle
            // with strictly unsaturated curvature (a > 0 and b > 0).
            res.complementarity = std::max(
                res.complementarity,
                std::max(0.0, std::min(a, std::max(b, 0.0))));
        }
    }
    res.min_violation = std::max(0.0, -worst);
    return res;
}

bool discrete_concavity_check(const GridFn& f, double contact_tol) {
    if (contact_tol < 0.0) contact_tol = default_contact_tol(f);
    const GridFn env = concave_envelope(f, contact_tol).envelope;
    return sup_norm_diff(f, env) <= contact_tol;
}

}  // namespace hj
