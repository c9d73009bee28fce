#include "hj/viscosity_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hj {

namespace {

struct Scheme {
    const Hamiltonian* h;
    double sign;       // +1 forward, -1 backward regularization
    double slope_cap;  // clamp for Scalar1D evaluations
    std::array<double, 2> alpha{0.0, 0.0};

    // Slopes are clamped to the cap before evaluating H. Viscosity
    // solutions preserve the Lipschitz bound of the data, so the clamp is
    // inactive in the interior; it only tames the layer next to the frozen
    // boundary ring, where the mismatch between the Dirichlet values and
    // the PDE would otherwise feed a slope runaway that outgrows the
    // dissipation coefficient.
    double hamil(Eigen::VectorXd p) const {
        for (int k = 0; k < p.size(); ++k) {
            p(k) = std::clamp(p(k), -slope_cap, slope_cap);
        }
        if (h->is_quadratic()) return h->value(p);
        return h->value1(p(0));
    }
};

GridFn integrate(const Hamiltonian& h, const GridFn& init, double t,
                 double epsilon, double sign, ParabolicRun* run,
                 double dt_request) {
    if (!(t > 0.0) || !(epsilon > 0.0)) {
        throw Error("parabolic oracle: need T > 0 and epsilon > 0");
    }
    const int dim = init.dim();
    const double lip = lipschitz_estimate(init);

    Scheme sch;
    sch.h = &h;
    sch.sign = sign;
    sch.slope_cap = h.is_quadratic() ? lip + 0.5
                                     : std::min(h.slope_limit(), lip + 0.5);
    double maxspeed = 0.0;
    if (h.is_quadratic()) {
        const auto& a = h.quadratic_form().mat();
        for (int ax = 0; ax < dim; ++ax) {
            sch.alpha[ax] =
                a.row(ax).norm() * (sch.slope_cap * std::sqrt(double(dim)));
            maxspeed = std::max(maxspeed, sch.alpha[ax]);
        }
    } else {
        const double s = sch.slope_cap;
        sch.alpha[0] = std::max(std::abs(h.grad1(-s)), std::abs(h.grad1(s)));
        maxspeed = sch.alpha[0];
    }
    maxspeed = std::max(maxspeed, 1e-12);

    double dt_bound = std::numeric_limits<double>::infinity();
    for (int ax = 0; ax < dim; ++ax) {
        const double hx = init.spacing(ax);
        dt_bound = std::min(
            dt_bound, 0.9 * hx * hx /
                          (2.0 * dim * epsilon + hx * maxspeed * dim));
    }
    double dt = dt_request > 0.0 ? dt_request : dt_bound;
    if (dt > dt_bound * (1.0 + 1e-12)) {
        throw CflViolation("requested dt exceeds the stability bound");
    }
    const long steps = std::max(1L, long(std::ceil(t / dt)));
    dt = t / double(steps);
    if (run) {
        run->epsilon = epsilon;
        run->dt = dt;
        run->steps = steps;
        run->cfl_report = dt / dt_bound;
    }

    GridFn u = init;
    GridFn next = init;
    const int n0 = init.res(0), n1 = dim == 2 ? init.res(1) : 1;
    const double h0 = init.spacing(0), h1 = dim == 2 ? init.spacing(1) : 1.0;
    Eigen::VectorXd pavg(dim);
    for (long s = 0; s < steps; ++s) {
        for (int i = 1; i + 1 < n0; ++i) {
            for (int j = (dim == 2 ? 1 : 0); j < (dim == 2 ? n1 - 1 : 1);
                 ++j) {
                const double c = u.at(i, j);
                const double pxm = (c - u.at(i - 1, j)) / h0;
                const double pxp = (u.at(i + 1, j) - c) / h0;
                pavg(0) = 0.5 * (pxm + pxp);
                double lap = (u.at(i + 1, j) - 2.0 * c + u.at(i - 1, j)) /
                             (h0 * h0);
                double diss = sch.alpha[0] * (pxp - pxm) * 0.5;
                if (dim == 2) {
                    const double pym = (c - u.at(i, j - 1)) / h1;
                    const double pyp = (u.at(i, j + 1) - c) / h1;
                    pavg(1) = 0.5 * (pym + pyp);
                    lap += (u.at(i, j + 1) - 2.0 * c + u.at(i, j - 1)) /
                           (h1 * h1);
                    diss += sch.alpha[1] * (pyp - pym) * 0.5;
                }
                // sign=+1: u_t = eps lap - H ; sign=-1 integrates the
                // backward regularization in the substituted time s = T - t,
                // w_s = eps lap + H. The dissipation keeps the scheme
                // monotone in both directions.
                next.at(i, j) =
                    c + dt * (epsilon * lap -
                              sch.sign * sch.hamil(pavg) + diss);
            }
        }
        std::swap(u.values(), next.values());
    }
    return u;
}

}  // namespace

GridFn parabolic_forward(const Hamiltonian& h, const GridFn& u0, double t,
                         double epsilon, ParabolicRun* run,
                         double dt_request) {
    return integrate(h, u0, t, epsilon, +1.0, run, dt_request);
}

GridFn parabolic_backward(const Hamiltonian& h, const GridFn& ut, double t,
                          double epsilon, ParabolicRun* run,
                          double dt_request) {
    return integrate(h, ut, t, epsilon, -1.0, run, dt_request);
}

}  // namespace hj
