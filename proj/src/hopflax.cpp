#include "hj/hopflax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool has_fast_path(const Hamiltonian& h) {
    if (!h.is_quadratic()) return false;
    const auto& a = h.quadratic_form().mat();
    if (a.rows() == 1) return true;
    return a(0, 1) == 0.0 && a(1, 0) == 0.0;
}

/// 1D lower envelope of parabolas: g[i] = min_j f[j] + w (i-j)^2 h^2.
/// Felzenszwalb-Huttenlocher sweep, linear time.
void quad_inf_conv_1d(const double* f, int n, std::int64_t stride, double wh2,
                      double* out) {
    thread_local std::vector<int> v;
    thread_local std::vector<double> z;
    v.assign(n, 0);
    z.assign(n + 1, 0.0);
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        const double fq = f[q * stride] + wh2 * double(q) * q;
        for (;;) {
            const int p = v[k];
            const double fp = f[p * stride] + wh2 * double(p) * p;
            const double s = (fq - fp) / (2.0 * wh2 * (q - p));
            if (s <= z[k] && k > 0) {
                --k;
                continue;
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = kInf;
            break;
        }
    }
    k = 0;
    for (int i = 0; i < n; ++i) {
        while (z[k + 1] < i) ++k;
        const int j = v[k];
        out[i * stride] = f[j * stride] + wh2 * double(i - j) * (i - j);
    }
}

GridFn forward_fast(const Hamiltonian& h, const GridFn& u0, double t) {
    const auto& inv = h.quadratic_form().inverse();
    GridFn out = u0;
    // Axis 0 sweep.
    {
        const double w = inv(0, 0) / (2.0 * t);
        const double wh2 = w * u0.spacing(0) * u0.spacing(0);
        const int n0 = u0.res(0);
        const int n1 = u0.dim() == 2 ? u0.res(1) : 1;
        std::vector<double> col(n0);
        for (int j = 0; j < n1; ++j) {
            quad_inf_conv_1d(&u0.values()[u0.flat(0, j)], n0, n1, wh2,
                             &out.values()[out.flat(0, j)]);
        }
    }
    if (u0.dim() == 2) {
        const double w = inv(1, 1) / (2.0 * t);
        const double wh2 = w * u0.spacing(1) * u0.spacing(1);
        GridFn tmp = out;
        for (int i = 0; i < u0.res(0); ++i) {
            quad_inf_conv_1d(&tmp.values()[tmp.flat(i, 0)], u0.res(1), 1, wh2,
                             &out.values()[out.flat(i, 0)]);
        }
    }
    return out;
}

struct Window {
    int w0 = 0, w1 = 0;               // half-widths in cells per axis
    std::vector<double> kernel;       // (2w0+1) x (2w1+1), row-major
    double k(int d0, int d1) const {
        return kernel[std::int64_t(d0 + w0) * (2 * w1 + 1) + (d1 + w1)];
    }
};

/// Tabulates T * L(offset / T) for all offsets inside the dependence
/// window, padded by two safety cells. Offsets whose velocity leaves a
/// Scalar1D Legendre range are priced at +inf; the margin bound keeps the
/// true minimizer strictly inside.
Window make_window(const Hamiltonian& h, const GridFn& u0, double t) {
    const double r = dependence_margin(h, u0, t);
    Window w;
    w.w0 = std::min(u0.res(0) - 1,
                    int(std::ceil(r / u0.spacing(0))) + 2);
    if (u0.dim() == 2) {
        w.w1 = std::min(u0.res(1) - 1,
                        int(std::ceil(r / u0.spacing(1))) + 2);
    }
    w.kernel.resize(std::int64_t(2 * w.w0 + 1) * (2 * w.w1 + 1));
    Eigen::VectorXd q(u0.dim());
    std::int64_t idx = 0;
    for (int d0 = -w.w0; d0 <= w.w0; ++d0) {
        for (int d1 = -w.w1; d1 <= w.w1; ++d1, ++idx) {
            q(0) = d0 * u0.spacing(0) / t;
            if (u0.dim() == 2) q(1) = d1 * u0.spacing(1) / t;
            try {
                w.kernel[idx] = t * h.legendre(q);
            } catch (const DomainExceeded&) {
                w.kernel[idx] = kInf;
            }
        }
    }
    return w;
}

}  // namespace

double default_tie_tol(const GridFn& f, double factor) {
    return 10.0 * f.max_spacing() * (1.0 + lipschitz_estimate(f)) * factor;
}

GridFn forward_brute(const Hamiltonian& h, const GridFn& u0, double t) {
    if (!(t > 0.0)) throw Error("forward: T must be positive");
    const Window w = make_window(h, u0, t);
    GridFn out = u0;
    const int n0 = u0.res(0);
    const int n1 = u0.dim() == 2 ? u0.res(1) : 1;
    for (int i = 0; i < n0; ++i) {
        const int d0lo = std::max(-w.w0, i - (n0 - 1));
        const int d0hi = std::min(w.w0, i);
        for (int j = 0; j < n1; ++j) {
            const int d1lo = std::max(-w.w1, j - (n1 - 1));
            const int d1hi = std::min(w.w1, j);
            double best = kInf;
            for (int d0 = d0lo; d0 <= d0hi; ++d0) {
                const double* row = &u0.values()[u0.flat(i - d0, j - d1lo)];
                const double* ker = &w.kernel[std::int64_t(d0 + w.w0) *
                                                  (2 * w.w1 + 1) +
                                              (d1lo + w.w1)];
                for (int d1 = d1lo; d1 <= d1hi; ++d1) {
                    const double cand = row[d1lo - d1] + ker[d1 - d1lo];
                    if (cand < best) best = cand;
                }
            }
            out.at(i, j) = best;
        }
    }
    return out;
}

std::pair<GridFn, ArgminMap> forward_with_argmin(const Hamiltonian& h,
                                                 const GridFn& u0, double t,
                                                 double tie_tol) {
    if (!(t > 0.0)) throw Error("forward_with_argmin: T must be positive");
    if (tie_tol < 0.0) tie_tol = default_tie_tol(u0);
    const Window w = make_window(h, u0, t);
    GridFn out = u0;
    ArgminMap amap;
    amap.tie_tol = tie_tol;
    amap.minimizers.resize(static_cast<size_t>(u0.size()));
    const int n0 = u0.res(0);
    const int n1 = u0.dim() == 2 ? u0.res(1) : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            double best = kInf;
            for (int d0 = std::max(-w.w0, i - (n0 - 1));
                 d0 <= std::min(w.w0, i); ++d0) {
                for (int d1 = std::max(-w.w1, j - (n1 - 1));
                     d1 <= std::min(w.w1, j); ++d1) {
                    best = std::min(best,
                                    u0.at(i - d0, j - d1) + w.k(d0, d1));
                }
            }
            auto& list = amap.minimizers[static_cast<size_t>(out.flat(i, j))];
            for (int d0 = std::max(-w.w0, i - (n0 - 1));
                 d0 <= std::min(w.w0, i); ++d0) {
                for (int d1 = std::max(-w.w1, j - (n1 - 1));
                     d1 <= std::min(w.w1, j); ++d1) {
                    if (u0.at(i - d0, j - d1) + w.k(d0, d1) <=
                        best + tie_tol) {
                        list.push_back(u0.flat(i - d0, j - d1));
                    }
                }
            }
            out.at(i, j) = best;
        }
    }
    return {std::move(out), std::move(amap)};
}

GridFn forward(const Hamiltonian& h, const GridFn& u0, double t) {
    if (!(t > 0.0)) throw Error("forward: T must be positive");
    if (has_fast_path(h)) return forward_fast(h, u0, t);
    return forward_brute(h, u0, t);
}

GridFn backward(const Hamiltonian& h, const GridFn& ut, double t) {
    GridFn neg = ut;
    for (auto& v : neg.values()) v = -v;
    GridFn out = forward(h.reflected(), neg, t);
    for (auto& v : out.values()) v = -v;
    return out;
}

GridFn compose_project(const Hamiltonian& h, const GridFn& ut, double t) {
    return forward(h, backward(h, ut, t), t);
}

}  // namespace hj
