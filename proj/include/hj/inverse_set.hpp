#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hj/gridfn.hpp"
#include "hj/hamiltonian.hpp"

namespace hj {

/// Coincidence set X_T(uT) as a boolean grid plus the gradient-pushforward
/// pairs that generated it.
struct XSetMask {
    enum class Method { GradientPushforward, ExposedPoint };

    GridFn grid;                        // geometry carrier; values unused
    std::vector<std::uint8_t> mask;     // one flag per node
    struct Pushforward {
        std::array<double, 2> source;
        std::array<double, 2> image;
    };
    std::vector<Pushforward> pushforward_points;
    Method method = Method::GradientPushforward;

    bool at(int i, int j = 0) const {
        return mask[static_cast<size_t>(grid.flat(i, j))] != 0;
    }
    /// True iff the node and its full k-cell neighborhood are masked.
    bool eroded_at(int i, int j, int cells) const;

    void write_csv_file(const std::string& path) const;
    std::string pushforward_json() const;
};

/// Minimal initial datum S_T^- uT. Refuses targets whose fixed-point
/// residual exceeds tol_reach.
GridFn minimal_initial(const Hamiltonian& h, const GridFn& ut, double t,
                       double tol_reach = -1.0);

/// diff_tol default: 5 * h * (1 + Lip).
double default_diff_tol(const GridFn& ut);

/// X_T(uT) by pushing differentiability nodes z forward to
/// z - T grad_H(grad uT(z)); images are rasterized with a 1.5-cell dilation.
XSetMask xset_gradient(const Hamiltonian& h, const GridFn& ut, double t,
                       double diff_tol = -1.0, double tol_reach = -1.0);

/// X_T from any member u0 of I_T(uT): exposed vertices of the lower convex
/// hull of u0 + <A^-1 x, x>/(2T). Quadratic forms only. When uT is given,
/// membership of u0 is verified first.
XSetMask xset_exposed(const Hamiltonian& h, const GridFn& u0_any, double t,
                      const GridFn* ut = nullptr, double expose_tol = -1.0,
                      double tol_reach = -1.0);

/// Initial-datum membership test against the minimal datum and mask:
/// u0 >= u0_min - tol everywhere and equality on the mask eroded by two
/// cells. With resolve = true the verdict is cross-checked by a forward
/// re-solve against uT.
bool membership(const Hamiltonian& h, const GridFn& u0, const GridFn& ut,
                double t, double tol = -1.0, bool resolve = false);

struct BumpSpec {
    std::array<double, 2> center{0.0, 0.0};
    double radius = 0.0;
    double height = 0.0;  // cone peak; nonnegative
};

/// u0_min plus a nonnegative cone bump supported in the mask complement
/// (eroded by two cells). Members of I_T(uT) by construction.
GridFn sample_member(const GridFn& u0_min, const XSetMask& xset,
                     const BumpSpec& bump);

}  // namespace hj
