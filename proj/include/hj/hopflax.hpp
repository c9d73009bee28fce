#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hj/gridfn.hpp"
#include "hj/hamiltonian.hpp"

namespace hj {

/// Per-node minimizer lists from the brute-force Hopf-Lax path. A node with
/// a singleton list (up to grid rounding) is a differentiability point of
/// the output; multiple well-separated minimizers mark a shock.
struct ArgminMap {
    std::vector<std::vector<std::int64_t>> minimizers;  // flat input indices
    double tie_tol = 0.0;
};

/// Resolution-aware tie tolerance: 10 * h * (1 + Lip) * factor.
double default_tie_tol(const GridFn& f, double factor = 1e-4);

/// Forward viscosity operator: out(x) = min_y [u0(y) + T L((x-y)/T)] over
/// grid nodes. Exact on nodes farther than dependence_margin(H, u0, T)
/// from the box boundary. Diagonal quadratic Hamiltonians take a separable
/// per-axis lower-envelope sweep; everything else scans the dependence
/// window.
GridFn forward(const Hamiltonian& h, const GridFn& u0, double t);

/// Backward operator: out(x) = max_y [uT(y) - T L((y-x)/T)], computed as
/// -forward(H(-.), -uT, T).
GridFn backward(const Hamiltonian& h, const GridFn& ut, double t);

/// Brute-force forward path regardless of Hamiltonian shape; used to pin
/// the fast path down in tests.
GridFn forward_brute(const Hamiltonian& h, const GridFn& u0, double t);

/// Brute-force forward that also records all minimizers within tie_tol of
/// the optimum (tie_tol < 0 selects default_tie_tol(u0)).
std::pair<GridFn, ArgminMap> forward_with_argmin(const Hamiltonian& h,
                                                 const GridFn& u0, double t,
                                                 double tie_tol = -1.0);

/// Projection onto reachable targets: S_T^+(S_T^- uT). Exact on nodes
/// farther than twice the dependence margin from the boundary.
GridFn compose_project(const Hamiltonian& h, const GridFn& ut, double t);

}  // namespace hj
