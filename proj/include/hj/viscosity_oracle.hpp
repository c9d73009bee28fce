#pragma once

#include "hj/gridfn.hpp"
#include "hj/hamiltonian.hpp"

namespace hj {

/// Bookkeeping for one explicit parabolic integration.
struct ParabolicRun {
    double epsilon = 1e-3;
    double dt = 0.0;
    long steps = 0;
    double cfl_report = 0.0;  // max observed dt / dt_bound, must stay <= 1
};

/// Explicit Euler integration of u_t - eps Lap(u) + H(Du) = 0 from u0 over
/// [0, T]. Local Lax-Friedrichs numerical Hamiltonian per axis; boundary
/// nodes are held at their initial values, so results are meaningful on a
/// region shrunk by the dependence margin. Independent of the Hopf-Lax
/// path by construction; used as a cross-validation oracle.
GridFn parabolic_forward(const Hamiltonian& h, const GridFn& u0, double t,
                         double epsilon, ParabolicRun* run = nullptr,
                         double dt_request = -1.0);

/// Backward regularization w_t + eps Lap(w) + H(Dw) = 0 with terminal data
/// uT, integrated via the substitution s = T - t.
GridFn parabolic_backward(const Hamiltonian& h, const GridFn& ut, double t,
                          double epsilon, ParabolicRun* run = nullptr,
                          double dt_request = -1.0);

}  // namespace hj
