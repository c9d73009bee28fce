#pragma once

#include <cstdint>
#include <vector>

#include "hj/gridfn.hpp"
#include "hj/hamiltonian.hpp"

namespace hj {

/// contact_tol default: 5 * h * (1 + Lip).
double default_contact_tol(const GridFn& f);

struct EnvelopeResult {
    enum class Method { UpperHull1D, LiftedHull2D };
    GridFn envelope;
    std::vector<std::uint8_t> contact;  // envelope - f <= contact_tol
    Method method = Method::UpperHull1D;
    double contact_tol = 0.0;
};

/// Smallest concave function over the box dominating f, computed from the
/// upper hull of the sampled points: a monotone-chain sweep in 1D, upper
/// facets of the lifted 3D hull in 2D. Boundary nodes act as hull anchors,
/// so the result matches the R^n envelope only when the envelope is flat
/// at the box edge.
EnvelopeResult concave_envelope(const GridFn& f, double contact_tol = -1.0);

/// Samples Q(x) = <A^-1 x, x>/(2T) on the grid of `like`.
GridFn sample_quadratic_shift(const SpdMatrix& a, const GridFn& like,
                              double t);

/// The A^-1/T-semiconcave envelope via the quadratic shift identity:
/// concave_envelope(uT - Q) + Q with Q(x) = <A^-1 x, x>/(2T). Quadratic
/// Hamiltonians only.
GridFn semiconcave_envelope(const Hamiltonian& h, const GridFn& ut, double t);

struct ObstacleResidual {
    // Worst defect of: v >= uT everywhere, and curvature bound
    // b = -lambda_max[D^2 v - A^-1/T] >= 0 off contact. Clamped at 0.
    double min_violation = 0.0;
    // max over nodes of min(v - uT, max(b, 0)): strictly-above-obstacle
    // nodes whose curvature bound is strictly unsaturated.
    double complementarity = 0.0;
    std::int64_t kink_exempt_nodes = 0;
};

/// Discrete residual of the obstacle formulation over interior nodes. At
/// contact nodes the curvature branch is not tested: the obstacle's own
/// curvature shows through wherever it exceeds the bound. Nodes where v
/// has a gradient jump beyond kink_tol are exempt from the curvature
/// branch, matching the viscosity convention of testing only where smooth
/// functions touch. Negative tol values select the defaults
/// tol_a = tol_b = 10h, kink_tol = 0.5 * Lip(v).
ObstacleResidual obstacle_residual(const GridFn& v, const GridFn& ut,
                                   const Hamiltonian& h, double t,
                                   double tol_a = -1.0, double tol_b = -1.0,
                                   double kink_tol = -1.0);

/// True iff f equals its concave envelope within contact_tol.
bool discrete_concavity_check(const GridFn& f, double contact_tol = -1.0);

}  // namespace hj
