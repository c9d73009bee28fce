#pragma once

#include <optional>
#include <string>

#include "hj/gridfn.hpp"
#include "hj/hamiltonian.hpp"

namespace hj {

enum class Verdict { Reachable, NotReachable, Indeterminate };

std::string to_string(Verdict v);

struct ReachabilityReport {
    double fixedpoint_residual = 0.0;
    bool fixedpoint_verdict = false;
    bool differential_verdict = false;
    double semiconcavity_constant = 0.0;
    double necessary_bound = 0.0;   // 1 / (T lambda_min(A))
    double sufficient_bound = 0.0;  // 1 / (T lambda_max(A))
    double tol_reach = 0.0;
    Verdict verdict = Verdict::Indeterminate;

    std::string to_json(const GridFn& grid) const;
};

/// Resolution-aware pass band: h * (1 + Lip) * (1 + 1/T).
double default_tol_reach(const GridFn& ut, double t);

/// First criterion: uT reachable iff S_T^+(S_T^- uT) = uT. The residual is
/// the sup-norm of the gap on `roi` (defaults to the box shrunk by twice
/// the dependence margin, where the truncated projection is exact).
std::pair<bool, double> check_fixedpoint(const Hamiltonian& h,
                                         const GridFn& ut, double t,
                                         double tol_reach = -1.0,
                                         std::optional<Box> roi = {});

/// Second criterion, no operator evaluation involved. Quadratic forms
/// reduce to a concavity check of uT - <A^-1 x, x>/(2T); general 1D
/// Hamiltonians run a 3-point parabolic viscosity test at every interior
/// node (concave kinks pass vacuously).
bool check_differential(const Hamiltonian& h, const GridFn& ut, double t,
                        double tol = -1.0);

/// Largest centered second difference quotient over interior nodes, axes
/// and diagonals, across dyadic multiples of h up to a quarter box;
/// clamped below at zero.
double semiconcavity_constant(const GridFn& ut);

ReachabilityReport full_report(const Hamiltonian& h, const GridFn& ut,
                               double t, double tol_reach = -1.0,
                               std::optional<Box> roi = {});

}  // namespace hj
