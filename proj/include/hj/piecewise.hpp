#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hj/gridfn.hpp"

namespace hj {

/// One clause of a piecewise definition: a region predicate plus a small
/// closed-form expression. First matching clause wins.
struct PiecewiseClause {
    enum class RegionKind { Interval, Ball };
    enum class ExprKind { Affine, Cone };

    RegionKind region = RegionKind::Interval;
    std::array<double, 2> lo{0.0, 0.0}, hi{0.0, 0.0};  // Interval bounds
    std::array<double, 2> center{0.0, 0.0};            // Ball / Cone apex
    double radius = 0.0;                               // Ball

    ExprKind expr = ExprKind::Affine;
    double c0 = 0.0;                    // Affine constant / Cone offset
    std::array<double, 2> c{0.0, 0.0};  // Affine gradient
    double scale = 0.0;                 // Cone: c0 + scale * |x - center|
};

/// Declarative piecewise function (the demo catalog inputs and any user
/// JSON). Clause boundaries must join continuously; sample() probes them.
struct PiecewiseSpec {
    int dimension = 1;
    std::vector<PiecewiseClause> clauses;
    double default_value = 0.0;

    double eval(std::array<double, 2> x) const;
    /// Largest clause slope; an upper bound on the Lipschitz constant.
    double analytic_lipschitz() const;

    static PiecewiseSpec from_json_text(const std::string& text);
    static PiecewiseSpec from_json_file(const std::string& path);
};

/// Materializes the spec on a grid. Throws BoxTooSmall when a clause region
/// leaves the box, and Error when a clause boundary probe detects a jump.
GridFn sample(const PiecewiseSpec& spec, const Box& box,
              std::array<int, 2> resolution);

/// Samples the spec on the region of interest enlarged by
/// margin_factor * T * max|grad H| over the spec's slope range, keeping the
/// grid spacing implied by (roi, resolution). Operators applied to the
/// result are then exact on roi.
GridFn sample_enlarged(const PiecewiseSpec& spec, const Hamiltonian& h,
                       const Box& roi, std::array<int, 2> resolution,
                       double t, double margin_factor = 1.0);

/// The margin actually applied by sample_enlarged.
double spec_margin(const PiecewiseSpec& spec, const Hamiltonian& h, double t);

/// The demo function catalog: ids "u1".."u6".
const PiecewiseSpec& catalog(const std::string& id);
std::vector<std::string> catalog_ids();

}  // namespace hj
