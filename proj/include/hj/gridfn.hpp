#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hj/errors.hpp"
#include "hj/hamiltonian.hpp"

namespace hj {

/// Axis-aligned box in dimension 1 or 2.
struct Box {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};

    static Box interval(double lo, double hi) { return {1, {lo, 0.0}, {hi, 0.0}}; }
    static Box rect(double lo0, double hi0, double lo1, double hi1) {
        return {2, {lo0, lo1}, {hi0, hi1}};
    }
    Box enlarged(double margin) const;
    bool contains(const Box& inner, double tol = 1e-12) const;
};

bool operator==(const Box& a, const Box& b);

/// Rule for evaluating a GridFn outside its box.
struct Extension {
    enum class Kind { Forbidden, LinearLipschitz };
    Kind kind = Kind::Forbidden;
    double slope = 0.0;  // LinearLipschitz growth rate

    static Extension forbidden() { return {Kind::Forbidden, 0.0}; }
    static Extension linear_lipschitz(double slope) {
        return {Kind::LinearLipschitz, slope};
    }
};

/// Real function sampled on a uniform grid over a box, dimension 1 or 2.
/// Values are stored row-major: index = i0 * n1 + i1 (n1 = 1 in 1D).
/// Immutable by convention once built; operators return fresh grids.
class GridFn {
  public:
    GridFn() = default;
    GridFn(Box box, std::array<int, 2> res, Extension ext = Extension::forbidden());

    int dim() const { return box_.dim; }
    const Box& box() const { return box_; }
    int res(int axis) const { return res_[axis]; }
    double spacing(int axis) const { return h_[axis]; }
    double max_spacing() const;
    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
    const Extension& extension() const { return ext_; }
    void set_extension(Extension ext) { ext_ = ext; }

    double coord(int axis, int index) const {
        return box_.lo[axis] + h_[axis] * index;
    }
    double& at(int i0, int i1 = 0) { return values_[flat(i0, i1)]; }
    double at(int i0, int i1 = 0) const { return values_[flat(i0, i1)]; }
    std::int64_t flat(int i0, int i1) const {
        return static_cast<std::int64_t>(i0) * res_[1] + i1;
    }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Nearest node index on an axis; error if off-grid beyond tol cells.
    int node_index(int axis, double x) const;

    /// Value at an arbitrary point: exact at nodes, extension rule outside
    /// the box (Forbidden throws), multilinear interpolation off-node.
    double eval(std::array<double, 2> x) const;

    bool same_grid(const GridFn& other) const;

  private:
    Box box_;
    std::array<int, 2> res_{2, 1};
    std::array<double, 2> h_{0.0, 0.0};
    std::vector<double> values_;
    Extension ext_;
};

/// Largest axis-adjacent difference quotient; a lower bound for the true
/// Lipschitz constant, exact for grid-aligned piecewise-linear data.
double lipschitz_estimate(const GridFn& f);

/// Radius T * max{|grad H(p)| : |p| <= Lip(f)} containing every Hopf-Lax
/// minimizer offset. Closed form T * lambda_max(A) * Lip for quadratics.
double dependence_margin(const Hamiltonian& h, const GridFn& f, double t);

double sup_norm_diff(const GridFn& f, const GridFn& g);

/// Copies the sub-array over a node-aligned inner box.
GridFn restrict_to(const GridFn& f, const Box& inner);

/// Pointwise combination onto f's grid (grids must match).
GridFn map2(const GridFn& f, const GridFn& g, double (*op)(double, double));

// --- CSV I/O -------------------------------------------------------------
// 1D rows "x,value"; 2D rows "x,y,value" in row-major order. The header
// line carries box and resolution:
//   # dim=1 box=-4:4 res=1001
//   # dim=2 box=-4:4,-4:4 res=201,201
void write_csv(const GridFn& f, std::ostream& out);
void write_csv_file(const GridFn& f, const std::string& path);
GridFn read_csv(std::istream& in);
GridFn read_csv_file(const std::string& path);

}  // namespace hj
