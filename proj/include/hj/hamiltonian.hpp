#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>

#include "hj/errors.hpp"

namespace hj {

// Construction-time consistency tolerances. Everything downstream feeds off
// these values, so they are kept tight.
inline constexpr double kTolSpd = 1e-10;
inline constexpr double kTolSym = 1e-10;
inline constexpr double kTolInv = 1e-9;
inline constexpr double kTolBisect = 1e-12;

/// Symmetric positive definite matrix with cached inverse and extreme
/// eigenvalues. Validates symmetry and positivity on construction.
class SpdMatrix {
  public:
    explicit SpdMatrix(Eigen::MatrixXd a);

    const Eigen::MatrixXd& mat() const { return a_; }
    const Eigen::MatrixXd& inverse() const { return inv_; }
    double lambda_min() const { return lambda_min_; }
    double lambda_max() const { return lambda_max_; }
    int dim() const { return static_cast<int>(a_.rows()); }

  private:
    Eigen::MatrixXd a_;
    Eigen::MatrixXd inv_;
    double lambda_min_ = 0.0;
    double lambda_max_ = 0.0;
};

using ScalarFn = std::function<double(double)>;

/// Convex Hamiltonian H. Two kinds:
///   QuadraticForm: H(p) = <A p, p>/2 with A symmetric positive definite,
///     any dimension; Legendre transform has the closed form <A^-1 q, q>/2.
///   Scalar1D: user-supplied H, H_p, H_pp on a declared slope window
///     [-P, P]; Legendre values are obtained by inverting the strictly
///     increasing H_p with bisection.
///
/// Strict convexity (H_pp > 0) is checked on a probe grid at construction.
/// Superlinearity cannot be certified on a finite window and is assumed.
/// Immutable after construction; all member calls are pure.
class Hamiltonian {
  public:
    enum class Kind { QuadraticForm, Scalar1D };

    static Hamiltonian quadratic(Eigen::MatrixXd a);
    static Hamiltonian scalar1d(ScalarFn h, ScalarFn hp, ScalarFn hpp,
                                double slope_limit);

    /// Parses {"kind":"quadratic","A":[[...]]} or
    /// {"kind":"scalar1d","expr":"p^2/2","slope_range":[-P,P]}.
    static Hamiltonian from_json_text(const std::string& text);
    /// Compact CLI form: "quadratic:1", "quadratic:[[2,1],[1,1]]",
    /// "scalar1d:p^2/2:[-4,4]".
    static Hamiltonian from_descriptor(const std::string& desc);

    Kind kind() const { return kind_; }
    bool is_quadratic() const { return kind_ == Kind::QuadraticForm; }
    int dim() const;

    double value(const Eigen::VectorXd& p) const;
    Eigen::VectorXd grad(const Eigen::VectorXd& p) const;
    Eigen::MatrixXd hess(const Eigen::VectorXd& p) const;

    /// L(q) = sup_p [q.p - H(p)]. Throws DomainExceeded when a Scalar1D
    /// velocity falls outside [H_p(-P), H_p(P)].
    double legendre(const Eigen::VectorXd& q) const;

    // 1D scalar fast paths (valid when dim() == 1).
    double value1(double p) const;
    double grad1(double p) const;
    double hess1(double p) const;
    double legendre1(double q) const;

    /// H(-p) as a Hamiltonian; used by the backward operator. Equals H
    /// itself for quadratic forms.
    Hamiltonian reflected() const;

    const SpdMatrix& quadratic_form() const;
    double slope_limit() const { return slope_limit_; }

    /// max |grad H| over the ball |p| <= lip. Closed form lambda_max * lip
    /// for quadratic forms; probe sweep for Scalar1D.
    double max_speed(double lip) const;

    /// |[H_pp(p)]^-1 - L_qq(H_p(p))| with L_qq from central second
    /// differences of legendre(); 1D only. Test-facing diagnostic.
    double legendre_hess_identity_residual(double p) const;

  private:
    Hamiltonian() = default;
    void check_slope1(double p) const;

    Kind kind_ = Kind::QuadraticForm;
    std::shared_ptr<const SpdMatrix> quad_;
    ScalarFn h_, hp_, hpp_;
    double slope_limit_ = 0.0;  // +inf conceptually for quadratic; 0 = unset
};

/// Parses a small arithmetic expression in the variable p (operators
/// + - * / ^, parentheses, numeric literals, abs()). Returns an evaluator.
ScalarFn parse_scalar_expr(const std::string& expr);

}  // namespace hj
