#include "hj/hamiltonian.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace hj {

SpdMatrix::SpdMatrix(Eigen::MatrixXd a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols() || a_.rows() < 1) {
        throw Error("SpdMatrix: matrix must be square and nonempty");
    }
    const double scale = std::max(1.0, a_.cwiseAbs().maxCoeff());
    if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > kTolSym * scale) {
        throw Error("SpdMatrix: matrix not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_);
    lambda_min_ = es.eigenvalues().minCoeff();
    lambda_max_ = es.eigenvalues().maxCoeff();
    if (lambda_min_ <= kTolSpd) {
        throw Error("SpdMatrix: matrix not positive definite");
    }
    inv_ = a_.inverse();
    const double inv_err =
        (a_ * inv_ - Eigen::MatrixXd::Identity(a_.rows(), a_.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (inv_err > kTolInv) {
        throw Error("SpdMatrix: inverse residual too large");
    }
}

Hamiltonian Hamiltonian::quadratic(Eigen::MatrixXd a) {
    Hamiltonian h;
    h.kind_ = Kind::QuadraticForm;
    h.quad_ = std::make_shared<SpdMatrix>(std::move(a));
    return h;
}

Hamiltonian Hamiltonian::scalar1d(ScalarFn h, ScalarFn hp, ScalarFn hpp,
                                  double slope_limit) {
    if (slope_limit <= 0.0) {
        throw Error("Hamiltonian: slope limit must be positive");
    }
    Hamiltonian out;
    out.kind_ = Kind::Scalar1D;
    out.h_ = std::move(h);
    out.hp_ = std::move(hp);
    out.hpp_ = std::move(hpp);
    out.slope_limit_ = slope_limit;

    // Strict convexity probe: H_pp > 0 and H_p increasing on the window.
    const int probes = 257;
    double prev_hp = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < probes; ++i) {
        const double p =
            -slope_limit + 2.0 * slope_limit * i / double(probes - 1);
        if (!(out.hpp_(p) > 0.0)) {
            throw Error("Hamiltonian: H_pp not positive on slope window");
        }
        const double hpv = out.hp_(p);
        if (!(hpv > prev_hp)) {
            throw Error("Hamiltonian: H_p not strictly increasing");
        }
        prev_hp = hpv;
    }
    return out;
}

int Hamiltonian::dim() const {
    return is_quadratic() ? quad_->dim() : 1;
}

const SpdMatrix& Hamiltonian::quadratic_form() const {
    if (!is_quadratic()) {
        throw NotQuadratic("operation requires a quadratic Hamiltonian");
    }
    return *quad_;
}

void Hamiltonian::check_slope1(double p) const {
    if (std::abs(p) > slope_limit_) {
        std::ostringstream os;
        os << "slope " << p << " outside declared window [-" << slope_limit_
           << ", " << slope_limit_ << "]";
        throw DomainExceeded(os.str());
    }
}

double Hamiltonian::value(const Eigen::VectorXd& p) const {
    if (is_quadratic()) {
        return 0.5 * p.dot(quad_->mat() * p);
    }
    return value1(p(0));
}

double Hamiltonian::value1(double p) const {
    if (is_quadratic()) {
        return 0.5 * quad_->mat()(0, 0) * p * p;
    }
    check_slope1(p);
    return h_(p);
}

Eigen::VectorXd Hamiltonian::grad(const Eigen::VectorXd& p) const {
    if (is_quadratic()) {
        return quad_->mat() * p;
    }
    Eigen::VectorXd g(1);
    g(0) = grad1(p(0));
    return g;
}

double Hamiltonian::grad1(double p) const {
    if (is_quadratic()) {
        return quad_->mat()(0, 0) * p;
    }
    check_slope1(p);
    return hp_(p);
}

Eigen::MatrixXd Hamiltonian::hess(const Eigen::VectorXd& p) const {
    if (is_quadratic()) {
        return quad_->mat();
    }
    Eigen::MatrixXd h(1, 1);
    h(0, 0) = hess1(p(0));
    return h;
}

double Hamiltonian::hess1(double p) const {
    if (is_quadratic()) {
        return quad_->mat()(0, 0);
    }
    check_slope1(p);
    return hpp_(p);
}

double Hamiltonian::legendre(const Eigen::VectorXd& q) const {
    if (is_quadratic()) {
        return 0.5 * q.dot(quad_->inverse() * q);
    }
    return legendre1(q(0));
}

double Hamiltonian::legendre1(double q) const {
    if (is_quadratic()) {
        return 0.5 * quad_->inverse()(0, 0) * q * q;
    }
    // H_p is strictly increasing on [-P, P]; solve H_p(p) = q by bisection.
    const double p_lo = -slope_limit_, p_hi = slope_limit_;
    const double q_lo = hp_(p_lo), q_hi = hp_(p_hi);
    if (q < q_lo - kTolBisect || q > q_hi + kTolBisect) {
        std::ostringstream os;
        os << "velocity " << q << " outside reachable range [" << q_lo << ", "
           << q_hi << "]";
        throw DomainExceeded(os.str());
    }
    double lo = p_lo, hi = p_hi;
    while (hi - lo > kTolBisect) {
        const double mid = 0.5 * (lo + hi);
        (hp_(mid) < q ? lo : hi) = mid;
    }
    const double p = 0.5 * (lo + hi);
    return q * p - h_(p);
}

Hamiltonian Hamiltonian::reflected() const {
    if (is_quadratic()) {
        return *this;  // H(-p) = H(p) for quadratic forms
    }
    ScalarFn h = h_, hp = hp_, hpp = hpp_;
    return scalar1d([h](double p) { return h(-p); },
                    [hp](double p) { return -hp(-p); },
                    [hpp](double p) { return hpp(-p); }, slope_limit_);
}

double Hamiltonian::max_speed(double lip) const {
    if (lip < 0.0) {
        throw Error("max_speed: negative Lipschitz bound");
    }
    if (is_quadratic()) {
        return quad_->lambda_max() * lip;
    }
    if (lip > slope_limit_) {
        throw DomainExceeded("Lipschitz bound exceeds declared slope window");
    }
    // H_p increasing, so the extremes are attained at the window ends.
    return std::max(std::abs(hp_(-lip)), std::abs(hp_(lip)));
}

double Hamiltonian::legendre_hess_identity_residual(double p) const {
    if (dim() != 1) {
        throw UnsupportedCase("legendre_hess_identity_residual is 1D only");
    }
    const double hpp = hess1(p);
    const double q = grad1(p);
    const double dq = 1e-4 * std::max(1.0, std::abs(q));
    const double lqq =
        (legendre1(q + dq) - 2.0 * legendre1(q) + legendre1(q - dq)) /
        (dq * dq);
    return std::abs(1.0 / hpp - lqq);
}

// --- small expression parser -------------------------------------------

namespace {

// Grammar: expr := term (('+'|'-') term)*
//          term := unary (('*'|'/') unary)*
//          unary := '-' unary | power
//          power := atom ('^' unary)?
//          atom := number | 'p' | 'abs' '(' expr ')' | '(' expr ')'
struct ExprParser {
    const std::string& s;
    size_t pos = 0;

    explicit ExprParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw Error("expression parse error at position " +
                    std::to_string(pos) + ": " + what);
    }

    ScalarFn parse_expr() {
        ScalarFn lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                ScalarFn rhs = parse_term();
                lhs = [lhs, rhs](double p) { return lhs(p) + rhs(p); };
            } else if (eat('-')) {
                ScalarFn rhs = parse_term();
                lhs = [lhs, rhs](double p) { return lhs(p) - rhs(p); };
            } else {
                return lhs;
            }
        }
    }

    ScalarFn parse_term() {
        ScalarFn lhs = parse_unary();
        for (;;) {
            if (eat('*')) {
                ScalarFn rhs = parse_unary();
                lhs = [lhs, rhs](double p) { return lhs(p) * rhs(p); };
            } else if (eat('/')) {
                ScalarFn rhs = parse_unary();
                lhs = [lhs, rhs](double p) { return lhs(p) / rhs(p); };
            } else {
                return lhs;
            }
        }
    }

    ScalarFn parse_unary() {
        if (eat('-')) {
            ScalarFn inner = parse_unary();
            return [inner](double p) { return -inner(p); };
        }
        return parse_power();
    }

    ScalarFn parse_power() {
        ScalarFn base = parse_atom();
        if (eat('^')) {
            ScalarFn exp = parse_unary();
            return
                [base, exp](double p) { return std::pow(base(p), exp(p)); };
        }
        return base;
    }

    ScalarFn parse_atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        const char c = s[pos];
        if (c == '(') {
            ++pos;
            ScalarFn inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (s.compare(pos, 4, "abs(") == 0) {
            pos += 4;
            ScalarFn inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return [inner](double p) { return std::abs(inner(p)); };
        }
        if (c == 'p') {
            ++pos;
            return [](double p) { return p; };
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t end = 0;
            const double v = std::stod(s.substr(pos), &end);
            pos += end;
            return [v](double) { return v; };
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

Hamiltonian scalar1d_from_expr(const std::string& expr, double slope_limit) {
    ScalarFn h = parse_scalar_expr(expr);
    // Derivatives by central differences at a step well above the
    // construction probes' needs but far below the slope window.
    ScalarFn hp = [h](double p) {
        const double d = 1e-6 * std::max(1.0, std::abs(p));
        return (h(p + d) - h(p - d)) / (2.0 * d);
    };
    ScalarFn hpp = [h](double p) {
        const double d = 1e-4 * std::max(1.0, std::abs(p));
        return (h(p + d) - 2.0 * h(p) + h(p - d)) / (d * d);
    };
    return Hamiltonian::scalar1d(h, hp, hpp, slope_limit);
}

}  // namespace

ScalarFn parse_scalar_expr(const std::string& expr) {
    ExprParser parser(expr);
    ScalarFn fn = parser.parse_expr();
    parser.skip_ws();
    if (parser.pos != expr.size()) {
        throw Error("expression parse error: trailing input");
    }
    return fn;
}

Hamiltonian Hamiltonian::from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic") {
        const auto rows = j.at("A");
        const int n = static_cast<int>(rows.size());
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n) {
                throw Error("Hamiltonian JSON: A must be square");
            }
            for (int k = 0; k < n; ++k) a(i, k) = rows[i][k].get<double>();
        }
        return quadratic(std::move(a));
    }
    if (kind == "scalar1d") {
        const auto range = j.at("slope_range");
        const double lo = range[0].get<double>(), hi = range[1].get<double>();
        if (lo != -hi || hi <= 0.0) {
            throw Error("Hamiltonian JSON: slope_range must be [-P, P]");
        }
        return scalar1d_from_expr(j.at("expr").get<std::string>(), hi);
    }
    throw Error("Hamiltonian JSON: unknown kind '" + kind + "'");
}

Hamiltonian Hamiltonian::from_descriptor(const std::string& desc) {
    const auto colon = desc.find(':');
    if (colon == std::string::npos) {
        throw Error("Hamiltonian descriptor: expected 'kind:...'");
    }
    const std::string kind = desc.substr(0, colon);
    const std::string rest = desc.substr(colon + 1);
    if (kind == "quadratic") {
        nlohmann::json j;
        j["kind"] = "quadratic";
        if (!rest.empty() && rest[0] == '[') {
            j["A"] = nlohmann::json::parse(rest);
        } else {
            j["A"] = {{std::stod(rest)}};
        }
        return from_json_text(j.dump());
    }
    if (kind == "scalar1d") {
        const auto second = rest.rfind(':');
        if (second == std::string::npos) {
            throw Error(
                "Hamiltonian descriptor: scalar1d needs 'expr:[-P,P]'");
        }
        const auto range = nlohmann::json::parse(rest.substr(second + 1));
        nlohmann::json j;
        j["kind"] = "scalar1d";
        j["expr"] = rest.substr(0, second);
        j["slope_range"] = range;
        return from_json_text(j.dump());
    }
    throw Error("Hamiltonian descriptor: unknown kind '" + kind + "'");
}

}  // namespace hj
