#include "hj/piecewise.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace hj {

namespace {

double dist(const std::array<double, 2>& x, const std::array<double, 2>& c,
            int dim) {
    double d = x[0] - c[0];
    if (dim == 1) return std::abs(d);
    return std::hypot(d, x[1] - c[1]);
}

bool in_region(const PiecewiseClause& cl, const std::array<double, 2>& x,
               int dim) {
    if (cl.region == PiecewiseClause::RegionKind::Ball) {
        return dist(x, cl.center, dim) < cl.radius;
    }
    for (int a = 0; a < dim; ++a) {
        if (x[a] < cl.lo[a] || x[a] > cl.hi[a]) return false;
    }
    return true;
}

double clause_value(const PiecewiseClause& cl, const std::array<double, 2>& x,
                    int dim) {
    if (cl.expr == PiecewiseClause::ExprKind::Cone) {
        return cl.c0 + cl.scale * dist(x, cl.center, dim);
    }
    double v = cl.c0 + cl.c[0] * x[0];
    if (dim == 2) v += cl.c[1] * x[1];
    return v;
}

}  // namespace

double PiecewiseSpec::eval(std::array<double, 2> x) const {
    for (const auto& cl : clauses) {
        if (in_region(cl, x, dimension)) return clause_value(cl, x, dimension);
    }
    return default_value;
}

double PiecewiseSpec::analytic_lipschitz() const {
    double lip = 0.0;
    for (const auto& cl : clauses) {
        if (cl.expr == PiecewiseClause::ExprKind::Cone) {
            lip = std::max(lip, std::abs(cl.scale));
        } else {
            lip = std::max(lip, dimension == 1
                                    ? std::abs(cl.c[0])
                                    : std::hypot(cl.c[0], cl.c[1]));
        }
    }
    return lip;
}

GridFn sample(const PiecewiseSpec& spec, const Box& box,
              std::array<int, 2> resolution) {
    if (box.dim != spec.dimension) {
        throw GridMismatch("sample: box dimension differs from spec");
    }
    for (const auto& cl : spec.clauses) {
        Box support = box;
        if (cl.region == PiecewiseClause::RegionKind::Ball) {
            for (int a = 0; a < box.dim; ++a) {
                support.lo[a] = cl.center[a] - cl.radius;
                support.hi[a] = cl.center[a] + cl.radius;
            }
        } else {
            for (int a = 0; a < box.dim; ++a) {
                support.lo[a] = cl.lo[a];
                support.hi[a] = cl.hi[a];
            }
        }
        if (!box.contains(support)) {
            throw BoxTooSmall("sample: clause region exits the box");
        }
    }

    GridFn f(box, resolution);
    const int n1 = box.dim == 2 ? resolution[1] : 1;
    for (int i = 0; i < resolution[0]; ++i) {
        for (int j = 0; j < n1; ++j) {
            std::array<double, 2> x{f.coord(0, i),
                                    box.dim == 2 ? f.coord(1, j) : 0.0};
            f.at(i, j) = spec.eval(x);
        }
    }

    // Continuity probes across clause boundaries.
    const double delta = 1e-7, tol_cont = 1e-6;
    for (const auto& cl : spec.clauses) {
        std::vector<std::array<double, 2>> probes;
        if (cl.region == PiecewiseClause::RegionKind::Ball) {
            const int m = spec.dimension == 1 ? 2 : 64;
            for (int k = 0; k < m; ++k) {
                const double ang = 2.0 * M_PI * k / m;
                probes.push_back(
                    {cl.center[0] + cl.radius * std::cos(ang),
                     spec.dimension == 2
                         ? cl.center[1] + cl.radius * std::sin(ang)
                         : 0.0});
            }
        } else if (spec.dimension == 1) {
            probes.push_back({cl.lo[0], 0.0});
            probes.push_back({cl.hi[0], 0.0});
        }
        for (const auto& p : probes) {
            for (const double sign : {-1.0, 1.0}) {
                std::array<double, 2> q = p;
                const double nx = p[0] - cl.center[0], ny = p[1] - cl.center[1];
                const double nn = std::max(1e-30, std::hypot(nx, ny));
                if (cl.region == PiecewiseClause::RegionKind::Ball) {
                    q[0] += sign * delta * nx / nn;
                    q[1] += sign * delta * ny / nn;
                } else {
                    q[0] += sign * delta;
                }
                if (std::abs(spec.eval(p) - spec.eval(q)) >
                    tol_cont + 4.0 * delta * spec.analytic_lipschitz()) {
                    throw Error("sample: discontinuity at a clause boundary");
                }
            }
        }
    }

    f.set_extension(Extension::linear_lipschitz(
        std::max(spec.analytic_lipschitz(), lipschitz_estimate(f))));
    return f;
}

double spec_margin(const PiecewiseSpec& spec, const Hamiltonian& h, double t) {
    return t * h.max_speed(spec.analytic_lipschitz());
}

GridFn sample_enlarged(const PiecewiseSpec& spec, const Hamiltonian& h,
                       const Box& roi, std::array<int, 2> resolution,
                       double t, double margin_factor) {
    const double margin = margin_factor * spec_margin(spec, h, t);
    Box big = roi;
    std::array<int, 2> res = resolution;
    for (int a = 0; a < roi.dim; ++a) {
        const double hx = (roi.hi[a] - roi.lo[a]) / (resolution[a] - 1);
        const int cells = static_cast<int>(std::ceil(margin / hx));
        big.lo[a] -= cells * hx;
        big.hi[a] += cells * hx;
        res[a] += 2 * cells;
    }
    return sample(spec, big, res);
}

PiecewiseSpec PiecewiseSpec::from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PiecewiseSpec spec;
    spec.dimension = j.at("dimension").get<int>();
    spec.default_value = j.value("default", 0.0);
    for (const auto& jc : j.at("clauses")) {
        PiecewiseClause cl;
        const auto& region = jc.at("region");
        const std::string rtype = region.at("type").get<std::string>();
        if (rtype == "interval") {
            cl.region = PiecewiseClause::RegionKind::Interval;
            for (int a = 0; a < spec.dimension; ++a) {
                cl.lo[a] = region.at("lo")[a].get<double>();
                cl.hi[a] = region.at("hi")[a].get<double>();
            }
        } else if (rtype == "ball") {
            cl.region = PiecewiseClause::RegionKind::Ball;
            for (int a = 0; a < spec.dimension; ++a) {
                cl.center[a] = region.at("center")[a].get<double>();
            }
            cl.radius = region.at("radius").get<double>();
        } else {
            throw Error("PiecewiseSpec JSON: unknown region type " + rtype);
        }
        const auto& expr = jc.at("expr");
        const std::string etype = expr.at("type").get<std::string>();
        if (etype == "affine") {
            cl.expr = PiecewiseClause::ExprKind::Affine;
            cl.c0 = expr.value("c0", 0.0);
            if (expr.contains("grad")) {
                for (int a = 0; a < spec.dimension; ++a) {
                    cl.c[a] = expr.at("grad")[a].get<double>();
                }
            }
        } else if (etype == "cone") {
            cl.expr = PiecewiseClause::ExprKind::Cone;
            cl.c0 = expr.value("offset", 0.0);
            cl.scale = expr.at("scale").get<double>();
            for (int a = 0; a < spec.dimension; ++a) {
                cl.center[a] = expr.at("center")[a].get<double>();
            }
        } else {
            throw Error("PiecewiseSpec JSON: unknown expr type " + etype);
        }
        spec.clauses.push_back(cl);
    }
    return spec;
}

PiecewiseSpec PiecewiseSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

namespace {

PiecewiseClause cone1d(double lo, double hi, double center, double offset,
                       double scale) {
    PiecewiseClause cl;
    cl.region = PiecewiseClause::RegionKind::Interval;
    cl.lo = {lo, 0.0};
    cl.hi = {hi, 0.0};
    cl.expr = PiecewiseClause::ExprKind::Cone;
    cl.center = {center, 0.0};
    cl.c0 = offset;
    cl.scale = scale;
    return cl;
}

PiecewiseClause cone_ball(double cx, double cy, double radius, double offset,
                          double scale) {
    PiecewiseClause cl;
    cl.region = PiecewiseClause::RegionKind::Ball;
    cl.center = {cx, cy};
    cl.radius = radius;
    cl.expr = PiecewiseClause::ExprKind::Cone;
    cl.c0 = offset;
    cl.scale = scale;
    return cl;
}

std::map<std::string, PiecewiseSpec> build_catalog() {
    std::map<std::string, PiecewiseSpec> cat;
    {
        // Two unit tents of height 1 at -1 and 1.
        PiecewiseSpec u1;
        u1.dimension = 1;
        u1.clauses = {cone1d(-2.0, 0.0, -1.0, 1.0, -1.0),
                      cone1d(0.0, 2.0, 1.0, 1.0, -1.0)};
        cat["u1"] = u1;
    }
    {
        // 2D: a well at (-2,0) and a bump at (2,0), both of unit radius.
        PiecewiseSpec u2;
        u2.dimension = 2;
        u2.clauses = {cone_ball(-2.0, 0.0, 1.0, -1.0, 1.0),
                      cone_ball(2.0, 0.0, 1.0, 1.0, -1.0)};
        cat["u2"] = u2;
    }
    {
        // W-shape: two unit wells of depth 1 at -1 and 1.
        PiecewiseSpec u3;
        u3.dimension = 1;
        u3.clauses = {cone1d(-2.0, 0.0, -1.0, -1.0, 1.0),
                      cone1d(0.0, 2.0, 1.0, -1.0, 1.0)};
        cat["u3"] = u3;
    }
    {
        // Two steep tents of height 1 and slope 2 at -1 and 1.
        PiecewiseSpec u4;
        u4.dimension = 1;
        u4.clauses = {cone1d(-1.5, 0.0, -1.0, 1.0, -2.0),
                      cone1d(0.0, 1.5, 1.0, 1.0, -2.0)};
        cat["u4"] = u4;
    }
    {
        // 2D: bump of height 1 at (-1,0), bump of height 0.5 at (1,0).
        PiecewiseSpec u5;
        u5.dimension = 2;
        u5.clauses = {cone_ball(-1.0, 0.0, 1.0, 1.0, -1.0),
                      cone_ball(1.0, 0.0, 1.0, 0.5, -0.5)};
        cat["u5"] = u5;
        PiecewiseSpec u6 = u5;  // u6 = -u5
        for (auto& cl : u6.clauses) {
            cl.c0 = -cl.c0;
            cl.scale = -cl.scale;
        }
        cat["u6"] = u6;
    }
    return cat;
}

}  // namespace

const PiecewiseSpec& catalog(const std::string& id) {
    static const auto cat = build_catalog();
    const auto it = cat.find(id);
    if (it == cat.end()) throw Error("unknown catalog id: " + id);
    return it->second;
}

std::vector<std::string> catalog_ids() {
    static const auto cat = build_catalog();
    std::vector<std::string> ids;
    for (const auto& [k, v] : cat) ids.push_back(k);
    return ids;
}

}  // namespace hj
