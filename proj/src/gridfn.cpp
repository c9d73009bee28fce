#include "hj/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hj {

Box Box::enlarged(double margin) const {
    Box out = *this;
    for (int a = 0; a < dim; ++a) {
        out.lo[a] -= margin;
        out.hi[a] += margin;
    }
    return out;
}

bool Box::contains(const Box& inner, double tol) const {
    if (inner.dim != dim) return false;
    for (int a = 0; a < dim; ++a) {
        if (inner.lo[a] < lo[a] - tol || inner.hi[a] > hi[a] + tol) return false;
    }
    return true;
}

bool operator==(const Box& a, const Box& b) {
    if (a.dim != b.dim) return false;
    for (int ax = 0; ax < a.dim; ++ax) {
        if (a.lo[ax] != b.lo[ax] || a.hi[ax] != b.hi[ax]) return false;
    }
    return true;
}

GridFn::GridFn(Box box, std::array<int, 2> res, Extension ext)
    : box_(box), res_(res), ext_(ext) {
    if (box.dim < 1 || box.dim > 2) {
        throw Error("GridFn: dimension must be 1 or 2");
    }
    if (box.dim == 1) res_[1] = 1;
    std::int64_t total = 1;
    for (int a = 0; a < box.dim; ++a) {
        if (res_[a] < 2) throw Error("GridFn: resolution must be >= 2");
        if (!(box.hi[a] > box.lo[a])) throw Error("GridFn: empty box");
        h_[a] = (box.hi[a] - box.lo[a]) / (res_[a] - 1);
        total *= res_[a];
    }
    values_.assign(static_cast<size_t>(total), 0.0);
}

double GridFn::max_spacing() const {
    double h = h_[0];
    if (dim() == 2) h = std::max(h, h_[1]);
    return h;
}

int GridFn::node_index(int axis, double x) const {
    const double t = (x - box_.lo[axis]) / h_[axis];
    const int i = static_cast<int>(std::lround(t));
    if (i < 0 || i >= res_[axis] || std::abs(t - i) > 1e-6) {
        throw GridMismatch("point is not a grid node");
    }
    return i;
}

double GridFn::eval(std::array<double, 2> x) const {
    std::array<double, 2> clamped = x;
    double dist = 0.0;
    for (int a = 0; a < dim(); ++a) {
        const double c = std::clamp(x[a], box_.lo[a], box_.hi[a]);
        dist = std::hypot(dist, x[a] - c);
        clamped[a] = c;
    }
    if (dist > 0.0 && ext_.kind == Extension::Kind::Forbidden) {
        throw BoxTooSmall("evaluation outside box with Forbidden extension");
    }

    std::array<int, 2> i0{0, 0};
    std::array<double, 2> w{0.0, 0.0};
    for (int a = 0; a < dim(); ++a) {
        double t = (clamped[a] - box_.lo[a]) / h_[a];
        t = std::clamp(t, 0.0, double(res_[a] - 1));
        i0[a] = std::min(static_cast<int>(t), res_[a] - 2);
        w[a] = t - i0[a];
    }
    double interior;
    if (dim() == 1) {
        interior = (1.0 - w[0]) * at(i0[0]) + w[0] * at(i0[0] + 1);
    } else {
        interior = (1.0 - w[0]) * ((1.0 - w[1]) * at(i0[0], i0[1]) +
                                   w[1] * at(i0[0], i0[1] + 1)) +
                   w[0] * ((1.0 - w[1]) * at(i0[0] + 1, i0[1]) +
                           w[1] * at(i0[0] + 1, i0[1] + 1));
    }
    return interior + ext_.slope * dist;
}

bool GridFn::same_grid(const GridFn& other) const {
    return box_ == other.box_ && res_ == other.res_;
}

double lipschitz_estimate(const GridFn& f) {
    double lip = 0.0;
    const int n0 = f.res(0), n1 = f.dim() == 2 ? f.res(1) : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            if (i + 1 < n0) {
                lip = std::max(
                    lip, std::abs(f.at(i + 1, j) - f.at(i, j)) / f.spacing(0));
            }
            if (f.dim() == 2 && j + 1 < n1) {
                lip = std::max(
                    lip, std::abs(f.at(i, j + 1) - f.at(i, j)) / f.spacing(1));
            }
        }
    }
    return lip;
}

double dependence_margin(const Hamiltonian& h, const GridFn& f, double t) {
    const double lip = lipschitz_estimate(f);
    return t * h.max_speed(lip);
}

double sup_norm_diff(const GridFn& f, const GridFn& g) {
    if (!f.same_grid(g)) throw GridMismatch("sup_norm_diff: grids differ");
    double m = 0.0;
    for (std::int64_t k = 0; k < f.size(); ++k) {
        m = std::max(m, std::abs(f.values()[k] - g.values()[k]));
    }
    return m;
}

GridFn restrict_to(const GridFn& f, const Box& inner) {
    if (inner.dim != f.dim()) throw GridMismatch("restrict_to: dimension");
    if (!f.box().contains(inner)) {
        throw BoxTooSmall("restrict_to: inner box not contained");
    }
    std::array<int, 2> start{0, 0}, count{1, 1};
    for (int a = 0; a < f.dim(); ++a) {
        start[a] = f.node_index(a, inner.lo[a]);
        const int end = f.node_index(a, inner.hi[a]);
        count[a] = end - start[a] + 1;
    }
    GridFn out(inner, count, f.extension());
    for (int i = 0; i < count[0]; ++i) {
        for (int j = 0; j < (f.dim() == 2 ? count[1] : 1); ++j) {
            out.at(i, j) = f.at(start[0] + i, start[1] + j);
        }
    }
    return out;
}

GridFn map2(const GridFn& f, const GridFn& g, double (*op)(double, double)) {
    if (!f.same_grid(g)) throw GridMismatch("map2: grids differ");
    GridFn out = f;
    for (std::int64_t k = 0; k < f.size(); ++k) {
        out.values()[k] = op(f.values()[k], g.values()[k]);
    }
    return out;
}

void write_csv(const GridFn& f, std::ostream& out) {
    out << "# dim=" << f.dim() << " box=" << std::setprecision(17)
        << f.box().lo[0] << ":" << f.box().hi[0];
    if (f.dim() == 2) out << "," << f.box().lo[1] << ":" << f.box().hi[1];
    out << " res=" << f.res(0);
    if (f.dim() == 2) out << "," << f.res(1);
    out << "\n" << std::setprecision(17);
    const int n1 = f.dim() == 2 ? f.res(1) : 1;
    for (int i = 0; i < f.res(0); ++i) {
        for (int j = 0; j < n1; ++j) {
            out << f.coord(0, i);
            if (f.dim() == 2) out << "," << f.coord(1, j);
            out << "," << f.at(i, j) << "\n";
        }
    }
}

void write_csv_file(const GridFn& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    write_csv(f, out);
}

GridFn read_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# dim=", 0) != 0) {
        throw Error("CSV: missing header line");
    }
    int dim = 0;
    Box box;
    std::array<int, 2> res{2, 1};
    {
        std::istringstream hs(header.substr(1));
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("dim=", 0) == 0) dim = std::stoi(tok.substr(4));
            else if (tok.rfind("box=", 0) == 0) {
                std::istringstream bs(tok.substr(4));
                std::string part;
                int a = 0;
                while (std::getline(bs, part, ',') && a < 2) {
                    const auto colon = part.find(':');
                    box.lo[a] = std::stod(part.substr(0, colon));
                    box.hi[a] = std::stod(part.substr(colon + 1));
                    ++a;
                }
            } else if (tok.rfind("res=", 0) == 0) {
                std::istringstream rs(tok.substr(4));
                std::string part;
                int a = 0;
                while (std::getline(rs, part, ',') && a < 2) {
                    res[a] = std::stoi(part);
                    ++a;
                }
            }
        }
    }
    if (dim < 1 || dim > 2) throw Error("CSV: bad dim");
    box.dim = dim;
    GridFn f(box, res);
    std::string line;
    std::int64_t k = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto last = line.rfind(',');
        if (last == std::string::npos || k >= f.size()) {
            throw Error("CSV: malformed row");
        }
        f.values()[k++] = std::stod(line.substr(last + 1));
    }
    if (k != f.size()) throw Error("CSV: row count does not match resolution");
    return f;
}

GridFn read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open for reading: " + path);
    return read_csv(in);
}

}  // namespace hj
