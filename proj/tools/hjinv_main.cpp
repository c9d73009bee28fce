// hjinv: Hopf-Lax solvers, reachability analysis and inverse-design
// pipelines for first-order Hamilton-Jacobi equations on sampled grids.
//
// Exit codes: 0 ok, 2 configuration error, 3 solver error, 4 failed golden
// check in demo mode.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hj/envelope.hpp"
#include "hj/gridfn.hpp"
#include "hj/hamiltonian.hpp"
#include "hj/hopflax.hpp"
#include "hj/inverse_set.hpp"
#include "hj/piecewise.hpp"
#include "hj/reachability.hpp"
#include "hj/viscosity_oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string file_hash(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::ostringstream hex;
    hex << std::hex << fnv1a(buf.str());
    return hex.str();
}

struct Timer {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

struct Config {
    std::string hamiltonian = "quadratic:1";
    std::string catalog_id, spec_file, grid_file;
    double t = 1.0;
    std::string box_str = "-4:4";
    std::string res_str = "1001";
    std::string out_dir = "out";
    double tol_reach = -1.0;
    double eps = 1e-3;

    int sources() const {
        return int(!catalog_id.empty()) + int(!spec_file.empty()) +
               int(!grid_file.empty());
    }
};

hj::Box parse_box(const std::string& s, int dim) {
    hj::Box box;
    box.dim = dim;
    std::istringstream is(s);
    std::string part;
    int a = 0;
    while (std::getline(is, part, ',')) {
        if (a >= 2) throw hj::Error("box: too many axes");
        const auto colon = part.find(':');
        if (colon == std::string::npos) throw hj::Error("box: want lo:hi");
        box.lo[a] = std::stod(part.substr(0, colon));
        box.hi[a] = std::stod(part.substr(colon + 1));
        ++a;
    }
    if (a == 1 && dim == 2) {  // square box shorthand
        box.lo[1] = box.lo[0];
        box.hi[1] = box.hi[0];
        a = 2;
    }
    if (a != dim) throw hj::Error("box: axis count does not match dimension");
    return box;
}

std::array<int, 2> parse_res(const std::string& s, int dim) {
    std::array<int, 2> res{0, 1};
    std::istringstream is(s);
    std::string part;
    int a = 0;
    while (std::getline(is, part, ',')) {
        if (a >= 2) throw hj::Error("res: too many axes");
        res[a] = std::stoi(part);
        ++a;
    }
    if (a == 1 && dim == 2) {
        res[1] = res[0];
        a = 2;
    }
    if (a != dim) throw hj::Error("res: axis count does not match dimension");
    for (int k = 0; k < dim; ++k) {
        if (res[k] < 11 || res[k] > 4001) {
            throw hj::Error("res: per-axis resolution must be in [11, 4001]");
        }
    }
    return res;
}

struct Inputs {
    hj::Hamiltonian h;
    hj::GridFn f;       // sampled on the enlarged grid
    hj::Box roi;        // user box
};

/// Resolves the Hamiltonian and input function; catalog/spec inputs are
/// sampled on the user box enlarged by margin_factor dependence margins,
/// CSV grids are taken as already enlarged by the caller.
Inputs load_inputs(const Config& cfg, double margin_factor) {
    if (cfg.sources() != 1) {
        throw hj::Error("exactly one of --catalog, --spec, --grid required");
    }
    hj::Hamiltonian h = hj::Hamiltonian::from_descriptor(cfg.hamiltonian);
    if (!(cfg.t > 0.0)) throw hj::Error("--T must be positive");

    if (!cfg.grid_file.empty()) {
        hj::GridFn f = hj::read_csv_file(cfg.grid_file);
        f.set_extension(
            hj::Extension::linear_lipschitz(hj::lipschitz_estimate(f)));
        return {h, f, f.box()};
    }
    const hj::PiecewiseSpec spec =
        cfg.spec_file.empty() ? hj::catalog(cfg.catalog_id)
                              : hj::PiecewiseSpec::from_json_file(cfg.spec_file);
    const hj::Box roi = parse_box(cfg.box_str, spec.dimension);
    const auto res = parse_res(cfg.res_str, spec.dimension);
    hj::GridFn f = hj::sample_enlarged(spec, h, roi, res, cfg.t, margin_factor);
    return {h, f, roi};
}

json grid_meta(const hj::GridFn& f) {
    json j;
    j["dim"] = f.dim();
    for (int a = 0; a < f.dim(); ++a) {
        j["box"].push_back({f.box().lo[a], f.box().hi[a]});
        j["res"].push_back(f.res(a));
        j["h"].push_back(f.spacing(a));
    }
    return j;
}

struct Manifest {
    json j;
    fs::path dir;

    explicit Manifest(const fs::path& d, const std::string& command)
        : dir(d) {
        fs::create_directories(dir);
        j["command"] = command;
        j["files"] = json::array();
    }
    void add_file(const std::string& name) {
        j["files"].push_back({{"path", name}, {"fnv1a", file_hash(dir / name)}});
    }
    void write(const std::string& name = "manifest.json") const {
        std::ofstream out(dir / name);
        out << j.dump(2) << "\n";
    }
};

int cmd_transform(const Config& cfg, const std::string& dir_flag,
                  bool with_oracle) {
    Timer timer;
    Inputs in = load_inputs(cfg, 1.0);
    hj::GridFn out = dir_flag == "forward"
                         ? hj::forward(in.h, in.f, cfg.t)
                         : hj::backward(in.h, in.f, cfg.t);
    const hj::GridFn roi_out = hj::restrict_to(out, in.roi);

    Manifest man(cfg.out_dir, "transform");
    man.j["direction"] = dir_flag;
    man.j["T"] = cfg.t;
    man.j["hamiltonian"] = cfg.hamiltonian;
    man.j["grid"] = grid_meta(roi_out);
    man.j["enlarged_grid"] = grid_meta(in.f);
    man.j["dependence_margin"] =
        hj::dependence_margin(in.h, in.f, cfg.t);
    hj::write_csv_file(roi_out, (man.dir / "out.csv").string());
    man.add_file("out.csv");

    if (with_oracle) {
        hj::ParabolicRun run;
        hj::GridFn orc = dir_flag == "forward"
                             ? hj::parabolic_forward(in.h, in.f, cfg.t,
                                                     cfg.eps, &run)
                             : hj::parabolic_backward(in.h, in.f, cfg.t,
                                                      cfg.eps, &run);
        const hj::GridFn roi_orc = hj::restrict_to(orc, in.roi);
        hj::write_csv_file(roi_orc, (man.dir / "oracle.csv").string());
        man.add_file("oracle.csv");
        man.j["oracle"] = {{"epsilon", run.epsilon},
                           {"dt", run.dt},
                           {"steps", run.steps},
                           {"cfl", run.cfl_report},
                           {"sup_diff", hj::sup_norm_diff(roi_out, roi_orc)}};
    }
    man.j["seconds"] = timer.seconds();
    man.write();
    return 0;
}

int cmd_reach(const Config& cfg) {
    Timer timer;
    Inputs in = load_inputs(cfg, 2.0);
    const hj::ReachabilityReport rep =
        hj::full_report(in.h, in.f, cfg.t, cfg.tol_reach, in.roi);
    fs::create_directories(cfg.out_dir);
    std::ofstream out(fs::path(cfg.out_dir) / "report.json");
    out << rep.to_json(in.f) << "\n";
    std::cout << "verdict: " << hj::to_string(rep.verdict)
              << "  fixedpoint_residual: " << rep.fixedpoint_residual
              << "  (" << timer.seconds() << " s)\n";
    return 0;
}

int cmd_envelope(const Config& cfg) {
    Timer timer;
    Inputs in = load_inputs(cfg, 2.0);
    const hj::GridFn proj = hj::compose_project(in.h, in.f, cfg.t);
    Manifest man(cfg.out_dir, "envelope");
    man.j["T"] = cfg.t;
    man.j["hamiltonian"] = cfg.hamiltonian;
    const hj::GridFn roi_proj = hj::restrict_to(proj, in.roi);
    hj::write_csv_file(roi_proj, (man.dir / "projection.csv").string());
    man.add_file("projection.csv");
    if (in.h.is_quadratic()) {
        const hj::GridFn env = hj::semiconcave_envelope(in.h, in.f, cfg.t);
        const hj::GridFn roi_env = hj::restrict_to(env, in.roi);
        hj::write_csv_file(roi_env, (man.dir / "envelope.csv").string());
        man.add_file("envelope.csv");
        man.j["projection_vs_envelope_sup"] =
            hj::sup_norm_diff(roi_proj, roi_env);
        const auto res =
            hj::obstacle_residual(env, in.f, in.h, cfg.t);
        man.j["obstacle_residual"] = {
            {"min_violation", res.min_violation},
            {"complementarity", res.complementarity},
            {"kink_exempt_nodes", res.kink_exempt_nodes}};
    }
    man.j["seconds"] = timer.seconds();
    man.write();
    return 0;
}

int cmd_xset(const Config& cfg, const std::string& method) {
    Timer timer;
    Inputs in = load_inputs(cfg, 2.0);
    Manifest man(cfg.out_dir, "xset");
    const hj::GridFn u0_min = hj::minimal_initial(in.h, in.f, cfg.t,
                                                  cfg.tol_reach);
    hj::write_csv_file(hj::restrict_to(u0_min, in.roi),
                       (man.dir / "u0_min.csv").string());
    man.add_file("u0_min.csv");
    hj::XSetMask xs =
        method == "exposed"
            ? hj::xset_exposed(in.h, u0_min, cfg.t, &in.f, -1.0,
                               cfg.tol_reach)
            : hj::xset_gradient(in.h, in.f, cfg.t, -1.0, cfg.tol_reach);
    xs.write_csv_file((man.dir / "xset.csv").string());
    man.add_file("xset.csv");
    {
        std::ofstream side(man.dir / "pushforward.json");
        side << xs.pushforward_json() << "\n";
    }
    man.add_file("pushforward.json");
    man.j["method"] = method;
    man.j["seconds"] = timer.seconds();
    man.write();
    return 0;
}

int cmd_member(const Config& cfg, const std::string& candidate_file) {
    Timer timer;
    Inputs in = load_inputs(cfg, 2.0);
    hj::GridFn cand = hj::read_csv_file(candidate_file);
    if (!cand.same_grid(in.f)) {
        throw hj::GridMismatch(
            "candidate grid must match the enlarged target grid");
    }
    const bool ok =
        hj::membership(in.h, cand, in.f, cfg.t, cfg.tol_reach, true);
    fs::create_directories(cfg.out_dir);
    json j;
    j["member"] = ok;
    j["seconds"] = timer.seconds();
    std::ofstream out(fs::path(cfg.out_dir) / "member.json");
    out << j.dump(2) << "\n";
    std::cout << (ok ? "member" : "not a member") << "\n";
    return 0;
}

// ---- demo: reproduce the catalog experiments with golden checks ---------

struct Check {
    std::string name;
    bool pass;
    double value;
    double bound;
};

int finish_demo(Manifest& man, std::vector<Check>& checks, Timer& timer) {
    bool all = true;
    man.j["checks"] = json::array();
    for (const auto& c : checks) {
        all = all && c.pass;
        man.j["checks"].push_back({{"name", c.name},
                                   {"pass", c.pass},
                                   {"value", c.value},
                                   {"bound", c.bound}});
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " (value "
                  << c.value << ", bound " << c.bound << ")\n";
    }
    man.j["seconds"] = timer.seconds();
    man.write("MANIFEST.json");
    return all ? 0 : 4;
}

int demo_ex31(const fs::path& out_dir) {
    Timer timer;
    const auto h = hj::Hamiltonian::from_descriptor("quadratic:1");
    const double t = 0.5;
    const hj::Box roi = hj::Box::interval(-4.0, 4.0);
    const hj::GridFn u1 =
        hj::sample_enlarged(hj::catalog("u1"), h, roi, {1001, 1}, t, 3.0);
    const hj::GridFn target = hj::forward(h, u1, t);
    const hj::GridFn u0_min = hj::minimal_initial(h, target, t);
    const hj::XSetMask xs = hj::xset_gradient(h, target, t);
    const auto rep = hj::full_report(h, target, t, -1.0, roi);

    Manifest man(out_dir, "demo ex31");
    hj::write_csv_file(hj::restrict_to(target, roi),
                       (man.dir / "target.csv").string());
    man.add_file("target.csv");
    hj::write_csv_file(hj::restrict_to(u0_min, roi),
                       (man.dir / "u0_min.csv").string());
    man.add_file("u0_min.csv");
    xs.write_csv_file((man.dir / "xset.csv").string());
    man.add_file("xset.csv");
    {
        std::ofstream r(man.dir / "report.json");
        r << rep.to_json(target) << "\n";
    }
    man.add_file("report.json");

    // Golden values: complement of X_T converges to [-1.5,-.5] u [.5,1.5].
    std::vector<Check> checks;
    const double hx = target.spacing(0);
    std::vector<std::pair<double, double>> gaps;
    {
        std::optional<double> open;
        for (int i = 0; i < target.res(0); ++i) {
            const double x = target.coord(0, i);
            if (x < -3.0 || x > 3.0) continue;
            const bool inside = xs.at(i);
            if (!inside && !open) open = x;
            if (inside && open) {
                gaps.push_back({*open, x - hx});
                open.reset();
            }
        }
    }
    checks.push_back({"complement has two components",
                      gaps.size() == 2, double(gaps.size()), 2.0});
    if (gaps.size() == 2) {
        const double err = std::max(
            {std::abs(gaps[0].first + 1.5), std::abs(gaps[0].second + 0.5),
             std::abs(gaps[1].first - 0.5), std::abs(gaps[1].second - 1.5)});
        checks.push_back({"complement endpoints", err <= 3.0 * hx, err,
                          3.0 * hx});
    }
    checks.push_back({"verdict Reachable",
                      rep.verdict == hj::Verdict::Reachable,
                      double(rep.verdict == hj::Verdict::Reachable), 1.0});
    {
        const int i = target.node_index(0, -1.0);
        checks.push_back({"target(-1) = 0.75",
                          std::abs(target.at(i) - 0.75) <= 2.0 * hx,
                          target.at(i), 0.75});
    }
    return finish_demo(man, checks, timer);
}

int demo_ex32(const fs::path& out_dir) {
    Timer timer;
    const auto h = hj::Hamiltonian::from_descriptor("quadratic:[[1,0],[0,1]]");
    const double t = 0.5;
    const hj::Box roi = hj::Box::rect(-4.0, 4.0, -2.0, 2.0);
    const hj::GridFn u2 =
        hj::sample_enlarged(hj::catalog("u2"), h, roi, {161, 81}, t, 3.0);
    const hj::GridFn target = hj::forward(h, u2, t);
    const hj::GridFn u0_min = hj::minimal_initial(h, target, t);
    const hj::XSetMask xs = hj::xset_gradient(h, target, t);
    const auto rep = hj::full_report(h, target, t, -1.0, roi);

    Manifest man(out_dir, "demo ex32");
    hj::write_csv_file(hj::restrict_to(target, roi),
                       (man.dir / "target.csv").string());
    man.add_file("target.csv");
    hj::write_csv_file(hj::restrict_to(u0_min, roi),
                       (man.dir / "u0_min.csv").string());
    man.add_file("u0_min.csv");
    xs.write_csv_file((man.dir / "xset.csv").string());
    man.add_file("xset.csv");

    std::vector<Check> checks;
    checks.push_back({"verdict Reachable",
                      rep.verdict == hj::Verdict::Reachable,
                      double(rep.verdict == hj::Verdict::Reachable), 1.0});
    // u2 is itself a member.
    checks.push_back(
        {"u2 is a member", hj::membership(h, u2, target, t, -1.0, true), 1.0,
         1.0});
    return finish_demo(man, checks, timer);
}

int demo_ex33(const fs::path& out_dir) {
    Timer timer;
    const auto h = hj::Hamiltonian::from_descriptor("quadratic:1");
    const hj::Box roi = hj::Box::interval(-4.0, 4.0);
    Manifest man(out_dir, "demo ex33");
    std::vector<Check> checks;
    struct Case {
        const char* id;
        double t;
        std::vector<std::pair<double, double>> golden;  // (x, value)
    };
    for (const Case& cs :
         {Case{"u3", 1.0, {{-1.0, -0.5}, {0.0, 0.0}, {1.0, -0.5}}},
          Case{"u4", 0.5, {{0.0, 0.0}}}}) {
        const hj::GridFn ut =
            hj::sample_enlarged(hj::catalog(cs.id), h, roi, {1001, 1}, cs.t,
                                2.0);
        const hj::GridFn proj = hj::compose_project(h, ut, cs.t);
        const hj::GridFn env = hj::semiconcave_envelope(h, ut, cs.t);
        const auto rep = hj::full_report(h, ut, cs.t, -1.0, roi);
        const std::string base = std::string(cs.id);
        hj::write_csv_file(hj::restrict_to(proj, roi),
                           (man.dir / (base + "_projection.csv")).string());
        man.add_file(base + "_projection.csv");
        hj::write_csv_file(hj::restrict_to(env, roi),
                           (man.dir / (base + "_envelope.csv")).string());
        man.add_file(base + "_envelope.csv");
        for (const auto& [x, v] : cs.golden) {
            const int i = proj.node_index(0, x);
            checks.push_back({base + "* value at " + std::to_string(x),
                              std::abs(proj.at(i) - v) <= 0.02, proj.at(i),
                              v});
        }
        checks.push_back(
            {base + " envelope agrees with projection",
             hj::sup_norm_diff(hj::restrict_to(proj, roi),
                               hj::restrict_to(env, roi)) <= 0.01,
             hj::sup_norm_diff(hj::restrict_to(proj, roi),
                               hj::restrict_to(env, roi)),
             0.01});
        checks.push_back({base + " verdict NotReachable",
                          rep.verdict == hj::Verdict::NotReachable,
                          double(rep.verdict == hj::Verdict::NotReachable),
                          1.0});
    }
    return finish_demo(man, checks, timer);
}

int demo_ex34(const fs::path& out_dir) {
    Timer timer;
    const auto h =
        hj::Hamiltonian::from_descriptor("quadratic:[[2,1],[1,1]]");
    const hj::Box roi = hj::Box::rect(-4.0, 4.0, -2.0, 2.0);
    Manifest man(out_dir, "demo ex34");
    std::vector<Check> checks;
    struct Case {
        const char* id;
        double t;
    };
    for (const Case& cs : {Case{"u5", 1.0}, Case{"u6", 0.5}}) {
        const hj::GridFn ut =
            hj::sample_enlarged(hj::catalog(cs.id), h, roi, {129, 65}, cs.t,
                                2.0);
        const hj::GridFn proj = hj::compose_project(h, ut, cs.t);
        const hj::GridFn env = hj::semiconcave_envelope(h, ut, cs.t);
        const auto rep = hj::full_report(h, ut, cs.t, -1.0, roi);
        const std::string base = std::string(cs.id);
        hj::write_csv_file(hj::restrict_to(proj, roi),
                           (man.dir / (base + "_projection.csv")).string());
        man.add_file(base + "_projection.csv");
        hj::write_csv_file(hj::restrict_to(env, roi),
                           (man.dir / (base + "_envelope.csv")).string());
        man.add_file(base + "_envelope.csv");
        const double agree =
            hj::sup_norm_diff(hj::restrict_to(proj, roi),
                              hj::restrict_to(env, roi));
        checks.push_back({base + " envelope agrees with projection",
                          agree <= 6.0 * ut.max_spacing(), agree,
                          6.0 * ut.max_spacing()});
        // The projection sits strictly above both targets.
        checks.push_back({base + " projection gap exceeds 0.3",
                          rep.fixedpoint_residual > 0.3,
                          rep.fixedpoint_residual, 0.3});
        checks.push_back({base + " verdict NotReachable",
                          rep.verdict == hj::Verdict::NotReachable,
                          double(rep.verdict == hj::Verdict::NotReachable),
                          1.0});
    }
    return finish_demo(man, checks, timer);
}

int cmd_demo(const std::string& id, const std::string& out_dir) {
    const fs::path dir = fs::path(out_dir) / id;
    if (id == "ex31") return demo_ex31(dir);
    if (id == "ex32") return demo_ex32(dir);
    if (id == "ex33") return demo_ex33(dir);
    if (id == "ex34") return demo_ex34(dir);
    throw hj::Error("unknown demo id (want ex31..ex34): " + id);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hopf-Lax / inverse design toolkit for Hamilton-Jacobi "
                 "equations"};
    app.require_subcommand(1);

    Config cfg;
    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--H", cfg.hamiltonian,
                        "Hamiltonian descriptor, e.g. quadratic:1 or "
                        "quadratic:[[2,1],[1,1]] or scalar1d:p^2/2:[-4,4]");
        sub->add_option("--catalog", cfg.catalog_id, "catalog id u1..u6");
        sub->add_option("--spec", cfg.spec_file, "piecewise spec JSON file");
        sub->add_option("--grid", cfg.grid_file, "sampled GridFn CSV file");
        sub->add_option("--T", cfg.t, "time horizon")->required();
        sub->add_option("--box", cfg.box_str, "region of interest lo:hi[,lo:hi]");
        sub->add_option("--res", cfg.res_str, "per-axis resolution N[,N]");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--tol-reach", cfg.tol_reach,
                        "reachability tolerance override");
    };

    std::string dir_flag = "forward";
    bool with_oracle = false;
    auto* transform = app.add_subcommand("transform",
                                         "apply S_T^+ or S_T^-");
    add_common(transform);
    transform->add_option("--dir", dir_flag, "forward|backward")
        ->check(CLI::IsMember({"forward", "backward"}));
    transform->add_flag("--check-oracle", with_oracle,
                        "also run the vanishing-viscosity oracle");
    transform->add_option("--eps", cfg.eps, "oracle viscosity");

    auto* reach = app.add_subcommand("reach", "reachability report");
    add_common(reach);

    auto* envelope = app.add_subcommand(
        "envelope", "semiconcave envelope / projection onto reachable targets");
    add_common(envelope);

    std::string xset_method = "gradient";
    auto* xset = app.add_subcommand("xset", "coincidence set X_T(u_T)");
    add_common(xset);
    xset->add_option("--method", xset_method, "gradient|exposed")
        ->check(CLI::IsMember({"gradient", "exposed"}));

    std::string candidate_file;
    auto* member = app.add_subcommand("member",
                                      "test a candidate initial datum");
    add_common(member);
    member->add_option("--candidate", candidate_file, "candidate CSV")
        ->required();

    std::string demo_id, demo_out = "demo_out";
    auto* demo = app.add_subcommand("demo", "reproduce a catalog experiment");
    demo->add_option("id", demo_id, "ex31|ex32|ex33|ex34")->required();
    demo->add_option("--out", demo_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (transform->parsed()) return cmd_transform(cfg, dir_flag, with_oracle);
        if (reach->parsed()) return cmd_reach(cfg);
        if (envelope->parsed()) return cmd_envelope(cfg);
        if (xset->parsed()) return cmd_xset(cfg, xset_method);
        if (member->parsed()) return cmd_member(cfg, candidate_file);
        if (demo->parsed()) return cmd_demo(demo_id, demo_out);
    } catch (const hj::GridMismatch& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const hj::BoxTooSmall& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const hj::Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
