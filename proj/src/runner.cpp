#include "parasphere/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <thread>

namespace parasphere {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ------------------------------------------------------------- sampling

std::vector<Vec> SamplePlan::points(int m) const {
    std::vector<Vec> out;
    if (kind == Kind::Grid) {
        grid.validate(m);
        std::vector<int> shape = grid.shape();
        const int naxes = static_cast<int>(shape.size());
        std::vector<int> idx(naxes, 0);
        for (;;) {
            out.push_back(grid.node(idx));
            int ax = naxes - 1;
            while (ax >= 0) {
                if (++idx[ax] < shape[ax]) break;
                idx[ax] = 0;
                --ax;
            }
            if (ax < 0) break;
        }
        return out;
    }
    if (static_cast<int>(box_x.size()) != m || static_cast<int>(box_v.size()) != m)
        throw ConfigError("random plan box must have one x range and one v range per variable");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < count; ++s) {
        Vec xi(2 * m);
        for (int k = 0; k < m; ++k)
            xi[k] = box_x[k].lo + (box_x[k].hi - box_x[k].lo) * unit(rng);
        for (int k = 0; k < m; ++k)
            xi[m + k] = box_v[k].lo + (box_v[k].hi - box_v[k].lo) * unit(rng);
        out.push_back(xi);
    }
    return out;
}

std::size_t SamplePlan::size(int m) const {
    if (kind == Kind::Random) return static_cast<std::size_t>(count);
    std::size_t n = 1;
    for (int c : grid.shape()) n *= c;
    (void)m;
    return n;
}

// ------------------------------------------------------------ config I/O

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

std::vector<GridAxis> parse_grid_axes(const json& j, int m, const std::string& name) {
    auto one = [&](const json& t) {
        if (!t.is_array() || t.size() != 3)
            throw ConfigError("grid axis \"" + name + "\" must be [lo, hi, count]");
        return GridAxis{t[0].get<double>(), t[1].get<double>(), t[2].get<int>()};
    };
    std::vector<GridAxis> axes;
    if (j.is_array() && !j.empty() && j[0].is_array()) {
        for (const auto& t : j) axes.push_back(one(t));
    } else {
        GridAxis a = one(j);
        axes.assign(m, a);
    }
    if (static_cast<int>(axes.size()) != m)
        throw ConfigError("grid axis \"" + name + "\" must give one triple per variable");
    return axes;
}

std::vector<BoxAxis> parse_box_axes(const json& j, int m, const std::string& name) {
    auto one = [&](const json& t) {
        if (!t.is_array() || t.size() != 2)
            throw ConfigError("box axis \"" + name + "\" must be [lo, hi]");
        return BoxAxis{t[0].get<double>(), t[1].get<double>()};
    };
    std::vector<BoxAxis> axes;
    if (j.is_array() && !j.empty() && j[0].is_array()) {
        for (const auto& t : j) axes.push_back(one(t));
    } else {
        BoxAxis a = one(j);
        axes.assign(m, a);
    }
    if (static_cast<int>(axes.size()) != m)
        throw ConfigError("box axis \"" + name + "\" must give one pair per variable");
    return axes;
}

} // namespace

RunConfig RunConfig::from_json(const json& j) {
    check_keys(j, {"m", "F", "base", "plan", "tolerances", "out"}, "config");
    RunConfig c;
    if (!j.contains("m") || !j.contains("F"))
        throw ConfigError("config requires \"m\" and \"F\"");
    c.m = j.at("m").get<int>();
    if (c.m < 1 || c.m > 4) throw ConfigError("arity m must lie in 1..4");
    c.prepotential = j.at("F").get<std::string>();

    c.base.assign(c.m, cplx(0.0, 0.0));
    if (j.contains("base")) {
        const json& b = j.at("base");
        if (!b.is_array() || static_cast<int>(b.size()) != c.m)
            throw ConfigError("\"base\" must list one [re, im] pair per variable");
        for (int k = 0; k < c.m; ++k) {
            if (!b[k].is_array() || b[k].size() != 2)
                throw ConfigError("\"base\" entries must be [re, im] pairs");
            c.base[k] = cplx(b[k][0].get<double>(), b[k][1].get<double>());
        }
    }

    if (!j.contains("plan")) throw ConfigError("config requires \"plan\"");
    const json& pj = j.at("plan");
    std::string kind = pj.value("kind", "");
    if (kind == "grid") {
        check_keys(pj, {"kind", "x", "v"}, "plan");
        if (!pj.contains("x") || !pj.contains("v"))
            throw ConfigError("grid plan requires \"x\" and \"v\"");
        c.plan.kind = SamplePlan::Kind::Grid;
        c.plan.grid.x_axes = parse_grid_axes(pj.at("x"), c.m, "x");
        c.plan.grid.v_axes = parse_grid_axes(pj.at("v"), c.m, "v");
    } else if (kind == "random") {
        check_keys(pj, {"kind", "count", "seed", "box"}, "plan");
        if (!pj.contains("count") || !pj.contains("seed") || !pj.contains("box"))
            throw ConfigError("random plan requires \"count\", \"seed\" and \"box\"");
        c.plan.kind = SamplePlan::Kind::Random;
        c.plan.count = pj.at("count").get<int>();
        if (c.plan.count < 1) throw ConfigError("random plan count must be >= 1");
        c.plan.seed = pj.at("seed").get<std::uint64_t>();
        const json& box = pj.at("box");
        check_keys(box, {"x", "v"}, "plan box");
        c.plan.box_x = parse_box_axes(box.at("x"), c.m, "x");
        c.plan.box_v = parse_box_axes(box.at("v"), c.m, "v");
    } else {
        throw ConfigError("plan kind must be \"grid\" or \"random\"");
    }

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        auto defaults = default_tolerances();
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (!defaults.count(it.key()))
                throw ConfigError("unknown residual name \"" + it.key() + "\" in tolerances");
            c.tolerances[it.key()] = it.value().get<double>();
        }
    }

    if (j.contains("out")) {
        const json& o = j.at("out");
        check_keys(o, {"report", "csv", "obj"}, "out");
        c.report_path = o.value("report", "");
        c.csv_path = o.value("csv", "");
        c.obj_path = o.value("obj", "");
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

json RunConfig::echo() const {
    json j;
    j["m"] = m;
    j["F"] = prepotential;
    json b = json::array();
    for (const cplx& z : base) b.push_back({z.real(), z.imag()});
    j["base"] = b;
    json pj;
    if (plan.kind == SamplePlan::Kind::Grid) {
        pj["kind"] = "grid";
        json xs = json::array(), vs = json::array();
        for (const GridAxis& a : plan.grid.x_axes) xs.push_back({a.lo, a.hi, a.count});
        for (const GridAxis& a : plan.grid.v_axes) vs.push_back({a.lo, a.hi, a.count});
        pj["x"] = xs;
        pj["v"] = vs;
    } else {
        pj["kind"] = "random";
        pj["count"] = plan.count;
        pj["seed"] = plan.seed;
        json xs = json::array(), vs = json::array();
        for (const BoxAxis& a : plan.box_x) xs.push_back({a.lo, a.hi});
        for (const BoxAxis& a : plan.box_v) vs.push_back({a.lo, a.hi});
        pj["box"] = {{"x", xs}, {"v", vs}};
    }
    j["plan"] = pj;
    j["tolerances"] = tolerances;
    return j;
}

std::map<std::string, double> default_tolerances() {
    return {
        {"lagrangian", 1e-9},
        {"monge_ampere", 1e-9},
        {"det_g_spread", 1e-9},
        {"omega_spread", 1e-9},
        {"volume_ratio_spread", 1e-9},
        {"conjugacy", 1e-6},
        {"nabla_omega", 1e-6},
        {"d_nabla_J", 1e-6},
        {"nijenhuis", 1e-6},
        {"torsion_nabla", 1e-5},
        {"torsion_nabla_J", 1e-5},
        {"curvature_nabla", 1e-5},
        {"curvature_nabla_J", 1e-5},
        {"shape", 1e-5},
        {"lambda", 1e-5},
    };
}

// -------------------------------------------------------------- run_check

namespace {

struct MaxTable {
    std::map<std::string, double> v;

    void take(const std::string& name, double r) {
        auto it = v.find(name);
        if (it == v.end() || r > it->second) v[name] = r;
    }

    void merge(const MaxTable& o) {
        for (const auto& [k, r] : o.v) take(k, r);
    }
};

MaxTable point_residuals(const SKPoint& p) {
    MaxTable t;
    t.take("lagrangian", lagrangian_residual(p));
    t.take("monge_ampere", ma_residual(p));
    t.take("conjugacy", conjugacy_residual(p));
    auto [r1, r2] = special_residuals(p);
    t.take("nabla_omega", r1);
    t.take("d_nabla_J", r2);
    t.take("nijenhuis", nijenhuis_residual(p));
    auto [t1, c1] = curvature_torsion(ConnectionKind::Induced, p);
    t.take("torsion_nabla", t1);
    t.take("curvature_nabla", c1);
    auto [t2, c2] = curvature_torsion(ConnectionKind::Conjugate, p);
    t.take("torsion_nabla_J", t2);
    t.take("curvature_nabla_J", c2);
    ShapeResult s = shape_tensor(p);
    t.take("shape", s.max_abs);
    t.take("lambda", std::abs(s.lambda));
    return t;
}

void write_if_requested(const json& report, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report to " + path);
    out << report.dump(2) << "\n";
}

} // namespace

CheckOutcome run_check(const RunConfig& cfg, double tol_scale, int jobs) {
    Prepotential F(cfg.prepotential, cfg.m);
    std::vector<Vec> nodes = cfg.plan.points(cfg.m);

    std::vector<SKPoint> good;
    std::size_t degenerate = 0;
    for (const Vec& xi : nodes) {
        SKPoint p = make_point(F, xi);
        if (p.nondegenerate)
            good.push_back(std::move(p));
        else
            ++degenerate;
    }

    json report;
    report["config"] = cfg.echo();
    report["counts"] = {{"planned", nodes.size()},
                        {"nondegenerate", good.size()},
                        {"degenerate", degenerate}};

    if (2 * degenerate > nodes.size()) {
        report["pass"] = false;
        report["error"] = "more than half of the plan nodes are degenerate";
        write_if_requested(report, cfg.report_path);
        return {report, 3};
    }

    auto tols = default_tolerances();
    for (const auto& [k, v] : cfg.tolerances) tols[k] = v;
    for (auto& [k, v] : tols) v *= tol_scale;

    jobs = std::max(1, jobs);
    std::vector<MaxTable> partial(jobs);
    {
        std::vector<std::thread> pool;
        std::size_t chunk = (good.size() + jobs - 1) / std::max<std::size_t>(1, jobs);
        for (int w = 0; w < jobs; ++w) {
            std::size_t lo = w * chunk;
            std::size_t hi = std::min(good.size(), lo + chunk);
            if (lo >= hi) continue;
            pool.emplace_back([&, w, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i) partial[w].merge(point_residuals(good[i]));
            });
        }
        for (auto& th : pool) th.join();
    }
    MaxTable table;
    for (const MaxTable& p : partial) table.merge(p);

    if (good.size() >= 2) {
        ConstancySpreads sp = constancy_certificates(good);
        table.take("det_g_spread", sp.det_g);
        table.take("omega_spread", sp.omega);
        table.take("volume_ratio_spread", sp.volume_ratio);
    }

    bool all_pass = true;
    json residuals;
    for (const auto& [name, tol] : tols) {
        auto it = table.v.find(name);
        if (it == table.v.end()) continue;
        bool pass = it->second <= tol;
        all_pass = all_pass && pass;
        residuals[name] = {{"max", it->second}, {"tolerance", tol}, {"pass", pass}};
    }
    report["residuals"] = residuals;
    report["pass"] = all_pass;
    write_if_requested(report, cfg.report_path);
    return {report, all_pass ? 0 : 1};
}

// ------------------------------------------------------------ run_realize

namespace {

void write_csv(const ImmersionResult& res, int m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV to " + path);
    out << "sample_index";
    for (int k = 1; k <= m; ++k) out << ",re_z" << k << ",im_z" << k;
    for (int k = 1; k <= m; ++k) out << ",x" << k;
    for (int k = 1; k <= m; ++k) out << ",y" << k;
    out << ",u,detG";
    for (int i = 1; i <= 2 * m; ++i)
        for (int j = i; j <= 2 * m; ++j) out << ",g_" << i << "_" << j;
    out << ",flags\n";
    for (const ImmersionSample& s : res.samples) {
        out << s.index;
        for (int k = 0; k < m; ++k)
            out << "," << format_double(s.xi[k]) << "," << format_double(s.xi[m + k]);
        for (int k = 0; k < m; ++k) out << "," << format_double(s.x[k]);
        for (int k = 0; k < m; ++k) out << "," << format_double(s.y[k]);
        out << "," << format_double(s.u) << "," << format_double(s.det_g);
        for (int i = 0; i < 2 * m; ++i)
            for (int j = i; j < 2 * m; ++j) out << "," << format_double(s.G(i, j));
        out << ",ok\n";
    }
}

std::size_t write_obj(const ImmersionResult& res, const std::string& path) {
    // m = 1 only: shape is [nx, nv]; vertices in grid order, two triangles
    // per complete cell.
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write OBJ to " + path);
    const int nv = res.shape[1];
    std::map<std::pair<int, int>, std::size_t> vertex; // grid index -> 1-based OBJ index
    std::size_t next = 1;
    for (const ImmersionSample& s : res.samples) {
        vertex[{s.grid_index[0], s.grid_index[1]}] = next++;
        out << "v " << format_double(s.phi[0]) << " " << format_double(s.phi[1]) << " "
            << format_double(s.phi[2]) << "\n";
    }
    const int nx = res.shape[0];
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 0; j + 1 < nv; ++j) {
            auto a = vertex.find({i, j});
            auto b = vertex.find({i + 1, j});
            auto c = vertex.find({i + 1, j + 1});
            auto d = vertex.find({i, j + 1});
            if (a == vertex.end() || b == vertex.end() || c == vertex.end() ||
                d == vertex.end())
                continue; // hole at a degenerate-flagged cell
            out << "f " << a->second << " " << b->second << " " << c->second << "\n";
            out << "f " << a->second << " " << c->second << " " << d->second << "\n";
        }
    return next - 1;
}

} // namespace

RealizeOutcome run_realize(const RunConfig& cfg) {
    if (cfg.plan.kind != SamplePlan::Kind::Grid)
        throw ConfigError("realize requires a grid plan");
    Prepotential F(cfg.prepotential, cfg.m);
    ImmersionResult res = immerse(F, cfg.plan.grid, cfg.base);

    RealizeOutcome out;
    std::size_t planned = cfg.plan.size(cfg.m);
    out.report["config"] = cfg.echo();
    out.report["counts"] = {{"planned", planned},
                            {"emitted", res.samples.size()},
                            {"degenerate", res.degenerate_count},
                            {"path_warnings", res.path_warning_count}};
    if (2 * res.degenerate_count > planned) {
        out.report["pass"] = false;
        out.report["error"] = "more than half of the plan nodes are degenerate";
        write_if_requested(out.report, cfg.report_path);
        out.exit_code = 3;
        return out;
    }

    if (!cfg.csv_path.empty()) {
        write_csv(res, cfg.m, cfg.csv_path);
        out.csv_rows = res.samples.size();
    }
    if (!cfg.obj_path.empty()) {
        if (cfg.m == 1) {
            out.obj_vertices = write_obj(res, cfg.obj_path);
        } else {
            out.report["notes"] = {"OBJ output is only produced for m = 1; CSV written"};
        }
    }
    out.report["pass"] = true;
    write_if_requested(out.report, cfg.report_path);
    return out;
}

// --------------------------------------------------------------- run_info

InfoSummary run_info(const RunConfig& cfg) {
    Prepotential F(cfg.prepotential, cfg.m);
    SKPoint p = make_point(F, cfg.base);
    if (!p.nondegenerate)
        throw DegeneratePoint("base point is degenerate");
    InfoSummary s;
    s.m = cfg.m;
    s.sig_b = *p.sigB;
    s.sig_g = signature(metric_G(p), 1e-10);
    s.curvature_is_gauss = (cfg.m == 1);
    s.curvature = s.curvature_is_gauss ? gauss_curvature(p) : scalar_curvature(p);
    CongruenceResult c = paraboloid_congruence(F, cfg.base);
    s.congruence_applicable = c.applicable;
    s.congruence_note = c.note;
    return s;
}

} // namespace parasphere
