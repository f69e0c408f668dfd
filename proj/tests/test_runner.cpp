#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "parasphere/runner.hpp"

using namespace parasphere;
using nlohmann::json;

namespace {

json base_config() {
    return json::parse(R"({
        "m": 1,
        "F": "(i/2)*z1^2",
        "base": [[0.0, 0.0]],
        "plan": {"kind": "grid", "x": [-1, 1, 5], "v": [-1, 1, 5]}
    })");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing") {
    RunConfig c = RunConfig::from_json(base_config());
    CHECK(c.m == 1);
    CHECK(c.prepotential == "(i/2)*z1^2");
    CHECK(c.plan.kind == SamplePlan::Kind::Grid);
    CHECK(c.plan.size(1) == 25);

    json bad = base_config();
    bad["unexpected"] = 1;
    CHECK_THROWS_WITH_AS(RunConfig::from_json(bad), doctest::Contains("unknown key"),
                         ConfigError);

    json badtol = base_config();
    badtol["tolerances"] = {{"no_such_residual", 1e-3}};
    CHECK_THROWS_WITH_AS(RunConfig::from_json(badtol),
                         doctest::Contains("unknown residual name"), ConfigError);

    json badbase = base_config();
    badbase["base"] = {{0.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(RunConfig::from_json(badbase), ConfigError);

    json badplan = base_config();
    badplan["plan"] = {{"kind", "hexagonal"}};
    CHECK_THROWS_AS(RunConfig::from_json(badplan), ConfigError);

    json noplan = base_config();
    noplan.erase("plan");
    CHECK_THROWS_AS(RunConfig::from_json(noplan), ConfigError);

    json random_plan = base_config();
    random_plan["plan"] = {{"kind", "random"},
                           {"count", 10},
                           {"seed", 7},
                           {"box", {{"x", {-1, 1}}, {"v", {0.5, 2}}}}};
    RunConfig cr = RunConfig::from_json(random_plan);
    CHECK(cr.plan.kind == SamplePlan::Kind::Random);
    CHECK(cr.plan.points(1).size() == 10);
}

TEST_CASE("run_check: quadratic grid passes") {
    RunConfig c = RunConfig::from_json(base_config());
    CheckOutcome out = run_check(c);
    CHECK(out.exit_code == 0);
    CHECK(out.report["pass"] == true);
    CHECK(out.report["counts"]["planned"] == 25);
    CHECK(out.report["counts"]["nondegenerate"] == 25);
    CHECK(out.report["residuals"]["monge_ampere"]["max"].get<double>() < 1e-12);
    CHECK(out.report["residuals"]["conjugacy"]["pass"] == true);
    CHECK(out.report["residuals"]["det_g_spread"]["max"].get<double>() < 1e-12);
}

TEST_CASE("run_check: cubic grid above the real axis passes") {
    json j = base_config();
    j["F"] = "z1^3/6";
    j["base"] = {{0.0, 1.0}};
    j["plan"] = {{"kind", "grid"}, {"x", {-1, 1, 4}}, {"v", {0.5, 2, 4}}};
    CheckOutcome out = run_check(RunConfig::from_json(j));
    CHECK(out.exit_code == 0);
    CHECK(out.report["residuals"]["monge_ampere"]["max"].get<double>() < 1e-9);
    CHECK(out.report["residuals"]["curvature_nabla"]["max"].get<double>() < 1e-5);
}

TEST_CASE("run_check: mostly degenerate plan exits 3") {
    json j = base_config();
    j["F"] = "z1^3/6";
    j["plan"] = {{"kind", "grid"}, {"x", {-1, 1, 5}}, {"v", {-1e-10, 1e-10, 2}}};
    CheckOutcome out = run_check(RunConfig::from_json(j));
    CHECK(out.exit_code == 3);
    CHECK(out.report["pass"] == false);
    CHECK(out.report.contains("error"));
}

TEST_CASE("run_check: tolerance override fails and still writes the report") {
    const std::string path = "runner_fail_report.json";
    std::remove(path.c_str());
    json j = base_config();
    j["F"] = "z1^3/6";
    j["plan"] = {{"kind", "grid"}, {"x", {-1, 1, 4}}, {"v", {0.5, 2, 4}}};
    j["tolerances"] = {{"monge_ampere", 1e-30}};
    j["out"] = {{"report", path}};
    CheckOutcome out = run_check(RunConfig::from_json(j));
    CHECK(out.exit_code == 1);
    CHECK(out.report["pass"] == false);
    CHECK(out.report["residuals"]["monge_ampere"]["pass"] == false);
    CHECK(out.report["residuals"]["lagrangian"]["pass"] == true);

    json written = json::parse(slurp(path));
    CHECK(written == out.report);
    std::remove(path.c_str());

    // a global tolerance scale can rescue the run
    CheckOutcome rescued = run_check(RunConfig::from_json(j), 1e30);
    CHECK(rescued.exit_code == 0);
}

TEST_CASE("run_check: deterministic reports") {
    json j = base_config();
    j["plan"] = {{"kind", "random"},
                 {"count", 40},
                 {"seed", 20260824},
                 {"box", {{"x", {-1, 1}}, {"v", {-1, 1}}}}};
    RunConfig c = RunConfig::from_json(j);
    CheckOutcome a = run_check(c, 1.0, 1);
    CheckOutcome b = run_check(c, 1.0, 4);
    CHECK(a.report.dump(2) == b.report.dump(2));
    CHECK(a.exit_code == 0);
}

TEST_CASE("run_realize: quadratic surface mesh") {
    const std::string csv = "runner_realize.csv";
    const std::string obj = "runner_realize.obj";
    std::remove(csv.c_str());
    std::remove(obj.c_str());
    json j = base_config();
    j["plan"] = {{"kind", "grid"}, {"x", {-1, 1, 33}}, {"v", {-1, 1, 33}}};
    j["out"] = {{"csv", csv}, {"obj", obj}};
    RealizeOutcome out = run_realize(RunConfig::from_json(j));
    CHECK(out.exit_code == 0);
    CHECK(out.csv_rows == 1089);
    CHECK(out.obj_vertices == 1089);

    std::string csv_text = slurp(csv);
    std::size_t lines = std::count(csv_text.begin(), csv_text.end(), '\n');
    CHECK(lines == 1090); // header + rows
    CHECK(csv_text.rfind("sample_index,re_z1,im_z1,x1,y1,u,detG,g_1_1,g_1_2,g_2_2,flags", 0) ==
          0);

    std::string obj_text = slurp(obj);
    std::size_t vlines = 0, flines = 0;
    std::istringstream is(obj_text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) ++vlines;
        if (line.rfind("f ", 0) == 0) ++flines;
    }
    CHECK(vlines == 1089);
    CHECK(flines == 2 * 32 * 32);
    std::remove(csv.c_str());
    std::remove(obj.c_str());
}

TEST_CASE("run_realize: degenerate row leaves holes") {
    const std::string obj = "runner_holes.obj";
    std::remove(obj.c_str());
    json j = base_config();
    j["F"] = "z1^3/6";
    j["base"] = {{1.0, 1.0}};
    j["plan"] = {{"kind", "grid"}, {"x", {0.5, 1.5, 3}}, {"v", {-1, 1, 5}}};
    j["out"] = {{"obj", obj}};
    RealizeOutcome out = run_realize(RunConfig::from_json(j));
    CHECK(out.exit_code == 0);
    CHECK(out.report["counts"]["degenerate"] == 3); // the v = 0 column
    CHECK(out.obj_vertices == 12);

    std::string obj_text = slurp(obj);
    std::size_t flines = 0;
    std::istringstream is(obj_text);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind("f ", 0) == 0) ++flines;
    // 2x4 cells, the two cells flanking v = 0 are dropped in each strip
    CHECK(flines == 2 * (2 * 4 - 2 * 2));
    std::remove(obj.c_str());
}

TEST_CASE("run_realize: m = 2 emits CSV only") {
    const std::string csv = "runner_m2.csv";
    const std::string obj = "runner_m2.obj";
    std::remove(csv.c_str());
    std::remove(obj.c_str());
    json j;
    j["m"] = 2;
    j["F"] = "z1*z2+(i/2)*(z1^2+z2^2)";
    j["base"] = {{0.0, 0.0}, {0.0, 0.0}};
    j["plan"] = {{"kind", "grid"}, {"x", {-1, 1, 3}}, {"v", {-1, 1, 3}}};
    j["out"] = {{"csv", csv}, {"obj", obj}};
    RealizeOutcome out = run_realize(RunConfig::from_json(j));
    CHECK(out.exit_code == 0);
    CHECK(out.csv_rows == 81);
    CHECK(out.obj_vertices == 0);
    CHECK(out.report.contains("notes"));
    std::remove(csv.c_str());

    json random_plan = j;
    random_plan["plan"] = {{"kind", "random"},
                           {"count", 5},
                           {"seed", 1},
                           {"box", {{"x", {-1, 1}}, {"v", {-1, 1}}}}};
    CHECK_THROWS_AS(run_realize(RunConfig::from_json(random_plan)), ConfigError);
}

TEST_CASE("run_info: base point summary") {
    json j = base_config();
    RunConfig c = RunConfig::from_json(j);
    InfoSummary s = run_info(c);
    CHECK(s.m == 1);
    CHECK(s.sig_b == MatrixSignature{1, 0});
    CHECK(s.sig_g == MatrixSignature{2, 0});
    CHECK(s.curvature_is_gauss);
    CHECK(std::abs(s.curvature) < 1e-8);
    CHECK(s.congruence_applicable);

    json jc = base_config();
    jc["F"] = "z1^3/6";
    jc["base"] = {{0.0, 1.0}};
    InfoSummary sc = run_info(RunConfig::from_json(jc));
    CHECK(sc.curvature == doctest::Approx(0.5).epsilon(1e-4));
    CHECK_FALSE(sc.congruence_applicable);
}

TEST_CASE("format_double is digit-exact") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}
