#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "harness.hpp"

using namespace hbc;
using namespace hbc::harness;
using nlohmann::json;

namespace {

void expect_config_error(const json& j)
{
    try {
        parse_config(j);
        FAIL() << j.dump();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConfigError) << j.dump();
    }
}

json small_run(const std::string& domain, json bc)
{
    return {{"domain", domain}, {"bc", std::move(bc)}, {"Q", 8}, {"M", 30}, {"R_m", 3.0}, {"test_grid", 11}, {"edge_points", 11}};
}

}  // namespace

TEST(Config, Defaults)
{
    const RunConfig c = parse_config({{"domain", "helm-1"}});
    EXPECT_EQ(c.Q, 35);
    EXPECT_EQ(c.M, 300);
    EXPECT_EQ(c.trials, 20);
    EXPECT_EQ(c.problem, ProblemKind::Helmholtz);
    for (const auto& e : c.bc) EXPECT_EQ(e.type, BCType::Dirichlet);
}

TEST(Config, EdgeSpellings)
{
    const RunConfig a = parse_config({{"domain", "helm-1"}, {"bc", {"D", "robin", {{"type", "R"}, {"alpha", 2.0}}, "D"}}});
    EXPECT_EQ(a.bc[1].type, BCType::Robin);
    EXPECT_EQ(a.bc[1].alpha, 1.0);
    EXPECT_EQ(a.bc[2].alpha, 2.0);
    const RunConfig b = parse_config({{"domain", "heat-1"}, {"problem", "heat"}, {"bc", {{"CD", "F"}}}});
    EXPECT_EQ(b.bc[2].type, BCType::Free);
    EXPECT_EQ(bc_label(b.bc), "AB=dirichlet,BC=dirichlet,CD=free,AD=dirichlet");
}

TEST(Config, CustomDomain)
{
    const json line = [](double x0, double y0, double x1, double y1) {
        return json{{"kind", "line"}, {"p0", {x0, y0}}, {"p1", {x1, y1}}};
    }(0, 0, 1, 0);
    const json j = {{"domain",
                     {{"name", "unit_square"},
                      {"edges",
                       {{"ab", line},
                        {"bc", {{"kind", "line"}, {"p0", {1, 0}}, {"p1", {1, 1}}}},
                        {"cd", {{"kind", "line"}, {"p0", {0, 1}}, {"p1", {1, 1}}}},
                        {"ad", {{"kind", "line"}, {"p0", {0, 0}}, {"p1", {0, 1}}}}}}}}};
    const RunConfig c = parse_config(j);
    ASSERT_TRUE(c.custom.has_value());
    EXPECT_EQ(c.domain_name, "unit_square");
    const DomainMap m = build_map(c);
    EXPECT_NEAR(m.point(0, 0)[0], 0.5, 1e-15);
}

TEST(Config, CurveKinds)
{
    const ParametricCurve arc = parse_curve({{"kind", "circular_arc"}, {"center", {1, 0}}, {"radius", 1.0}, {"theta0", M_PI}, {"theta1", M_PI / 3}});
    EXPECT_NEAR(arc.eval(-1)[0], 0.0, 1e-15);
    const ParametricCurve rev = parse_curve({{"kind", "line"}, {"p0", {0, 0}}, {"p1", {2, 0}}, {"reversed", true}});
    EXPECT_NEAR(rev.eval(-1)[0], 2.0, 1e-15);
    EXPECT_THROW(parse_curve({{"kind", "spline"}}), Error);
}

TEST(Config, Rejections)
{
    expect_config_error(json::array());
    expect_config_error({{"Q", 10}});
    expect_config_error({{"domain", "helm-9"}});
    expect_config_error({{"domain", "helm-1"}, {"map", "bilinear"}});
    expect_config_error({{"domain", "helm-1"}, {"problem", "wave"}});
    expect_config_error({{"domain", "helm-1"}, {"bc", {"D", "D", "D"}}});
    expect_config_error({{"domain", "helm-1"}, {"bc", {"N", "D", "N", "D"}}});
    expect_config_error({{"domain", "helm-1"}, {"bc", {"D", "X", "D", "D"}}});
    expect_config_error({{"domain", "helm-1"}, {"Q", 1}});
    expect_config_error({{"domain", "helm-1"}, {"M", 0}});
    expect_config_error({{"domain", "helm-1"}, {"R_m", -1.0}});
    expect_config_error({{"domain", "helm-1"}, {"seed", -4}});
    expect_config_error({{"domain", "helm-1"}, {"Q", "many"}});
    expect_config_error({{"domain", "helm-1"}, {"solver", {{"rcond", 0.0}}}});
    expect_config_error({{"domain", {{"edges", {{"ab", {{"kind", "line"}, {"p0", {0, 0}}, {"p1", {1, 0}}}}}}}}});
    EXPECT_THROW(load_config("/nonexistent/config.json"), Error);
}

TEST(Summary, ErrorFieldsAndKinds)
{
    const SolveRun r = run_solve(parse_config(small_run("helm-1", {"D", "N", "D", "D"})));
    ASSERT_FALSE(r.failed) << r.failure;
    const json s = summary_json(r);
    const json& e = s.at("errors");
    EXPECT_EQ(e.size(), 10u);
    for (const char* k : {"e_max_domain", "e_rms_domain", "max_AB", "rms_AB", "max_BC", "rms_BC", "max_CD", "rms_CD",
                          "max_AD", "rms_AD"})
        EXPECT_TRUE(e.contains(k)) << k;
    EXPECT_EQ(s.at("edge_kind").at("BC"), "neumann");
    EXPECT_EQ(s.at("form_kind"), "single_neumann");
    EXPECT_TRUE(s.at("failure").is_null());
    EXPECT_LE(e.at("max_AB").get<double>(), 1e-12);
    EXPECT_LE(e.at("max_BC").get<double>(), 1e-11);
}

TEST(Summary, FreeEdgeReportsSolutionError)
{
    json j = small_run("heat-1", {"D", "D", "F", "D"});
    j["problem"] = "heat";
    const SolveRun r = run_solve(parse_config(j));
    ASSERT_FALSE(r.failed);
    EXPECT_EQ(r.metrics.edges[2].kind, "solution");
    EXPECT_GT(r.metrics.edges[2].max, 0.0);
    EXPECT_LE(r.metrics.edges[2].max, r.metrics.e_max);
}

TEST(Summary, RerunIsBitIdentical)
{
    const RunConfig c = parse_config(small_run("helm-1", {"D", "D", "R", "D"}));
    EXPECT_EQ(summary_json(run_solve(c)).dump(), summary_json(run_solve(c)).dump());
}

TEST(Summary, SolutionCsv)
{
    const SolveRun r = run_solve(parse_config(small_run("helm-1", {"D", "D", "D", "D"})));
    const auto path = std::filesystem::temp_directory_path() / "hardbc_solution_test.csv";
    write_solution_csv(path.string(), r);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "xi,eta,x,y,u,u_exact,abs_err");
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 11 * 11);
    std::filesystem::remove(path);
}

TEST(Audit, PassesForUntrainedNets)
{
    json j = small_run("helm-1", {"D", "R", "R", "D"});
    const BCAuditResult a = bc_audit(parse_config(j), 3);
    EXPECT_EQ(a.trials.size(), 3u);
    EXPECT_TRUE(a.pass);
    EXPECT_LE(a.max_residual, 1e-11);
    EXPECT_EQ(audit_json(parse_config(j), a).at("pass"), true);
}

TEST(Convergence, OneRowPerFeatureCount)
{
    const auto rows = convergence(parse_config(small_run("helm-5", {"D", "D", "D", "D"})), {10, 20, 40});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].M, 10);
    EXPECT_EQ(rows[2].M, 40);
    for (const auto& r : rows) EXPECT_TRUE(std::isfinite(r.e_rms));
}

TEST(MapAudit, Nlh2PlainFails)
{
    const RunConfig c = parse_config({{"domain", "nlh-2"}, {"map", "coons"}});
    const json j = map_audit_json(c, univalency_audit(build_map(c), 21));
    EXPECT_EQ(j.at("pass"), false);
}
