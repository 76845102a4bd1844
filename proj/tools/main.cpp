#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "harness.hpp"

namespace fs = std::filesystem;
using namespace hbc;
using namespace hbc::harness;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitAudit = 4;

int exit_code(const Error& e)
{
    switch (e.kind()) {
        case ErrorKind::NonFiniteResidual:
        case ErrorKind::MaxIterationsExceeded:
        case ErrorKind::NumericalFailure:
        case ErrorKind::SingularJacobian:
            return kExitSolver;
        default: return kExitConfig;
    }
}

void write_json(const fs::path& p, const nlohmann::json& j)
{
    std::ofstream out(p);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + p.string() + "'");
    out << j.dump(2) << '\n';
}

struct Common {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;

    RunConfig load() const
    {
        RunConfig c = load_config(config);
        if (seed) c.seed = c.solver.seed = *seed;
        if (trials) c.trials = *trials;
        return c;
    }
    fs::path dir() const
    {
        fs::create_directories(out);
        return fs::path(out);
    }
};

void add_common(CLI::App* app, Common& c, bool need_config = true)
{
    auto* opt = app->add_option("--config", c.config, "JSON run configuration");
    if (need_config) opt->required()->check(CLI::ExistingFile);
    app->add_option("--out", c.out, "output directory");
    app->add_option("--seed", c.seed, "override the config seed");
}

int cmd_solve(const Common& o)
{
    const RunConfig c = o.load();
    const SolveRun r = run_solve(c);
    const fs::path dir = o.dir();
    write_json(dir / "summary.json", summary_json(r));
    write_solution_csv((dir / "solution.csv").string(), r);
    if (c.dump_system) write_system_csv(dir.string(), r);
    std::cout << c.domain_name << " " << to_string(c.problem) << " [" << bc_label(c.bc) << "] "
              << to_string(r.form->kind()) << "  e_max=" << r.metrics.e_max
              << " e_rms=" << r.metrics.e_rms << "  status=" << to_string(r.report.status)
              << "  residual " << r.report.residual_initial << " -> " << r.report.residual_final
              << "  (" << r.report.wall_seconds << " s)\n";
    if (r.failed) {
        std::cerr << "solver failure: " << r.failure << '\n';
        return kExitSolver;
    }
    return 0;
}

int cmd_bc_audit(const Common& o)
{
    const RunConfig c = o.load();
    const BCAuditResult a = bc_audit(c, c.trials);
    write_json(o.dir() / "bc_audit.json", audit_json(c, a));
    static const char* names[] = {"AB", "BC", "CD", "AD"};
    for (int e = 0; e < 4; ++e)
        std::cout << names[e] << " " << to_string(a.types[e]) << "  max " << a.worst[e].max
                  << "  rms " << a.worst[e].rms << '\n';
    std::cout << (a.pass ? "pass" : "FAIL") << "  worst " << a.max_residual << " over " << c.trials
              << " trials (tol " << c.audit_tol << ")\n";
    return a.pass ? 0 : kExitAudit;
}

int cmd_map_audit(const Common& o, const std::string& domain, const std::string& map, int n)
{
    RunConfig c;
    if (!o.config.empty()) c = o.load();
    if (!domain.empty()) {
        nlohmann::json j = {{"domain", domain}};
        if (!map.empty()) j["map"] = map;
        c = parse_config(j);
    } else if (!map.empty()) {
        c.map_kind = map;
    }
    if (c.domain_name.empty()) throw Error(ErrorKind::ConfigError, "map-audit needs --domain or --config");
    if (n > 0) c.map_audit_n = n;
    const DomainMap m = build_map(c);
    const AuditReport a = univalency_audit(m, c.map_audit_n);
    const fs::path dir = o.dir();
    write_json(dir / "map_audit.json", map_audit_json(c, a));
    write_gridlines_csv((dir / "gridlines.csv").string(), m, c.grid_lines, 101);
    std::cout << c.domain_name << " " << to_string(m.kind()) << "  min detJ " << a.min_detJ
              << "  (off tangent vertices " << a.min_detJ_off_tangent_vertices << ")  "
              << (a.pass ? "pass" : "FAIL") << '\n';
    return a.pass ? 0 : kExitAudit;
}

int cmd_convergence(const Common& o, std::vector<int> Ms)
{
    const RunConfig c = o.load();
    if (Ms.empty()) Ms = c.M_list.empty() ? std::vector<int>{c.M} : c.M_list;
    const auto rows = convergence(c, Ms);
    write_convergence_csv((o.dir() / "convergence.csv").string(), rows);
    bool failed = false;
    for (const auto& r : rows) {
        std::cout << "M=" << r.M << "  e_rms=" << r.e_rms << "  e_max=" << r.e_max << "  " << r.status << '\n';
        failed = failed || r.status == "failed";
    }
    return failed ? kExitSolver : 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hard boundary-condition trial functions with random-feature least squares"};
    app.require_subcommand(1);

    Common solve_o, audit_o, map_o, conv_o;
    auto* solve = app.add_subcommand("solve", "train and report errors");
    add_common(solve, solve_o);

    auto* audit = app.add_subcommand("bc-audit", "boundary residuals for random untrained nets");
    add_common(audit, audit_o);
    audit->add_option("--trials", audit_o.trials, "number of random nets");

    std::string map_domain, map_kind;
    int map_n = 0;
    auto* mapa = app.add_subcommand("map-audit", "Jacobian sign audit and grid lines");
    add_common(mapa, map_o, false);
    mapa->add_option("--domain", map_domain, "catalog domain");
    mapa->add_option("--map", map_kind, "coons | coons_center");
    mapa->add_option("--n", map_n, "samples per direction");

    std::vector<int> Ms;
    auto* conv = app.add_subcommand("convergence", "repeat the solve over feature counts");
    add_common(conv, conv_o);
    conv->add_option("--M", Ms, "feature counts (overrides M_list)");

    auto* list = app.add_subcommand("list-domains", "catalog names and map kinds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*solve) return cmd_solve(solve_o);
        if (*audit) return cmd_bc_audit(audit_o);
        if (*mapa) return cmd_map_audit(map_o, map_domain, map_kind, map_n);
        if (*conv) return cmd_convergence(conv_o, Ms);
        if (*list) {
            for (const auto& n : catalog_names()) std::cout << n << '\t' << designated_map_kind(n) << '\n';
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
