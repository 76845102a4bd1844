#include "harness.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hardbc/rng.hpp"

namespace hbc::harness {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what)
{
    throw Error(ErrorKind::ConfigError, what);
}

Vec2 vec2(const json& j, const char* key)
{
    if (!j.contains(key)) config_error(std::string("curve field '") + key + "' missing");
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2) config_error(std::string("'") + key + "' must be [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

double num(const json& j, const char* key, double fallback)
{
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) config_error(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

double req(const json& j, const char* key)
{
    if (!j.contains(key)) config_error(std::string("curve field '") + key + "' missing");
    return num(j, key, 0.0);
}

int positive_int(const json& j, const char* key, int fallback)
{
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer() || j.at(key).get<long long>() <= 0)
        config_error(std::string("'") + key + "' must be a positive integer");
    return j.at(key).get<int>();
}

EdgeAssignment parse_edge(const json& j)
{
    EdgeAssignment e;
    std::string t;
    if (j.is_string()) {
        t = j.get<std::string>();
    } else if (j.is_object() && j.contains("type") && j.at("type").is_string()) {
        t = j.at("type").get<std::string>();
        e.alpha = num(j, "alpha", 0.0);
    } else {
        config_error("bc entries are strings or {\"type\": ..., \"alpha\": ...}");
    }
    if (t == "dirichlet" || t == "D") e.type = BCType::Dirichlet;
    else if (t == "neumann" || t == "N") e.type = BCType::Neumann;
    else if (t == "robin" || t == "R") e.type = BCType::Robin;
    else if (t == "free" || t == "F" || t == "none") e.type = BCType::Free;
    else config_error("unknown boundary type '" + t + "'");
    if (e.type == BCType::Robin && !j.is_object()) e.alpha = 1.0;
    if (e.type != BCType::Robin) e.alpha = 0.0;
    return e;
}

constexpr const char* kEdgeNames[] = {"AB", "BC", "CD", "AD"};

}  // namespace

ParametricCurve parse_curve(const json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        config_error("curve must be an object with a 'kind'");
    const std::string k = j.at("kind").get<std::string>();
    ParametricCurve c;
    if (k == "line") {
        c = LineCurve{vec2(j, "p0"), vec2(j, "p1")};
    } else if (k == "circular_arc") {
        c = CircularArc{vec2(j, "center"), req(j, "radius"), req(j, "theta0"), req(j, "theta1")};
    } else if (k == "elliptic_arc") {
        c = EllipticArc{vec2(j, "center"), req(j, "ax"), req(j, "ay"), req(j, "theta0"),
                        req(j, "theta1")};
    } else if (k == "polar_trig") {
        c = PolarTrig{vec2(j, "center"), req(j, "a"), num(j, "b", 0.0), num(j, "k", 0.0),
                      num(j, "phase", 0.0), req(j, "theta0"), req(j, "theta1")};
    } else if (k == "bumped_line") {
        BumpedLine b{vec2(j, "p0"), vec2(j, "p1"), req(j, "c")};
        if (j.contains("dir")) b.dir = vec2(j, "dir");
        c = b;
    } else if (k == "time_graph") {
        c = TimeGraph{req(j, "x0"), req(j, "x1"), num(j, "amp", 0.0), num(j, "omega", 0.0),
                      num(j, "t_final", 1.0)};
    } else if (k == "affine_combination") {
        AffineCombination a;
        if (!j.contains("parts") || !j.contains("weights")) config_error("affine_combination needs parts and weights");
        for (const json& p : j.at("parts")) a.parts.push_back(parse_curve(p));
        a.weights = j.at("weights").get<std::vector<double>>();
        if (a.weights.size() != a.parts.size()) config_error("affine_combination: weights/parts size mismatch");
        if (j.contains("offset")) a.offset = vec2(j, "offset");
        c = std::move(a);
    } else {
        config_error("unknown curve kind '" + k + "'");
    }
    if (j.value("reversed", false)) c = c.reversed();
    return c;
}

RunConfig parse_config(const json& j)
{
    if (!j.is_object()) config_error("config must be a JSON object");
    RunConfig c;
    try {
        if (!j.contains("domain")) config_error("'domain' is required");
        const json& d = j.at("domain");
        if (d.is_string()) {
            c.domain_name = d.get<std::string>();
            try {
                (void)catalog(c.domain_name);
            } catch (const Error& e) {
                config_error(e.what());
            }
        } else if (d.is_object()) {
            c.domain_name = d.value("name", std::string("custom"));
            if (!d.contains("edges")) config_error("custom domain needs 'edges'");
            const json& e = d.at("edges");
            for (const char* key : {"ab", "bc", "cd", "ad"})
                if (!e.contains(key)) config_error(std::string("custom domain missing edge '") + key + "'");
            try {
                c.custom = make_quad(parse_curve(e.at("ab")), parse_curve(e.at("bc")),
                                     parse_curve(e.at("cd")), parse_curve(e.at("ad")), c.domain_name);
            } catch (const Error& err) {
                if (err.kind() == ErrorKind::ConfigError) throw;
                config_error(err.what());
            }
        } else {
            config_error("'domain' must be a catalog name or a custom domain object");
        }

        c.map_kind = j.value("map", std::string());
        if (!c.map_kind.empty() && c.map_kind != "coons" && c.map_kind != "coons_center")
            config_error("unknown map kind '" + c.map_kind + "'");
        if (j.contains("center")) c.center = vec2(j, "center");

        const std::string pk = j.value("problem", std::string("helmholtz"));
        try {
            c.problem = parse_problem_kind(pk);
        } catch (const Error& e) {
            config_error(e.what());
        }

        if (j.contains("bc")) {
            const json& b = j.at("bc");
            if (b.is_array()) {
                if (b.size() != 4) config_error("'bc' needs four entries (AB, BC, CD, AD)");
                for (int i = 0; i < 4; ++i) c.bc[i] = parse_edge(b[i]);
            } else if (b.is_object()) {
                for (int i = 0; i < 4; ++i)
                    if (b.contains(kEdgeNames[i])) c.bc[i] = parse_edge(b.at(kEdgeNames[i]));
            } else {
                config_error("'bc' must be an array or an object keyed by edge");
            }
        }
        try {
            validate_assignment(c.bc);
        } catch (const Error& e) {
            config_error(e.what());
        }

        c.Q = positive_int(j, "Q", c.Q);
        if (c.Q < 2) config_error("'Q' must be at least 2");
        if (j.contains("q_db_per_edge")) c.q_db_per_edge = positive_int(j, "q_db_per_edge", 1);
        c.M = positive_int(j, "M", c.M);
        c.R_m = num(j, "R_m", c.R_m);
        if (!(c.R_m > 0.0)) config_error("'R_m' must be positive");
        if (j.contains("seed")) {
            const json& sd = j.at("seed");
            if (!sd.is_number_integer() || (!sd.is_number_unsigned() && sd.get<std::int64_t>() < 0))
                config_error("'seed' must be a non-negative integer");
            c.seed = j.at("seed").get<std::uint64_t>();
        }
        c.solver.seed = c.seed;
        if (j.contains("solver")) {
            const json& s = j.at("solver");
            if (!s.is_object()) config_error("'solver' must be an object");
            c.solver.tol = num(s, "tol", c.solver.tol);
            c.solver.stall_tol = num(s, "stall_tol", c.solver.stall_tol);
            c.solver.delta = num(s, "delta", c.solver.delta);
            c.solver.rcond = num(s, "rcond", c.solver.rcond);
            c.solver.max_restarts = s.value("max_restarts", c.solver.max_restarts);
            c.solver.max_iter = positive_int(s, "max_iter", c.solver.max_iter);
            c.solver.max_halvings = s.value("max_halvings", c.solver.max_halvings);
            if (c.solver.max_restarts < 0 || c.solver.max_halvings < 0)
                config_error("solver restart/halving counts must be non-negative");
            if (!(c.solver.rcond > 0.0) || !(c.solver.tol >= 0.0) || !(c.solver.delta >= 0.0))
                config_error("solver tolerances must be positive");
        }
        if (j.contains("M_list")) {
            c.M_list = j.at("M_list").get<std::vector<int>>();
            for (int m : c.M_list)
                if (m <= 0) config_error("'M_list' entries must be positive");
        }
        c.trials = positive_int(j, "trials", c.trials);
        c.edge_points = positive_int(j, "edge_points", c.edge_points);
        c.test_grid = positive_int(j, "test_grid", c.test_grid);
        c.map_audit_n = positive_int(j, "map_audit_n", c.map_audit_n);
        c.grid_lines = positive_int(j, "grid_lines", c.grid_lines);
        if (c.edge_points < 2 || c.test_grid < 2 || c.map_audit_n < 2)
            config_error("sample counts must be at least 2");
        c.audit_tol = num(j, "audit_tol", c.audit_tol);
        c.dump_system = j.value("dump_system", false);
    } catch (const json::exception& e) {
        config_error(e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) config_error("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        config_error(e.what());
    }
    return parse_config(j);
}

DomainMap build_map(const RunConfig& c)
{
    if (c.custom) return DomainMap(*c.custom, parse_map_kind(c.map_kind.empty() ? "coons" : c.map_kind), c.center);
    const std::string mk = c.map_kind.empty() ? designated_map_kind(c.domain_name) : c.map_kind;
    return DomainMap(catalog(c.domain_name), parse_map_kind(mk), c.center);
}

std::array<BCType, 4> bc_types(const Assignment& a)
{
    std::array<BCType, 4> t{};
    for (int i = 0; i < 4; ++i) t[i] = a[i].type;
    return t;
}

std::string bc_label(const Assignment& a)
{
    std::string s;
    for (int i = 0; i < 4; ++i) {
        if (i) s += ",";
        s += std::string(kEdgeNames[i]) + "=" + to_string(a[i].type);
        if (a[i].type == BCType::Robin) {
            std::ostringstream os;
            os << a[i].alpha;
            s += "(" + os.str() + ")";
        }
    }
    return s;
}

ErrorMetrics compute_metrics(ProblemKind k, const TrialForm& f, const FreeFunction<double>& g,
                             int n)
{
    ErrorMetrics m;
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) pts.push_back({-1.0 + 2.0 * i / (n - 1), -1.0 + 2.0 * j / (n - 1)});
    const auto V = f.eval_batch(g, pts);
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2 x = f.map().point(pts[i][0], pts[i][1]);
        const double e = std::abs(V[i][kV] - exact_value(k, x[0], x[1]));
        m.e_max = std::max(m.e_max, e);
        sum += e * e;
    }
    m.e_rms = std::sqrt(sum / static_cast<double>(pts.size()));

    const auto res = boundary_residuals(f, g, n);
    for (int e = 0; e < 4; ++e) {
        const BCType t = f.boundary()[e].type;
        if (t != BCType::Free) {
            m.edges[e] = {to_string(t), res[e].max, res[e].rms};
            continue;
        }
        double mx = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vec2 q = edge_point(static_cast<Edge>(e), -1.0 + 2.0 * i / (n - 1));
            const Vec2 x = f.map().point(q[0], q[1]);
            const double err = std::abs(f.eval(g, q[0], q[1])[kV] - exact_value(k, x[0], x[1]));
            mx = std::max(mx, err);
            s2 += err * err;
        }
        m.edges[e] = {"solution", mx, std::sqrt(s2 / n)};
    }
    return m;
}

SolveRun run_solve(const RunConfig& c)
{
    SolveRun r;
    r.config = c;
    const DomainMap map = build_map(c);
    r.form.emplace(map, bc_data(c.problem, map, c.bc));
    r.net = FeatureNet::init(c.M, c.R_m, c.seed);
    const auto types = bc_types(c.bc);
    const int per_edge = c.q_db_per_edge > 0 ? c.q_db_per_edge : default_q_db_per_edge(c.problem, types);
    r.colloc = collocation_grid(c.Q, types, per_edge);
    GaussNewtonOptions opts = c.solver;
    opts.seed = c.seed;
    try {
        r.report = solve_pde(c.problem, *r.form, r.net, r.colloc, opts);
    } catch (const SolveFailure& e) {
        r.report = e.report;
        r.failed = true;
        r.failure = e.what();
    }
    if (r.report.beta.size() != r.net.size()) r.report.beta = Eigen::VectorXd::Zero(r.net.size());
    if (r.report.beta.allFinite()) {
        const NetFunction g(r.net, r.report.beta);
        r.metrics = compute_metrics(c.problem, *r.form, g, c.test_grid);
    }
    return r;
}

json summary_json(const SolveRun& r)
{
    const RunConfig& c = r.config;
    json j;
    j["domain"] = c.domain_name;
    j["map"] = to_string(r.form->map().kind());
    j["problem"] = to_string(c.problem);
    j["bc"] = json::array();
    j["alpha"] = json::array();
    for (const auto& e : c.bc) {
        j["bc"].push_back(to_string(e.type));
        j["alpha"].push_back(e.alpha);
    }
    j["form_kind"] = to_string(r.form->kind());
    j["rotation"] = r.form->rotation();
    j["Q"] = c.Q;
    j["Q_db"] = r.colloc.boundary.size();
    j["M"] = c.M;
    j["R_m"] = c.R_m;
    j["seed"] = c.seed;
    j["solver"] = {
        {"status", to_string(r.report.status)},
        {"residual_initial", r.report.residual_initial},
        {"residual_final", r.report.residual_final},
        {"iterations", r.report.iterations},
        {"restarts", r.report.restarts},
        {"rank", r.report.rank},
        {"cutoff_count", r.report.cutoff_count},
        {"interior_rule", r.report.interior_rule},
        {"history", r.report.history},
    };
    json err;
    err["e_max_domain"] = r.metrics.e_max;
    err["e_rms_domain"] = r.metrics.e_rms;
    json kinds;
    for (int e = 0; e < 4; ++e) {
        err[std::string("max_") + kEdgeNames[e]] = r.metrics.edges[e].max;
        err[std::string("rms_") + kEdgeNames[e]] = r.metrics.edges[e].rms;
        kinds[kEdgeNames[e]] = r.metrics.edges[e].kind;
    }
    j["errors"] = err;
    j["edge_kind"] = kinds;
    j["failure"] = r.failed ? json(r.failure) : json(nullptr);
    return j;
}

void write_solution_csv(const std::string& path, const SolveRun& r)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out << std::setprecision(17);
    out << "xi,eta,x,y,u,u_exact,abs_err\n";
    const int n = r.config.test_grid;
    const NetFunction g(r.net, r.report.beta);
    std::vector<Vec2> pts;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) pts.push_back({-1.0 + 2.0 * i / (n - 1), -1.0 + 2.0 * j / (n - 1)});
    const auto V = r.form->eval_batch(g, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2 x = r.form->map().point(pts[i][0], pts[i][1]);
        const double ue = exact_value(r.config.problem, x[0], x[1]);
        out << pts[i][0] << ',' << pts[i][1] << ',' << x[0] << ',' << x[1] << ',' << V[i][kV]
            << ',' << ue << ',' << std::abs(V[i][kV] - ue) << '\n';
    }
}

void write_system_csv(const std::string& dir, const SolveRun& r)
{
    if (r.config.problem == ProblemKind::NonlinearHelmholtz) return;
    const LinearSystem s = assemble_linear(r.config.problem, *r.form, r.net, r.colloc);
    std::ofstream a(dir + "/system_A.csv"), b(dir + "/system_b.csv");
    a << std::setprecision(17);
    b << std::setprecision(17);
    for (Eigen::Index j = 0; j < s.A.cols(); ++j) a << (j ? "," : "") << "c" << j;
    a << '\n';
    b << "b,row_kind\n";
    for (Eigen::Index i = 0; i < s.A.rows(); ++i) {
        for (Eigen::Index j = 0; j < s.A.cols(); ++j) a << (j ? "," : "") << s.A(i, j);
        a << '\n';
        b << s.b[i] << ',' << (s.rows[i] == RowKind::Pde ? "pde" : "g_zero") << '\n';
    }
}

BCAuditResult bc_audit(const RunConfig& c, int trials)
{
    const DomainMap map = build_map(c);
    const TrialForm form(map, bc_data(c.problem, map, c.bc));
    BCAuditResult a;
    a.form_kind = form.kind();
    a.types = bc_types(c.bc);
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(t);
        const FeatureNet net = FeatureNet::init(c.M, c.R_m, seed);
        auto gen = make_stream(seed, kStreamAudit);
        Eigen::VectorXd beta(net.size());
        for (Eigen::Index i = 0; i < beta.size(); ++i) beta[i] = uniform_sym(gen, 1.0);
        const NetFunction g(net, beta);
        AuditTrial tr{seed, boundary_residuals(form, g, c.edge_points)};
        for (int e = 0; e < 4; ++e) {
            a.worst[e].max = std::max(a.worst[e].max, tr.edges[e].max);
            a.worst[e].rms = std::max(a.worst[e].rms, tr.edges[e].rms);
            a.max_residual = std::max(a.max_residual, tr.edges[e].max);
        }
        a.trials.push_back(tr);
    }
    a.pass = a.max_residual <= c.audit_tol;
    return a;
}

json audit_json(const RunConfig& c, const BCAuditResult& a)
{
    json j;
    j["domain"] = c.domain_name;
    j["problem"] = to_string(c.problem);
    j["form_kind"] = to_string(a.form_kind);
    j["M"] = c.M;
    j["R_m"] = c.R_m;
    j["tolerance"] = c.audit_tol;
    j["max_residual"] = a.max_residual;
    j["pass"] = a.pass;
    json worst, trials = json::array();
    for (int e = 0; e < 4; ++e)
        worst[kEdgeNames[e]] = {{"type", to_string(a.types[e])},
                                {"max", a.worst[e].max},
                                {"rms", a.worst[e].rms}};
    j["worst"] = worst;
    for (const AuditTrial& t : a.trials) {
        json row;
        row["seed"] = t.seed;
        for (int e = 0; e < 4; ++e) row[kEdgeNames[e]] = {{"max", t.edges[e].max}, {"rms", t.edges[e].rms}};
        trials.push_back(row);
    }
    j["trials"] = trials;
    return j;
}

std::vector<ConvergenceRow> convergence(const RunConfig& c, const std::vector<int>& Ms)
{
    std::vector<ConvergenceRow> rows;
    for (int M : Ms) {
        RunConfig rc = c;
        rc.M = M;
        const SolveRun r = run_solve(rc);
        rows.push_back({M, r.metrics.e_rms, r.metrics.e_max, r.report.residual_final,
                        r.failed ? std::string("failed") : std::string(to_string(r.report.status))});
    }
    return rows;
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out << std::setprecision(17) << "M,e_rms,e_max,residual_final,status\n";
    for (const auto& r : rows)
        out << r.M << ',' << r.e_rms << ',' << r.e_max << ',' << r.residual_final << ',' << r.status << '\n';
}

json map_audit_json(const RunConfig& c, const AuditReport& a)
{
    json j;
    j["domain"] = c.domain_name;
    j["map"] = c.map_kind.empty() ? (c.custom ? std::string("coons") : designated_map_kind(c.domain_name))
                                  : c.map_kind;
    j["n"] = a.n;
    j["min_detJ"] = a.min_detJ;
    j["max_detJ"] = a.max_detJ;
    j["min_detJ_off_tangent_vertices"] = a.min_detJ_off_tangent_vertices;
    j["nonpositive_count"] = a.nonpositive_count;
    j["sign_changes"] = a.sign_changes;
    j["tangent_vertices"] = json::array();
    for (Vertex v : a.tangent_vertices) j["tangent_vertices"].push_back(to_string(v));
    j["pass"] = a.pass;
    return j;
}

void write_gridlines_csv(const std::string& path, const DomainMap& map, int lines, int pts)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out << std::setprecision(17) << "family,line,xi,eta,x,y\n";
    for (const GridLinePoint& p : grid_lines(map, lines, pts))
        out << p.family << ',' << p.line << ',' << p.xi << ',' << p.eta << ',' << p.x << ',' << p.y << '\n';
}

}  // namespace hbc::harness
