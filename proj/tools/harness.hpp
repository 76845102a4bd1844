#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hardbc/lsq.hpp"
#include "hardbc/mapping.hpp"
#include "hardbc/problems.hpp"
#include "hardbc/trial.hpp"

namespace hbc::harness {

struct RunConfig {
    std::string domain_name;        // catalog label, or the custom domain's name
    std::optional<QuadDomain> custom;
    std::string map_kind;           // empty: catalog designation, coons for custom domains
    Vec2 center{0.0, 0.0};
    ProblemKind problem = ProblemKind::Helmholtz;
    Assignment bc{};
    int Q = 35;
    int q_db_per_edge = -1;  // -1: default for the problem and assignment
    int M = 300;
    double R_m = 4.0;
    std::uint64_t seed = 1;
    GaussNewtonOptions solver{};
    std::vector<int> M_list;
    int trials = 20;
    int edge_points = 101;
    int test_grid = 101;
    int map_audit_n = 51;
    int grid_lines = 21;
    double audit_tol = 1e-11;
    bool dump_system = false;
};

// Throws Error(ConfigError) on malformed or out-of-range input.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
ParametricCurve parse_curve(const nlohmann::json& j);

DomainMap build_map(const RunConfig& c);
std::array<BCType, 4> bc_types(const Assignment& a);
std::string bc_label(const Assignment& a);

struct EdgeError {
    std::string kind;  // dirichlet | neumann | robin | solution
    double max = 0.0, rms = 0.0;
};

struct ErrorMetrics {
    double e_max = 0.0, e_rms = 0.0;
    std::array<EdgeError, 4> edges;
};

// Domain errors on an n x n grid over the closed standard square; BC errors on n points per
// constrained edge, solution errors on an unconstrained one.
ErrorMetrics compute_metrics(ProblemKind k, const TrialForm& f, const FreeFunction<double>& g,
                             int n = 101);

struct SolveRun {
    RunConfig config;
    FeatureNet net;
    std::optional<TrialForm> form;
    CollocationSet colloc;
    SolveReport report;
    ErrorMetrics metrics;
    bool failed = false;
    std::string failure;
};

// Solver failures are recorded in the run instead of propagating.
SolveRun run_solve(const RunConfig& c);

nlohmann::json summary_json(const SolveRun& r);
void write_solution_csv(const std::string& path, const SolveRun& r);
void write_system_csv(const std::string& dir, const SolveRun& r);

struct AuditTrial {
    std::uint64_t seed = 0;
    std::array<EdgeResidual, 4> edges{};
};

struct BCAuditResult {
    FormKind form_kind = FormKind::Dirichlet;
    std::array<BCType, 4> types{};
    std::vector<AuditTrial> trials;
    std::array<EdgeResidual, 4> worst{};
    double max_residual = 0.0;
    bool pass = false;
};

// Random nets (seed + t) and random beta in [-1, 1]; nothing is trained.
BCAuditResult bc_audit(const RunConfig& c, int trials);
nlohmann::json audit_json(const RunConfig& c, const BCAuditResult& a);

struct ConvergenceRow {
    int M = 0;
    double e_rms = 0.0, e_max = 0.0;
    double residual_final = 0.0;
    std::string status;
};

std::vector<ConvergenceRow> convergence(const RunConfig& c, const std::vector<int>& Ms);
void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);

nlohmann::json map_audit_json(const RunConfig& c, const AuditReport& a);
void write_gridlines_csv(const std::string& path, const DomainMap& map, int lines, int pts);

}  // namespace hbc::harness
