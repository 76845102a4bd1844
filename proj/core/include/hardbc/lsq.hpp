#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "hardbc/errors.hpp"
#include "hardbc/features.hpp"
#include "hardbc/problems.hpp"
#include "hardbc/trial.hpp"

namespace hbc {

struct CollocationSet {
    std::vector<Vec2> interior;
    std::vector<Vec2> boundary;  // g = 0 rows, Dirichlet edges only
    std::string interior_rule = "open_uniform";
};

// Points per Dirichlet edge (vertices excluded) used by default.
int default_q_db_per_edge(ProblemKind k, const std::array<BCType, 4>& types);

// Interior: xi_i = -1 + 2i/(Q+1), i = 1..Q, in both directions.
// Boundary: per_edge uniform interior parameters on every Dirichlet edge plus each vertex
// touching a Dirichlet edge.
CollocationSet collocation_grid(int Q, const std::array<BCType, 4>& types, int per_edge);

enum class RowKind : char { Pde, GZero };

struct LinearSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::vector<RowKind> rows;
};

LinearSystem assemble_linear(ProblemKind k, const TrialForm& f, const FeatureNet& net,
                             const CollocationSet& c);

struct LstsqResult {
    Eigen::VectorXd x;
    int rank = 0;
    Eigen::VectorXd singular_values;
};

// Minimum-norm solution by SVD; singular values below rcond * s_max count as zero.
LstsqResult lstsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double rcond = 1e-12);

struct GaussNewtonOptions {
    double tol = 1e-12;
    double stall_tol = 1e-8;
    double delta = 0.5;
    int max_restarts = 4;
    int max_iter = 50;
    int max_halvings = 10;
    double rcond = 1e-12;
    std::uint64_t seed = 0;
};

enum class SolveStatus { Converged, Stalled, MaxIterations };
const char* to_string(SolveStatus s);

struct SolveReport {
    Eigen::VectorXd beta;
    double residual_initial = 0.0;
    double residual_final = 0.0;
    std::vector<double> history;
    int iterations = 0;
    int restarts = 0;
    SolveStatus status = SolveStatus::Converged;
    double wall_seconds = 0.0;
    int rank = 0;
    int cutoff_count = 0;
    std::string interior_rule;
};

class SolveFailure : public Error {
public:
    SolveFailure(ErrorKind k, const std::string& what, SolveReport r)
        : Error(k, what), report(std::move(r))
    {
    }
    SolveReport report;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Gauss-Newton with step halving and random restarts on stagnation; the best iterate is kept.
// Throws SolveFailure (NonFiniteResidual or MaxIterationsExceeded) carrying the best iterate.
SolveReport gauss_newton(const ResidualFn& r, const JacobianFn& J, Eigen::VectorXd beta0,
                         const GaussNewtonOptions& opts = {});

// Nonlinear collocation residual and Jacobian for a fixed trial form and net.
class NonlinearSystem {
public:
    NonlinearSystem(ProblemKind k, const TrialForm& f, const FeatureNet& net,
                    const CollocationSet& c);
    Eigen::VectorXd residual(const Eigen::VectorXd& beta) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& beta) const;
    Eigen::Index rows() const { return LB_.rows() + G_.rows(); }

private:
    ProblemKind kind_;
    Eigen::MatrixXd LB_, B_, G_;  // linear part on features, feature values, g = 0 rows
    Eigen::VectorXd Lc_, c_, f_;
};

// Linear problems: one least-squares solve. Nonlinear: Gauss-Newton from beta = 0.
SolveReport solve_pde(ProblemKind k, const TrialForm& f, const FeatureNet& net,
                      const CollocationSet& c, const GaussNewtonOptions& opts = {});

}  // namespace hbc
