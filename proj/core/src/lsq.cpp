#include "hardbc/lsq.hpp"

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <limits>

#include "hardbc/rng.hpp"

namespace hbc {

int default_q_db_per_edge(ProblemKind k, const std::array<BCType, 4>& types)
{
    if (k != ProblemKind::Helmholtz) return 1;
    int flux = 0;
    for (BCType t : types) flux += (t == BCType::Neumann || t == BCType::Robin);
    return flux == 0 ? 3 : flux == 1 ? 5 : 10;
}

CollocationSet collocation_grid(int Q, const std::array<BCType, 4>& types, int per_edge)
{
    if (Q < 2) throw Error(ErrorKind::InvalidArgument, "Q must be >= 2");
    if (per_edge < 0) throw Error(ErrorKind::InvalidArgument, "points per edge must be >= 0");
    CollocationSet c;
    c.interior.reserve(static_cast<std::size_t>(Q) * Q);
    for (int j = 1; j <= Q; ++j)
        for (int i = 1; i <= Q; ++i)
            c.interior.push_back({-1.0 + 2.0 * i / (Q + 1), -1.0 + 2.0 * j / (Q + 1)});

    std::array<bool, 4> vertex{};
    static const int ends[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
    for (int e = 0; e < 4; ++e) {
        if (types[e] != BCType::Dirichlet) continue;
        vertex[ends[e][0]] = vertex[ends[e][1]] = true;
        for (int i = 1; i <= per_edge; ++i)
            c.boundary.push_back(edge_point(static_cast<Edge>(e), -1.0 + 2.0 * i / (per_edge + 1)));
    }
    static const Vec2 corners[4] = {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}};
    for (int v = 0; v < 4; ++v)
        if (vertex[v]) c.boundary.push_back(corners[v]);
    return c;
}

namespace {

template <class T>
PhysicalDerivs<T> physical(const JacobianBundle& jb, const Jet2<T>& j)
{
    return physical_derivatives<T>(jb, j[kXi], j[kEta], j[kXiXi], j[kXiEta], j[kEtaEta]);
}

// Linear part of the operator: the whole operator except the cos term of the nonlinear kind.
template <class T>
T linear_part(ProblemKind k, const T& v, const PhysicalDerivs<T>& d)
{
    switch (k) {
        case ProblemKind::Helmholtz: return T(d.xx + d.yy - kHelmholtzShift * v);
        case ProblemKind::NonlinearHelmholtz: return T(d.xx + d.yy - kNonlinearLinear * v);
        case ProblemKind::Heat: return T(d.y - kHeatNu * d.xx);
    }
    return v;
}

struct InteriorRows {
    Eigen::MatrixXd LB, B;
    Eigen::VectorXd Lc, c, f;
};

InteriorRows interior_rows(ProblemKind k, const TrialForm& f, const FeatureNet& net,
                           const std::vector<Vec2>& pts)
{
    const auto aff = f.affine_batch(net, pts);
    const Eigen::Index n = static_cast<Eigen::Index>(pts.size()), M = net.size();
    InteriorRows r{Eigen::MatrixXd(n, M), Eigen::MatrixXd(n, M), Eigen::VectorXd(n),
                   Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2 q = pts[static_cast<std::size_t>(i)];
        const JacobianBundle jb = f.map().jacobian(q[0], q[1]);
        const auto& a = aff[static_cast<std::size_t>(i)];
        r.LB.row(i) = linear_part<Eigen::ArrayXd>(k, a.B[kV], physical(jb, a.B)).matrix().transpose();
        r.B.row(i) = a.B[kV].matrix().transpose();
        r.Lc[i] = linear_part<double>(k, a.c[kV], physical(jb, a.c));
        r.c[i] = a.c[kV];
        r.f[i] = source_term(k, jb.x);
    }
    return r;
}

Eigen::MatrixXd gzero_rows(const FeatureNet& net, const std::vector<Vec2>& pts)
{
    return net.eval(pts, Deriv::V);
}

}  // namespace

LinearSystem assemble_linear(ProblemKind k, const TrialForm& f, const FeatureNet& net,
                             const CollocationSet& c)
{
    if (k == ProblemKind::NonlinearHelmholtz)
        throw Error(ErrorKind::InvalidArgument, "assemble_linear needs a linear problem");
    const InteriorRows in = interior_rows(k, f, net, c.interior);
    const Eigen::MatrixXd G = gzero_rows(net, c.boundary);
    LinearSystem s;
    s.A.resize(in.LB.rows() + G.rows(), net.size());
    s.A << in.LB, G;
    s.b = Eigen::VectorXd::Zero(s.A.rows());
    s.b.head(in.f.size()) = in.f - in.Lc;
    s.rows.assign(static_cast<std::size_t>(in.LB.rows()), RowKind::Pde);
    s.rows.insert(s.rows.end(), static_cast<std::size_t>(G.rows()), RowKind::GZero);
    return s;
}

LstsqResult lstsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double rcond)
{
    if (A.rows() == 0 || A.cols() == 0) throw Error(ErrorKind::InvalidArgument, "empty system");
    if (A.rows() != b.size()) throw Error(ErrorKind::InvalidArgument, "lstsq: size mismatch");
    if (!A.allFinite() || !b.allFinite())
        throw Error(ErrorKind::NumericalFailure, "lstsq: non-finite input");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "SVD did not converge");
    LstsqResult r;
    r.singular_values = svd.singularValues();
    const double cut = r.singular_values.size() ? rcond * r.singular_values[0] : 0.0;
    Eigen::VectorXd y = svd.matrixU().transpose() * b;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (r.singular_values[i] > cut) {
            y[i] /= r.singular_values[i];
            ++r.rank;
        } else {
            y[i] = 0.0;
        }
    }
    r.x = svd.matrixV() * y;
    return r;
}

const char* to_string(SolveStatus s)
{
    static const char* names[] = {"converged", "stalled", "max_iterations"};
    return names[static_cast<int>(s)];
}

SolveReport gauss_newton(const ResidualFn& rf, const JacobianFn& jf, Eigen::VectorXd beta0,
                         const GaussNewtonOptions& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    auto finish = [&](SolveStatus st) {
        rep.status = st;
        rep.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    };

    Eigen::VectorXd beta = std::move(beta0);
    Eigen::VectorXd r = rf(beta);
    double norm = r.norm();
    if (!std::isfinite(norm))
        throw SolveFailure(ErrorKind::NonFiniteResidual, "initial residual", finish(SolveStatus::MaxIterations));
    rep.residual_initial = rep.residual_final = norm;
    rep.beta = beta;
    rep.history.push_back(norm);
    auto gen = make_stream(o.seed, kStreamPerturb);

    while (rep.iterations < o.max_iter) {
        if (norm < o.tol) break;
        ++rep.iterations;
        const LstsqResult step = lstsq(jf(beta), -r, o.rcond);
        rep.rank = step.rank;
        rep.cutoff_count = static_cast<int>(step.singular_values.size()) - step.rank;

        double t = 1.0, trial_norm = std::numeric_limits<double>::infinity();
        Eigen::VectorXd trial, trial_r;
        for (int h = 0; h <= o.max_halvings; ++h, t *= 0.5) {
            trial = beta + t * step.x;
            trial_r = rf(trial);
            trial_norm = trial_r.norm();
            if (std::isfinite(trial_norm) && trial_norm < norm) break;
        }
        const bool improved = std::isfinite(trial_norm) && trial_norm < norm;
        const bool stalled = !improved || (norm - trial_norm) < o.stall_tol * norm;
        if (improved) {
            beta = trial;
            r = trial_r;
            norm = trial_norm;
        }
        rep.history.push_back(norm);
        if (norm < rep.residual_final) {
            rep.residual_final = norm;
            rep.beta = beta;
        }
        if (norm < o.tol) break;
        if (stalled) {
            if (rep.restarts >= o.max_restarts) return finish(SolveStatus::Stalled);
            ++rep.restarts;
            beta = rep.beta;
            for (Eigen::Index i = 0; i < beta.size(); ++i) beta[i] += uniform_sym(gen, o.delta);
            r = rf(beta);
            norm = r.norm();
            if (!std::isfinite(norm))
                throw SolveFailure(ErrorKind::NonFiniteResidual, "residual after perturbation",
                                   finish(SolveStatus::MaxIterations));
        }
    }
    if (rep.residual_final < o.tol) return finish(SolveStatus::Converged);
    throw SolveFailure(ErrorKind::MaxIterationsExceeded,
                       "no convergence in " + std::to_string(o.max_iter) + " iterations",
                       finish(SolveStatus::MaxIterations));
}

NonlinearSystem::NonlinearSystem(ProblemKind k, const TrialForm& f, const FeatureNet& net,
                                 const CollocationSet& c)
    : kind_(k)
{
    InteriorRows in = interior_rows(k, f, net, c.interior);
    LB_ = std::move(in.LB);
    B_ = std::move(in.B);
    Lc_ = std::move(in.Lc);
    c_ = std::move(in.c);
    f_ = std::move(in.f);
    G_ = gzero_rows(net, c.boundary);
}

Eigen::VectorXd NonlinearSystem::residual(const Eigen::VectorXd& beta) const
{
    Eigen::VectorXd r(rows());
    Eigen::VectorXd pde = LB_ * beta + Lc_ - f_;
    if (kind_ == ProblemKind::NonlinearHelmholtz) {
        const Eigen::ArrayXd v = (c_ + B_ * beta).array();
        pde.array() += kNonlinearCos * (2.0 * v).cos();
    }
    r << pde, G_ * beta;
    return r;
}

Eigen::MatrixXd NonlinearSystem::jacobian(const Eigen::VectorXd& beta) const
{
    Eigen::MatrixXd J(rows(), LB_.cols());
    if (kind_ == ProblemKind::NonlinearHelmholtz) {
        const Eigen::ArrayXd v = (c_ + B_ * beta).array();
        const Eigen::VectorXd w = (-2.0 * kNonlinearCos * (2.0 * v).sin()).matrix();
        J << LB_ + w.asDiagonal() * B_, G_;
    } else {
        J << LB_, G_;
    }
    return J;
}

SolveReport solve_pde(ProblemKind k, const TrialForm& f, const FeatureNet& net,
                      const CollocationSet& c, const GaussNewtonOptions& opts)
{
    SolveReport rep;
    if (k == ProblemKind::NonlinearHelmholtz) {
        const NonlinearSystem sys(k, f, net, c);
        try {
            rep = gauss_newton([&](const Eigen::VectorXd& b) { return sys.residual(b); },
                               [&](const Eigen::VectorXd& b) { return sys.jacobian(b); },
                               Eigen::VectorXd::Zero(net.size()), opts);
        } catch (SolveFailure& e) {
            e.report.interior_rule = c.interior_rule;
            throw;
        }
    } else {
        const auto t0 = std::chrono::steady_clock::now();
        const LinearSystem s = assemble_linear(k, f, net, c);
        const LstsqResult x = lstsq(s.A, s.b, opts.rcond);
        rep.beta = x.x;
        rep.residual_initial = s.b.norm();
        rep.residual_final = (s.A * x.x - s.b).norm();
        rep.history = {rep.residual_initial, rep.residual_final};
        rep.iterations = 1;
        rep.rank = x.rank;
        rep.cutoff_count = static_cast<int>(x.singular_values.size()) - x.rank;
        rep.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!std::isfinite(rep.residual_final))
            throw SolveFailure(ErrorKind::NonFiniteResidual, "linear solve", rep);
    }
    rep.interior_rule = c.interior_rule;
    return rep;
}

}  // namespace hbc
