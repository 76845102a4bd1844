#include "hardbc/problems.hpp"

#include <vector>

#include "hardbc/errors.hpp"

namespace hbc {

ProblemKind parse_problem_kind(const std::string& s)
{
    if (s == "helmholtz") return ProblemKind::Helmholtz;
    if (s == "nonlinear_helmholtz") return ProblemKind::NonlinearHelmholtz;
    if (s == "heat") return ProblemKind::Heat;
    throw Error(ErrorKind::InvalidArgument, "unknown problem kind '" + s + "'");
}

const char* to_string(ProblemKind k)
{
    static const char* names[] = {"helmholtz", "nonlinear_helmholtz", "heat"};
    return names[static_cast<int>(k)];
}

PointSolution exact_solution(ProblemKind k, Vec2 p)
{
    using namespace detail;
    const double x = p[0], y = p[1];
    PointSolution r;
    r.u = exact_value(k, x, y);
    r.grad = exact_gradient(k, x, y);
    switch (k) {
        case ProblemKind::Helmholtz:
            r.uxx = -helm_factor_dd(x) * helm_factor(y);
            r.uxy = -helm_factor_d(x) * helm_factor_d(y);
            r.uyy = -helm_factor(x) * helm_factor_dd(y);
            break;
        case ProblemKind::NonlinearHelmholtz:
            r.uxx = 4.0 * nlh_factor_dd(x) * nlh_factor(y);
            r.uxy = 4.0 * nlh_factor_d(x) * nlh_factor_d(y);
            r.uyy = 4.0 * nlh_factor(x) * nlh_factor_dd(y);
            break;
        case ProblemKind::Heat:
            r.uxx = heat_factor_dd(x) * heat_factor(y);
            r.uxy = heat_factor_d(x) * heat_factor_d(y);
            r.uyy = heat_factor(x) * heat_factor_dd(y);
            break;
    }
    return r;
}

double apply_operator(ProblemKind k, double u, double, double uy, double uxx, double,
                      double uyy)
{
    switch (k) {
        case ProblemKind::Helmholtz: return uxx + uyy - kHelmholtzShift * u;
        case ProblemKind::NonlinearHelmholtz:
            return uxx + uyy - kNonlinearLinear * u + kNonlinearCos * std::cos(2.0 * u);
        case ProblemKind::Heat: return uy - kHeatNu * uxx;
    }
    return 0.0;
}

double source_term(ProblemKind k, Vec2 p)
{
    const PointSolution s = exact_solution(k, p);
    return apply_operator(k, s.u, s.grad[0], s.grad[1], s.uxx, s.uxy, s.uyy);
}

void validate_assignment(const Assignment& a)
{
    std::vector<int> flux, free_edges;
    for (int e = 0; e < 4; ++e) {
        if (a[e].type == BCType::Neumann || a[e].type == BCType::Robin) flux.push_back(e);
        if (a[e].type == BCType::Free) free_edges.push_back(e);
        if (a[e].type == BCType::Robin && !std::isfinite(a[e].alpha))
            throw Error(ErrorKind::UnsupportedAssignment, "Robin coefficient must be finite");
    }
    if (free_edges.size() > 1)
        throw Error(ErrorKind::UnsupportedAssignment, "at most one edge may be left free");
    if (!free_edges.empty() && !flux.empty())
        throw Error(ErrorKind::UnsupportedAssignment,
                    "a free edge cannot be combined with Neumann or Robin edges");
    if (flux.size() > 2)
        throw Error(ErrorKind::UnsupportedAssignment, "at most two Neumann/Robin edges");
    if (flux.size() == 2 && (flux[0] + 2) % 4 == flux[1])
        throw Error(ErrorKind::UnsupportedAssignment,
                    "Neumann/Robin conditions on opposite edges are not supported");
}

EdgeJet normal_derivative(ProblemKind k, const ParametricCurve& c, Edge e, double s)
{
    using T3 = Taylor<1, 3>;
    const Vec<T3> p = c.at(T3::variable(0, s));
    Vec<EdgeJet> x, t;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j <= 2; ++j) {
            x[i].coef_ref(j) = p[i].coef(j);
            t[i].coef_ref(j) = (j + 1) * p[i].coef(j + 1);
        }
    const EdgeJet len = sqrt(t[0] * t[0] + t[1] * t[1]);
    const double sg = (e == Edge::AB || e == Edge::BC) ? 1.0 : -1.0;
    const EdgeJet nx = sg * t[1] / len, ny = -sg * t[0] / len;
    const Vec<EdgeJet> g = exact_gradient(k, x[0], x[1]);
    return nx * g[0] + ny * g[1];
}

BoundarySpec bc_data(ProblemKind k, const DomainMap& map, const Assignment& a)
{
    validate_assignment(a);
    BoundarySpec bc;
    for (int i = 0; i < 4; ++i) {
        const Edge e = static_cast<Edge>(i);
        const ParametricCurve curve = map.domain().edge(e);
        bc[i].type = a[i].type;
        bc[i].alpha = a[i].type == BCType::Robin ? a[i].alpha : 0.0;
        const double alpha = bc[i].alpha;
        switch (a[i].type) {
            case BCType::Dirichlet:
                bc[i].data = [k, curve](double s) {
                    const Vec<EdgeJet> p = curve.at(EdgeJet::variable(0, s));
                    return exact_value(k, p[0], p[1]);
                };
                break;
            case BCType::Neumann:
                bc[i].data = [k, curve, e](double s) { return normal_derivative(k, curve, e, s); };
                break;
            case BCType::Robin:
                bc[i].data = [k, curve, e, alpha](double s) {
                    const Vec<EdgeJet> p = curve.at(EdgeJet::variable(0, s));
                    return normal_derivative(k, curve, e, s) + alpha * exact_value(k, p[0], p[1]);
                };
                break;
            case BCType::Free: break;
        }
    }
    return bc;
}

}  // namespace hbc
