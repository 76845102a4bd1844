#pragma once

#include <array>
#include <cmath>
#include <string>

#include "hardbc/mapping.hpp"
#include "hardbc/trial.hpp"

namespace hbc {

enum class ProblemKind { Helmholtz, NonlinearHelmholtz, Heat };

ProblemKind parse_problem_kind(const std::string& s);
const char* to_string(ProblemKind k);

inline constexpr double kHelmholtzShift = 100.0;
inline constexpr double kNonlinearLinear = 20.0;
inline constexpr double kNonlinearCos = 10.0;
inline constexpr double kHeatNu = 0.005;

namespace detail {

template <class S>
S helm_factor(const S& s)
{
    using std::cos;
    return 2.0 * cos(1.5 * M_PI * s + 0.4 * M_PI) + 1.5 * cos(3.0 * M_PI * s - 0.2 * M_PI);
}
template <class S>
S helm_factor_d(const S& s)
{
    using std::sin;
    return -3.0 * M_PI * sin(1.5 * M_PI * s + 0.4 * M_PI) -
           4.5 * M_PI * sin(3.0 * M_PI * s - 0.2 * M_PI);
}
inline double helm_factor_dd(double s)
{
    const double p2 = M_PI * M_PI;
    return -4.5 * p2 * std::cos(1.5 * M_PI * s + 0.4 * M_PI) -
           13.5 * p2 * std::cos(3.0 * M_PI * s - 0.2 * M_PI);
}

template <class S>
S nlh_factor(const S& s)
{
    using std::cos;
    const S d = s - 0.75;
    return cos(0.5 * M_PI * (d * d));
}
template <class S>
S nlh_factor_d(const S& s)
{
    using std::sin;
    const S d = s - 0.75;
    return -M_PI * d * sin(0.5 * M_PI * (d * d));
}
inline double nlh_factor_dd(double s)
{
    const double d = s - 0.75, a = 0.5 * M_PI * d * d;
    return -M_PI * std::sin(a) - M_PI * M_PI * d * d * std::cos(a);
}

template <class S>
S heat_factor(const S& s)
{
    using std::cos;
    return 2.0 * cos(0.75 * M_PI * s + 0.42 * M_PI) + 1.5 * cos(1.5 * M_PI * s - 0.22 * M_PI);
}
template <class S>
S heat_factor_d(const S& s)
{
    using std::sin;
    return -1.5 * M_PI * sin(0.75 * M_PI * s + 0.42 * M_PI) -
           2.25 * M_PI * sin(1.5 * M_PI * s - 0.22 * M_PI);
}
inline double heat_factor_dd(double s)
{
    const double p2 = M_PI * M_PI;
    return -1.125 * p2 * std::cos(0.75 * M_PI * s + 0.42 * M_PI) -
           3.375 * p2 * std::cos(1.5 * M_PI * s - 0.22 * M_PI);
}

}  // namespace detail

// Manufactured solution. For the heat problem the second coordinate is time.
template <class S>
S exact_value(ProblemKind k, const S& x, const S& y)
{
    using namespace detail;
    switch (k) {
        case ProblemKind::Helmholtz: return -1.0 * (helm_factor(x) * helm_factor(y));
        case ProblemKind::NonlinearHelmholtz: return 4.0 * (nlh_factor(x) * nlh_factor(y));
        case ProblemKind::Heat: return heat_factor(x) * heat_factor(y);
    }
    return S(0.0);
}

template <class S>
Vec<S> exact_gradient(ProblemKind k, const S& x, const S& y)
{
    using namespace detail;
    switch (k) {
        case ProblemKind::Helmholtz:
            return {-1.0 * (helm_factor_d(x) * helm_factor(y)),
                    -1.0 * (helm_factor(x) * helm_factor_d(y))};
        case ProblemKind::NonlinearHelmholtz:
            return {4.0 * (nlh_factor_d(x) * nlh_factor(y)), 4.0 * (nlh_factor(x) * nlh_factor_d(y))};
        case ProblemKind::Heat:
            return {heat_factor_d(x) * heat_factor(y), heat_factor(x) * heat_factor_d(y)};
    }
    return {S(0.0), S(0.0)};
}

struct PointSolution {
    double u = 0.0;
    Vec2 grad{};
    double uxx = 0.0, uxy = 0.0, uyy = 0.0;
};

PointSolution exact_solution(ProblemKind k, Vec2 p);

// PDE left-hand side applied to a field given its value and physical derivatives.
// Helmholtz: uxx + uyy - 100 u.  Nonlinear: uxx + uyy - 20 u + 10 cos(2u).  Heat: u_t - nu u_xx.
double apply_operator(ProblemKind k, double u, double ux, double uy, double uxx, double uxy,
                      double uyy);
double source_term(ProblemKind k, Vec2 p);

struct EdgeAssignment {
    BCType type = BCType::Dirichlet;
    double alpha = 0.0;
};
using Assignment = std::array<EdgeAssignment, 4>;

// Throws UnsupportedAssignment for combinations no trial form covers.
void validate_assignment(const Assignment& a);

// Data generated from the manufactured solution along the map's edges.
BoundarySpec bc_data(ProblemKind k, const DomainMap& map, const Assignment& a);

// Outward n.grad u along an edge as a jet in the edge parameter.
EdgeJet normal_derivative(ProblemKind k, const ParametricCurve& c, Edge e, double s);

}  // namespace hbc
