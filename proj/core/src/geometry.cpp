#include "hardbc/geometry.hpp"

#include <cmath>
#include <sstream>

#include "hardbc/errors.hpp"

namespace hbc {

const char* to_string(ErrorKind k)
{
    switch (k) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::CornerMismatch: return "CornerMismatch";
        case ErrorKind::UnknownDomain: return "UnknownDomain";
        case ErrorKind::SingularJacobian: return "SingularJacobian";
        case ErrorKind::IncompatibleCornerData: return "IncompatibleCornerData";
        case ErrorKind::CornerSolveSingular: return "CornerSolveSingular";
        case ErrorKind::NotSupported: return "NotSupported";
        case ErrorKind::UnsupportedAssignment: return "UnsupportedAssignment";
        case ErrorKind::NonFiniteResidual: return "NonFiniteResidual";
        case ErrorKind::MaxIterationsExceeded: return "MaxIterationsExceeded";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Error";
}

const char* to_string(Edge e)
{
    static const char* names[] = {"AB", "BC", "CD", "AD"};
    return names[static_cast<int>(e)];
}

const char* to_string(Vertex v)
{
    static const char* names[] = {"A", "B", "C", "D"};
    return names[static_cast<int>(v)];
}

const char* ParametricCurve::kind_name() const
{
    static const char* names[] = {"line",       "circular_arc", "elliptic_arc",
                                  "polar_trig", "bumped_line",  "time_graph",
                                  "affine_combination"};
    return names[kind_.index()];
}

std::array<Vec2, 4> ParametricCurve::derivatives(double t) const
{
    const auto p = at(Taylor<1, 3>::variable(0, t));
    std::array<Vec2, 4> r{};
    for (int k = 0; k < 4; ++k) r[k] = {p[0].deriv(k), p[1].deriv(k)};
    return r;
}

Vec2 ParametricCurve::eval(double t, int deriv) const
{
    if (deriv < 0 || deriv > 3)
        throw Error(ErrorKind::InvalidArgument, "curve derivative order must be 0..3");
    if (deriv == 0) return at(t);
    return derivatives(t)[deriv];
}

const ParametricCurve& QuadDomain::edge(Edge e) const
{
    switch (e) {
        case Edge::AB: return ab;
        case Edge::BC: return bc;
        case Edge::CD: return cd;
        case Edge::AD: return ad;
    }
    return ab;
}

namespace {

double dist(Vec2 a, Vec2 b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

}  // namespace

QuadDomain make_quad(ParametricCurve ab, ParametricCurve bc, ParametricCurve cd,
                     ParametricCurve ad, std::string name)
{
    QuadDomain q{std::move(ab), std::move(bc), std::move(cd), std::move(ad), {}, std::move(name)};
    struct Pair {
        Vertex v;
        Vec2 p, r;
    };
    const Pair pairs[] = {
        {Vertex::A, q.ab.eval(-1.0), q.ad.eval(-1.0)},
        {Vertex::B, q.ab.eval(1.0), q.bc.eval(-1.0)},
        {Vertex::C, q.bc.eval(1.0), q.cd.eval(1.0)},
        {Vertex::D, q.cd.eval(-1.0), q.ad.eval(1.0)},
    };
    for (const auto& pr : pairs) {
        const double gap = dist(pr.p, pr.r);
        if (!(gap <= kCornerTolerance)) {
            std::ostringstream os;
            os << "vertex " << to_string(pr.v) << " gap " << gap;
            throw Error(ErrorKind::CornerMismatch, os.str());
        }
        q.vertices[static_cast<int>(pr.v)] = pr.p;
    }
    return q;
}

QuadDomain straight_quad(Vec2 a, Vec2 b, Vec2 c, Vec2 d, std::string name)
{
    return make_quad(LineCurve{a, b}, LineCurve{b, c}, LineCurve{d, c}, LineCurve{a, d},
                     std::move(name));
}

namespace {

constexpr double kPi = M_PI;

// Radius 1 - (a/2)(1 + cos(pi t)) expressed through the linear angle.
PolarTrig pinched_arc(double amp, double th0, double th1)
{
    const double k = 2.0 * kPi / (th1 - th0);
    const double phase = -kPi * (th0 + th1) / (th1 - th0);
    return PolarTrig{{0.0, 0.0}, 1.0 - 0.5 * amp, -0.5 * amp, k, phase, th0, th1};
}

QuadDomain helm1()
{
    const Vec2 a{0.25, 0.25}, b{2.5, 0.0}, c{2.0, 2.5}, d{0.0, 1.5};
    return make_quad(BumpedLine{a, b, 0.15, {0.0, 1.0}}, BumpedLine{b, c, 0.15, {-1.0, 0.0}},
                     BumpedLine{d, c, 0.15, {0.0, 1.0}}, BumpedLine{a, d, 0.15, {1.0, 0.0}},
                     "helm-1");
}

QuadDomain helm2()
{
    return make_quad(CircularArc{{2.0, 0.0}, 1.0, -2.0 * kPi / 3.0, -kPi},
                     CircularArc{{2.0, 0.0}, 1.0, kPi, 2.0 * kPi / 3.0},
                     CircularArc{{1.0, 0.0}, 1.0, kPi, kPi / 3.0},
                     CircularArc{{1.0, 0.0}, 1.0, -kPi / 3.0, -kPi}, "helm-2");
}

QuadDomain helm3()
{
    return make_quad(pinched_arc(0.25, -0.75 * kPi, -0.25 * kPi),
                     pinched_arc(0.4, -0.25 * kPi, 0.25 * kPi),
                     pinched_arc(0.3, 0.75 * kPi, 0.25 * kPi),
                     CircularArc{{0.0, 0.0}, 1.0, 1.25 * kPi, 0.75 * kPi}, "helm-3");
}

QuadDomain helm4()
{
    const double t = 5.0 * kPi / 36.0;
    const Vec2 a{0.0, -1.35};
    const Vec2 b{0.95 * std::cos(t), 0.55 + 0.6 * std::sin(t)};
    const Vec2 d{-0.95 * std::cos(t), 0.55 + 0.6 * std::sin(t)};
    return make_quad(LineCurve{a, b}, EllipticArc{{0.0, 0.55}, 0.95, 0.6, t, 0.5 * kPi},
                     EllipticArc{{0.0, 0.55}, 0.95, 0.6, 31.0 * kPi / 36.0, 0.5 * kPi},
                     LineCurve{a, d}, "helm-4");
}

QuadDomain helm5()
{
    return straight_quad({0.0, 0.0}, {2.0, 0.2}, {1.3, 1.0}, {0.6, 1.8}, "helm-5");
}

ParametricCurve reflected_arc(double th_start, double th_end)
{
    const Vec2 start{std::cos(th_start), std::sin(th_start)};
    AffineCombination comb;
    comb.weights = {2.0, -1.0};
    comb.parts = {LineCurve{start, {0.0, -1.0}}, CircularArc{{0.0, 0.0}, 1.0, th_start, th_end}};
    comb.offset = {-0.25, -0.75};
    return comb;
}

QuadDomain nlh1()
{
    const Vec2 o{-0.25, -0.75};
    return make_quad(CircularArc{o, 1.0, 0.5 * kPi, 19.0 * kPi / 20.0}, reflected_arc(19.0 * kPi / 20.0, 1.5 * kPi),
                     reflected_arc(kPi / 20.0, -0.5 * kPi), CircularArc{o, 1.0, 0.5 * kPi, kPi / 20.0},
                     "nlh-1");
}

QuadDomain polar_quad(double a, double b, double k, const double (&th)[4][2], std::string name)
{
    auto edge = [&](int i) { return PolarTrig{{0.0, 0.0}, a, b, k, 0.0, th[i][0], th[i][1]}; };
    return make_quad(edge(0), edge(1), edge(2), edge(3), std::move(name));
}

QuadDomain nlh2()
{
    const double th[4][2] = {{-0.25 * kPi, 0.25 * kPi},
                             {0.25 * kPi, 0.75 * kPi},
                             {1.25 * kPi, 0.75 * kPi},
                             {-0.25 * kPi, -0.75 * kPi}};
    return polar_quad(1.0, 0.6, 2.0, th, "nlh-2");
}

QuadDomain nlh3()
{
    const double th[4][2] = {
        {0.0, 0.5 * kPi}, {0.5 * kPi, kPi}, {1.5 * kPi, kPi}, {0.0, -0.5 * kPi}};
    return polar_quad(0.8, 0.4, 4.0, th, "nlh-3");
}

QuadDomain nlh4()
{
    const double ta = -kPi / 10.0, tb = kPi / 10.0, tc = 13.0 * kPi / 20.0,
                 td = 27.0 * kPi / 20.0;
    const double th[4][2] = {{ta, tb}, {tb, tc}, {td, tc}, {ta, td - 2.0 * kPi}};
    return polar_quad(0.75, 0.3, 3.0, th, "nlh-4");
}

struct HeatWalls {
    double xa, xb, xc, xd, amp_a, amp_b, omega;
};

QuadDomain heat_domain(const HeatWalls& w, std::string name)
{
    const double tf = 3.0;
    return make_quad(LineCurve{{w.xa, 0.0}, {w.xb, 0.0}},
                     TimeGraph{w.xb, w.xc, w.amp_b, w.omega, tf},
                     LineCurve{{w.xd, tf}, {w.xc, tf}},
                     TimeGraph{w.xa, w.xd, w.amp_a, w.omega, tf}, std::move(name));
}

}  // namespace

std::vector<std::string> catalog_names()
{
    return {"helm-1", "helm-2", "helm-3", "helm-4", "helm-5", "nlh-1",
            "nlh-2",  "nlh-3",  "nlh-4",  "heat-1", "heat-2", "heat-3"};
}

std::string designated_map_kind(const std::string& name)
{
    return (name == "nlh-2" || name == "nlh-3") ? "coons_center" : "coons";
}

QuadDomain catalog(const std::string& name)
{
    if (name == "helm-1") return helm1();
    if (name == "helm-2") return helm2();
    if (name == "helm-3") return helm3();
    if (name == "helm-4") return helm4();
    if (name == "helm-5") return helm5();
    if (name == "nlh-1") return nlh1();
    if (name == "nlh-2") return nlh2();
    if (name == "nlh-3") return nlh3();
    if (name == "nlh-4") return nlh4();
    if (name == "heat-1")
        return heat_domain({0.5, 2.0, 1.5, 0.25, -0.25, 0.25, 2.0 * kPi}, name);
    if (name == "heat-2")
        return heat_domain({1.25, 1.75, 0.75, 0.25, 0.15, 0.15, 4.0 * kPi}, name);
    if (name == "heat-3")
        return heat_domain({1.25, 1.75, 0.75, 0.25, 0.15, 0.15, 2.0 * kPi}, name);
    throw Error(ErrorKind::UnknownDomain, name);
}

}  // namespace hbc
