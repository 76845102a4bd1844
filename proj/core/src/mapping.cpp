#include "hardbc/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hbc {

MapKind parse_map_kind(const std::string& s)
{
    if (s == "coons") return MapKind::Coons;
    if (s == "coons_center") return MapKind::CoonsCenter;
    throw Error(ErrorKind::InvalidArgument, "unknown map kind '" + s + "'");
}

const char* to_string(MapKind k) { return k == MapKind::Coons ? "coons" : "coons_center"; }

std::array<double, 3> lagrange3(double s, int deriv)
{
    switch (deriv) {
        case 0: return {0.5 * s * (s - 1.0), (1.0 + s) * (1.0 - s), 0.5 * s * (s + 1.0)};
        case 1: return {s - 0.5, -2.0 * s, s + 0.5};
        case 2: return {1.0, -2.0, 1.0};
        case 3: return {0.0, 0.0, 0.0};
        default: throw Error(ErrorKind::InvalidArgument, "lagrange3 derivative order must be 0..3");
    }
}

DomainMap::DomainMap(QuadDomain domain, MapKind kind, Vec2 center)
    : domain_(std::move(domain)), kind_(kind), center_(center)
{
}

JacobianBundle DomainMap::jacobian(double xi, double eta) const
{
    using T2 = Taylor<2, 2>;
    const auto p = at(T2::variable(0, xi), T2::variable(1, eta));
    JacobianBundle jb;
    for (int c = 0; c < 2; ++c) {
        jb.x[c] = p[c].value();
        jb.J(c, 0) = p[c].deriv(1, 0);
        jb.J(c, 1) = p[c].deriv(0, 1);
        jb.dJdxi(c, 0) = p[c].deriv(2, 0);
        jb.dJdxi(c, 1) = p[c].deriv(1, 1);
        jb.dJdeta(c, 0) = p[c].deriv(1, 1);
        jb.dJdeta(c, 1) = p[c].deriv(0, 2);
    }
    jb.detJ = jb.J(0, 0) * jb.J(1, 1) - jb.J(0, 1) * jb.J(1, 0);
    if (std::abs(jb.detJ) > kSingularDet) {
        jb.Jinv << jb.J(1, 1), -jb.J(0, 1), -jb.J(1, 0), jb.J(0, 0);
        jb.Jinv /= jb.detJ;
    } else {
        jb.Jinv.setConstant(std::numeric_limits<double>::quiet_NaN());
    }
    return jb;
}

QuadDomain rotate_quad(const QuadDomain& d, int k)
{
    k = ((k % 4) + 4) % 4;
    if (k == 0) return d;
    const ParametricCurve ccw[4] = {d.ab, d.bc, d.cd.reversed(), d.ad.reversed()};
    QuadDomain r;
    r.ab = ccw[k % 4];
    r.bc = ccw[(k + 1) % 4];
    r.cd = ccw[(k + 2) % 4].reversed();
    r.ad = ccw[(k + 3) % 4].reversed();
    for (int i = 0; i < 4; ++i) r.vertices[i] = d.vertices[(i + k) % 4];
    r.name = d.name;
    return r;
}

DomainMap DomainMap::rotated(int k) const
{
    return DomainMap(rotate_quad(domain_, k), kind_, center_);
}

Vec2 edge_point(Edge e, double s)
{
    switch (e) {
        case Edge::AB: return {s, -1.0};
        case Edge::BC: return {1.0, s};
        case Edge::CD: return {s, 1.0};
        case Edge::AD: return {-1.0, s};
    }
    return {0.0, 0.0};
}

int edge_tangent_axis(Edge e) { return (e == Edge::AB || e == Edge::CD) ? 0 : 1; }

EdgeMetricJets edge_metric_jets(const DomainMap& map, Edge e, double s)
{
    using T3 = Taylor<2, 3>;
    const Vec2 p = edge_point(e, s);
    const auto X = map.at(T3::variable(0, p[0]), T3::variable(1, p[1]));
    const int axis = edge_tangent_axis(e);

    // x_xi and x_eta restricted to the edge, as jets in the edge parameter.
    std::array<EdgeJet, 2> xxi, xeta;
    for (int c = 0; c < 2; ++c) {
        for (int j = 0; j <= 2; ++j) {
            if (axis == 1) {
                xxi[c].coef_ref(j) = X[c].coef(1, j);
                xeta[c].coef_ref(j) = (j + 1) * X[c].coef(0, j + 1);
            } else {
                xxi[c].coef_ref(j) = (j + 1) * X[c].coef(j + 1, 0);
                xeta[c].coef_ref(j) = X[c].coef(j, 1);
            }
        }
    }

    EdgeMetricJets m;
    m.edge = e;
    m.detJ = xxi[0] * xeta[1] - xxi[1] * xeta[0];
    if (!(std::abs(m.detJ.value()) > kSingularDet)) {
        std::ostringstream os;
        os << "edge " << to_string(e) << " at s=" << s << ", detJ=" << m.detJ.value();
        throw Error(ErrorKind::SingularJacobian, os.str());
    }
    const auto& t = axis == 1 ? xeta : xxi;
    const EdgeJet len = sqrt(t[0] * t[0] + t[1] * t[1]);
    m.tau = {t[0] / len, t[1] / len};
    if (e == Edge::AB || e == Edge::BC)
        m.n = {m.tau[1], -m.tau[0]};
    else
        m.n = {-m.tau[1], m.tau[0]};
    const EdgeJet inv_det = 1.0 / m.detJ;
    m.K[0] = (xeta[1] * m.n[0] - xeta[0] * m.n[1]) * inv_det;
    m.K[1] = (xxi[0] * m.n[1] - xxi[1] * m.n[0]) * inv_det;
    const int normal = axis == 1 ? 0 : 1;
    m.S = m.K[1 - normal] / m.K[normal];
    m.W = 1.0 / m.K[normal];
    return m;
}

EdgeMetrics edge_metrics(const DomainMap& map, Edge e, double s)
{
    const EdgeMetricJets j = edge_metric_jets(map, e, s);
    EdgeMetrics m;
    m.edge = e;
    m.s = s;
    m.K = {j.K[0].value(), j.K[1].value()};
    m.n = {j.n[0].value(), j.n[1].value()};
    m.tau = {j.tau[0].value(), j.tau[1].value()};
    m.S = j.S.value();
    m.W = j.W.value();
    m.detJ = j.detJ.value();
    m.dS = j.S.deriv(1);
    m.dW = j.W.deriv(1);
    if (e == Edge::AB || e == Edge::BC)
        m.sigma = {{{0, 1}, {-1, 0}}};
    else
        m.sigma = {{{0, -1}, {1, 0}}};
    return m;
}

double corner_tangent_dot(const DomainMap& map, Vertex v)
{
    static const Vec2 pts[4] = {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}};
    const Vec2 p = pts[static_cast<int>(v)];
    const JacobianBundle jb = map.jacobian(p[0], p[1]);
    const double na = jb.J.col(0).norm(), nb = jb.J.col(1).norm();
    if (!(na > kSingularDet && nb > kSingularDet))
        throw Error(ErrorKind::SingularJacobian,
                    std::string("corner ") + to_string(v) + " has a degenerate edge tangent");
    return std::abs(jb.J.col(0).dot(jb.J.col(1))) / (na * nb);
}

int corner_flag(const DomainMap& map, Vertex v, double angular_tol)
{
    return corner_tangent_dot(map, v) < angular_tol ? 0 : 1;
}

CornerFlags corner_flags(const DomainMap& map, double angular_tol)
{
    CornerFlags f;
    f.lambda_B = corner_flag(map, Vertex::B, angular_tol);
    f.lambda_C = corner_flag(map, Vertex::C, angular_tol);
    f.lambda_D = corner_flag(map, Vertex::D, angular_tol);
    return f;
}

namespace {

// A vertex where the two meeting edges are tangent-continuous: the edge
// tangents are parallel, so the Jacobian degenerates there by construction.
bool is_tangent_vertex(const DomainMap& map, int v)
{
    static const Vec2 pts[4] = {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}};
    const JacobianBundle jb = map.jacobian(pts[v][0], pts[v][1]);
    const double a = jb.J.col(0).norm(), b = jb.J.col(1).norm();
    if (a == 0.0 || b == 0.0) return true;
    return std::abs(jb.detJ) <= 1e-8 * a * b;
}

}  // namespace

AuditReport univalency_audit(const DomainMap& map, int n)
{
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "audit grid needs n >= 2");
    AuditReport rep;
    rep.n = n;
    for (int v = 0; v < 4; ++v)
        if (is_tangent_vertex(map, v)) rep.tangent_vertices.push_back(static_cast<Vertex>(v));

    rep.min_detJ = std::numeric_limits<double>::infinity();
    rep.max_detJ = -std::numeric_limits<double>::infinity();
    rep.min_detJ_off_tangent_vertices = std::numeric_limits<double>::infinity();
    int positive = 0, negative = 0;
    rep.samples.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double xi = -1.0 + 2.0 * i / (n - 1), eta = -1.0 + 2.0 * j / (n - 1);
            const JacobianBundle jb = map.jacobian(xi, eta);
            rep.samples.push_back({xi, eta, jb.x[0], jb.x[1], jb.detJ});
            rep.min_detJ = std::min(rep.min_detJ, jb.detJ);
            rep.max_detJ = std::max(rep.max_detJ, jb.detJ);
            const bool corner = (i == 0 || i == n - 1) && (j == 0 || j == n - 1);
            bool excluded = false;
            if (corner) {
                const int v = (j == 0) ? (i == 0 ? 0 : 1) : (i == 0 ? 3 : 2);
                excluded = std::find(rep.tangent_vertices.begin(), rep.tangent_vertices.end(),
                                     static_cast<Vertex>(v)) != rep.tangent_vertices.end();
            }
            if (!excluded) {
                rep.min_detJ_off_tangent_vertices =
                    std::min(rep.min_detJ_off_tangent_vertices, jb.detJ);
                if (jb.detJ > 0.0)
                    ++positive;
                else
                    ++rep.nonpositive_count;
                if (jb.detJ < 0.0) ++negative;
            }
        }
    }
    rep.sign_changes = (positive > 0 && negative > 0) ? std::min(positive, negative) : 0;
    rep.pass = rep.min_detJ_off_tangent_vertices > 0.0;
    return rep;
}

std::vector<GridLinePoint> grid_lines(const DomainMap& map, int lines, int pts)
{
    std::vector<GridLinePoint> out;
    for (int l = 0; l < lines; ++l) {
        const double c = -1.0 + 2.0 * l / (lines - 1);
        for (int p = 0; p < pts; ++p) {
            const double s = -1.0 + 2.0 * p / (pts - 1);
            const Vec2 a = map.point(c, s);
            out.push_back({'x', l, c, s, a[0], a[1]});
            const Vec2 b = map.point(s, c);
            out.push_back({'y', l, s, c, b[0], b[1]});
        }
    }
    return out;
}

}  // namespace hbc
