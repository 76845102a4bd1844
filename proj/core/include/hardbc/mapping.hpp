#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "hardbc/errors.hpp"
#include "hardbc/geometry.hpp"
#include "hardbc/taylor.hpp"

namespace hbc {

enum class MapKind { Coons, CoonsCenter };

MapKind parse_map_kind(const std::string& s);
const char* to_string(MapKind k);

// 3-point Lagrange set on {-1, 0, 1}: (varpi0, varpi1, varpi2).
std::array<double, 3> lagrange3(double s, int deriv);

inline constexpr double kSingularDet = 1e-10;

struct JacobianBundle {
    Vec2 x{};
    Eigen::Matrix2d J;  // columns x_xi, x_eta
    Eigen::Matrix2d Jinv;
    double detJ = 0.0;
    Eigen::Matrix2d dJdxi;   // columns x_xixi, x_xieta
    Eigen::Matrix2d dJdeta;  // columns x_xieta, x_etaeta
};

class DomainMap {
public:
    explicit DomainMap(QuadDomain domain, MapKind kind = MapKind::Coons, Vec2 center = {0.0, 0.0});

    const QuadDomain& domain() const { return domain_; }
    MapKind kind() const { return kind_; }
    Vec2 center() const { return center_; }

    template <class S>
    Vec<S> at(const S& xi, const S& eta) const
    {
        const QuadDomain& d = domain_;
        const Vec<S> ab = d.ab.at(xi), cd = d.cd.at(xi), ad = d.ad.at(eta), bc = d.bc.at(eta);
        const Vec2 &xa = d.vertices[0], &xb = d.vertices[1], &xc = d.vertices[2],
                   &xd = d.vertices[3];
        Vec<S> r;
        if (kind_ == MapKind::Coons) {
            const S f0x = 0.5 * (1.0 - xi), f1x = 0.5 * (1.0 + xi);
            const S f0y = 0.5 * (1.0 - eta), f1y = 0.5 * (1.0 + eta);
            for (int c = 0; c < 2; ++c) {
                r[c] = ad[c] * f0x + bc[c] * f1x + ab[c] * f0y + cd[c] * f1y -
                       (xa[c] * f0y + xd[c] * f1y) * f0x - (xb[c] * f0y + xc[c] * f1y) * f1x;
            }
        } else {
            const S l0x = 0.5 * xi * (xi - 1.0), l1x = (1.0 + xi) * (1.0 - xi),
                    l2x = 0.5 * xi * (xi + 1.0);
            const S l0y = 0.5 * eta * (eta - 1.0), l1y = (1.0 + eta) * (1.0 - eta),
                    l2y = 0.5 * eta * (eta + 1.0);
            for (int c = 0; c < 2; ++c) {
                r[c] = ad[c] * l0x + bc[c] * l2x + ab[c] * l0y + cd[c] * l2y +
                       center_[c] * (l1x * l1y) - (xa[c] * l0x + xb[c] * l2x) * l0y -
                       (xd[c] * l0x + xc[c] * l2x) * l2y;
            }
        }
        return r;
    }

    Vec2 point(double xi, double eta) const { return at(xi, eta); }
    JacobianBundle jacobian(double xi, double eta) const;

    // Same geometry with the quad relabelled so that vertex k becomes A.
    // Standard coordinates relate by (xi, eta) = R^k (xi', eta'), R(a, b) = (-b, a).
    DomainMap rotated(int k) const;

private:
    QuadDomain domain_;
    MapKind kind_;
    Vec2 center_;
};

QuadDomain rotate_quad(const QuadDomain& d, int k);

// Standard-square point of an edge at its own parameter s.
Vec2 edge_point(Edge e, double s);
// 0 for AB/CD (parameter is xi), 1 for BC/AD (parameter is eta).
int edge_tangent_axis(Edge e);

struct EdgeMetricJets {
    Edge edge{};
    EdgeJet detJ;
    std::array<EdgeJet, 2> tau, n, K;
    EdgeJet S, W;
};

struct EdgeMetrics {
    Edge edge{};
    double s = 0.0;
    Vec2 K{}, n{}, tau{};
    double S = 0.0, W = 0.0, detJ = 0.0;
    double dS = 0.0, dW = 0.0;
    std::array<std::array<int, 2>, 2> sigma{};
};

// Metric functions along an edge as second-order jets in the edge parameter.
EdgeMetricJets edge_metric_jets(const DomainMap& map, Edge e, double s);
EdgeMetrics edge_metrics(const DomainMap& map, Edge e, double s);

struct CornerFlags {
    int lambda_B = 1, lambda_C = 1, lambda_D = 1;
    int gamma_C = 0;
};

// |tau1 . tau2| of the two edge tangents meeting at a vertex.
double corner_tangent_dot(const DomainMap& map, Vertex v);
int corner_flag(const DomainMap& map, Vertex v, double angular_tol = 1e-8);
CornerFlags corner_flags(const DomainMap& map, double angular_tol = 1e-8);

struct AuditSample {
    double xi, eta, x, y, detJ;
};

struct AuditReport {
    int n = 0;
    double min_detJ = 0.0;
    double max_detJ = 0.0;
    double min_detJ_off_tangent_vertices = 0.0;
    int nonpositive_count = 0;
    int sign_changes = 0;
    std::vector<Vertex> tangent_vertices;  // vertices where the boundary is smooth
    bool pass = false;
    std::vector<AuditSample> samples;
};

AuditReport univalency_audit(const DomainMap& map, int n);

// Grid lines xi = const and eta = const, `lines` per family, `pts` samples each.
struct GridLinePoint {
    char family;
    int line;
    double xi, eta, x, y;
};
std::vector<GridLinePoint> grid_lines(const DomainMap& map, int lines, int pts);

// Chain rule from standard to physical derivatives.
template <class T>
struct PhysicalDerivs {
    T x, y, xx, xy, yy;
};

template <class T>
PhysicalDerivs<T> physical_derivatives(const JacobianBundle& jb, const T& pxi, const T& peta,
                                       const T& pxixi, const T& pxieta, const T& petaeta)
{
    if (!(std::abs(jb.detJ) > kSingularDet))
        throw Error(ErrorKind::SingularJacobian, "physical_derivatives");
    const Eigen::Matrix2d& Ji = jb.Jinv;
    PhysicalDerivs<T> r;
    // [psi_x psi_y] = [psi_xi psi_eta] Jinv
    r.x = pxi * Ji(0, 0) + peta * Ji(1, 0);
    r.y = pxi * Ji(0, 1) + peta * Ji(1, 1);
    // G_ab = psi_x d_a d_b x + psi_y d_a d_b y
    const T g00 = r.x * jb.dJdxi(0, 0) + r.y * jb.dJdxi(1, 0);
    const T g01 = r.x * jb.dJdxi(0, 1) + r.y * jb.dJdxi(1, 1);
    const T g11 = r.x * jb.dJdeta(0, 1) + r.y * jb.dJdeta(1, 1);
    const T h00 = pxixi - g00, h01 = pxieta - g01, h11 = petaeta - g11;
    // Hx = Jinv^T H Jinv
    auto quad = [&](int i, int j) -> T {
        return Ji(0, i) * Ji(0, j) * h00 + (Ji(0, i) * Ji(1, j) + Ji(1, i) * Ji(0, j)) * h01 +
               Ji(1, i) * Ji(1, j) * h11;
    };
    r.xx = quad(0, 0);
    r.xy = quad(0, 1);
    r.yy = quad(1, 1);
    return r;
}

}  // namespace hbc
