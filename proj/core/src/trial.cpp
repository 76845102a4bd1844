#include "hardbc/trial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <variant>

#include "hardbc/blend.hpp"
#include "hardbc/errors.hpp"

namespace hbc {

const char* to_string(BCType t)
{
    static const char* names[] = {"dirichlet", "neumann", "robin", "free"};
    return names[static_cast<int>(t)];
}

const char* to_string(FormKind k)
{
    static const char* names[] = {"dirichlet",        "three_edge",     "single_neumann",
                                  "single_robin",     "adjacent_neumann", "adjacent_robin",
                                  "mixed"};
    return names[static_cast<int>(k)];
}

namespace {

// Edge-parameter signs of the counter-clockwise traversal.
constexpr int kSigma[4] = {1, 1, -1, -1};

template <class T>
Line<T> xline(const PartialTable<T>& t, int b)
{
    return {t(0, b), t(1, b), t(2, b), t(3, b)};
}

template <class T>
Line<T> yline(const PartialTable<T>& t, int a)
{
    return {t(a, 0), t(a, 1), t(a, 2), t(a, 3)};
}

Line<double> c1(double s, int which) { return basis_line(hermite_c1, s, which); }
Line<double> c2(double s, int which) { return basis_line(hermite_c2, s, which); }
Line<double> lin(double s, int which) { return basis_line(linear_blend, s, which); }

template <class T>
struct Probe {
    PartialTable<T> P, ab, cd, ad, bc;
    const std::array<PartialTable<T>, 4>* c = nullptr;
};

template <class T>
std::array<PartialTable<T>, 4> corner_tables(const FreeFunction<T>& g)
{
    return {g.partials(-1.0, -1.0), g.partials(1.0, -1.0), g.partials(1.0, 1.0),
            g.partials(-1.0, 1.0)};
}

template <class T>
Probe<T> make_probe(const FreeFunction<T>& g, double xi, double eta,
                    const std::array<PartialTable<T>, 4>* corners)
{
    Probe<T> p;
    p.P = g.partials(xi, eta);
    p.ab = g.partials(xi, -1.0);
    p.cd = g.partials(xi, 1.0);
    p.ad = g.partials(-1.0, eta);
    p.bc = g.partials(1.0, eta);
    p.c = corners;
    return p;
}

Error corner_error(ErrorKind k, const char* where, double gap)
{
    std::ostringstream os;
    os << where << ": gap " << gap;
    return Error(k, os.str());
}

// Canonical data: per edge the condition type, alpha and data function.
struct CanonData {
    DomainMap map;
    std::array<BCType, 4> type{};
    std::array<double, 4> alpha{};
    std::array<EdgeFn, 4> fn;
    FormOptions opts;

    EdgeJet at(int e, double s, bool on) const { return on ? fn[e](s) : EdgeJet(0.0); }

    void same_corner(const char* where, double a, double b) const
    {
        const double gap = std::abs(a - b);
        if (!(gap <= opts.corner_tol * (1.0 + std::abs(a))))
            throw corner_error(ErrorKind::CornerMismatch, where, gap);
    }

    // Relation that must hold at an orthogonal corner.
    void identity(const char* where, double resid, std::initializer_list<double> terms) const
    {
        double m = 0.0;
        for (double t : terms) m = std::max(m, std::abs(t));
        if (!(std::abs(resid) <= opts.identity_rtol * (1.0 + m)))
            throw corner_error(ErrorKind::IncompatibleCornerData, where, std::abs(resid));
    }
};

// ---------------------------------------------------------------- Dirichlet

struct DirichletEngine {
    bool three = false;
    struct K {
        double F00 = 0, F10 = 0, F11 = 0, F01 = 0;
    } on_, off_;

    explicit DirichletEngine(const CanonData& d, bool three_edge) : three(three_edge)
    {
        const EdgeJet ab0 = d.fn[0](-1.0), ab1 = d.fn[0](1.0);
        const EdgeJet ad0 = d.fn[3](-1.0), bc0 = d.fn[1](-1.0);
        d.same_corner("vertex A", ab0.value(), ad0.value());
        d.same_corner("vertex B", ab1.value(), bc0.value());
        on_.F00 = ab0.value();
        on_.F10 = ab1.value();
        if (!three) {
            const EdgeJet cd0 = d.fn[2](-1.0), cd1 = d.fn[2](1.0);
            d.same_corner("vertex C", cd1.value(), d.fn[1](1.0).value());
            d.same_corner("vertex D", cd0.value(), d.fn[3](1.0).value());
            on_.F11 = cd1.value();
            on_.F01 = cd0.value();
        }
    }

    template <class T>
    Jet2<T> eval(const CanonData& d, const Probe<T>& p, double xi, double eta, bool on) const
    {
        const auto f0x = lin(xi, 0), f1x = lin(xi, 1), f0y = lin(eta, 0), f1y = lin(eta, 1);
        const auto& C = *p.c;
        auto coons = [&](const auto& hAB, const auto& hCD, const auto& hAD, const auto& hBC,
                         const auto& h00, const auto& h10, const auto& h11, const auto& h01) {
            return outer(hAB, f0y) + outer(hCD, f1y) + outer(f0x, hAD - h00 * f0y - h01 * f1y) +
                   outer(f1x, hBC - h10 * f0y - h11 * f1y);
        };
        auto one_sided = [&](const auto& hAB, const auto& hAD, const auto& hBC, const auto& h00,
                             const auto& h10) {
            return outer(hAB, f0y) + outer(f0x, hAD - h00 * f0y) + outer(f1x, hBC - h10 * f0y);
        };
        // [g - g(xi,-1)phi0 - g(xi,1)phi1] - [...]phi0(xi) - [...]phi1(xi), bracket by bracket
        const Line<T> gAB = xline(p.ab, 0), gAD = yline(p.ad, 0), gBC = yline(p.bc, 0);
        const T &g00 = C[0](0, 0), &g10 = C[1](0, 0);
        Jet2<T> V = p.P.jet() - outer(gAB, f0y);
        if (three) {
            V = V - outer(f0x, gAD - g00 * f0y) - outer(f1x, gBC - g10 * f0y);
        } else {
            const T &g11 = C[2](0, 0), &g01 = C[3](0, 0);
            V = V - outer(xline(p.cd, 0), f1y);
            V = V - outer(f0x, gAD - g00 * f0y - g01 * f1y) - outer(f1x, gBC - g10 * f0y - g11 * f1y);
        }
        if (!on) return V;
        const K& k = on_;
        const auto FAB = to_line(d.at(0, xi, true)), FAD = to_line(d.at(3, eta, true)),
                   FBC = to_line(d.at(1, eta, true));
        if (three) return V + one_sided(FAB, FAD, FBC, k.F00, k.F10);
        const auto FCD = to_line(d.at(2, xi, true));
        return V + coons(FAB, FCD, FAD, FBC, k.F00, k.F10, k.F11, k.F01);
    }
};

// ------------------------------------------------ one flux edge on BC

struct SingleFluxEngine {
    double alpha = 0.0;
    bool lamB = true, lamC = true;
    struct K {
        double F00 = 0, F10 = 0, F11 = 0, F01 = 0, Fx10 = 0, Fx11 = 0, Fay10 = 0, Fay11 = 0;
    } on_, off_;

    SingleFluxEngine(const CanonData& d, int lambda_B, int lambda_C)
        : alpha(d.alpha[1]), lamB(lambda_B != 0), lamC(lambda_C != 0)
    {
        on_ = consts(d, true);
        off_ = consts(d, false);
    }

    K consts(const CanonData& d, bool on) const
    {
        K k;
        const EdgeJet ab0 = d.at(0, -1.0, on), ab1 = d.at(0, 1.0, on);
        const EdgeJet cd0 = d.at(2, -1.0, on), cd1 = d.at(2, 1.0, on);
        if (on) {
            d.same_corner("vertex A", ab0.value(), d.at(3, -1.0, on).value());
            d.same_corner("vertex D", cd0.value(), d.at(3, 1.0, on).value());
        }
        k.F00 = ab0.value();
        k.F10 = ab1.value();
        k.F01 = cd0.value();
        k.F11 = cd1.value();
        k.Fx10 = ab1.deriv(1);
        k.Fx11 = cd1.deriv(1);
        auto corner = [&](double s, double F, double Fx, bool lam, const char* where) {
            const EdgeMetricJets m = edge_metric_jets(d.map, Edge::BC, s);
            const double Tr = (d.at(1, s, on) * m.W).value();
            const double r = Tr - Fx - alpha * m.W.value() * F;
            if (lam) return r / m.S.value();
            if (on) d.identity(where, r, {Tr, Fx, alpha * m.W.value() * F});
            return 0.0;
        };
        k.Fay10 = corner(-1.0, k.F10, k.Fx10, lamB, "vertex B");
        k.Fay11 = corner(1.0, k.F11, k.Fx11, lamC, "vertex C");
        return k;
    }

    template <class T>
    Jet2<T> eval(const CanonData& d, const Probe<T>& p, double xi, double eta, bool on) const
    {
        const K& k = on ? on_ : off_;
        const auto a0 = c1(xi, 0), a1 = c1(xi, 1), p1 = c1(xi, 3);
        const auto b0 = c1(eta, 0), b1 = c1(eta, 1), q0 = c1(eta, 2), q1 = c1(eta, 3);
        const auto& C = *p.c;
        const T& g00 = C[0](0, 0);
        const T& g10 = C[1](0, 0);
        const T& g11 = C[2](0, 0);
        const T& g01 = C[3](0, 0);
        const T& gy10 = C[1](0, 1);
        const T& gy11 = C[2](0, 1);
        const T& gx10 = C[1](1, 0);
        const T& gx11 = C[2](1, 0);
        const Line<T> gAB = xline(p.ab, 0), gCD = xline(p.cd, 0), gAD = yline(p.ad, 0),
                      gBC = yline(p.bc, 0), gxBC = yline(p.bc, 1);

        Jet2<T> V = p.P.jet() - outer(gAB, b0) - outer(gCD, b1) -
                    outer(a0, gAD - g00 * b0 - g01 * b1) -
                    outer(p1, gxBC - gx10 * b0 - gx11 * b1);
        if (lamB) V = V - outer(a1, gy10 * q0);
        if (lamC) V = V - outer(a1, gy11 * q1);

        const EdgeMetricJets m = edge_metric_jets(d.map, Edge::BC, eta);
        const auto S = to_line(m.S), W = to_line(m.W);

        // g and data kept in separate brackets so each vanishes exactly where it should
        Line<T> profg = gBC - g10 * b0 - g11 * b1;
        if (lamB) profg = profg - gy10 * q0;
        if (lamC) profg = profg - gy11 * q1;
        V = V - outer(p1, S * diff(profg) + (alpha * W) * profg);
        if (!on) return V;

        Line<double> profF = k.F10 * b0 + k.F11 * b1;
        if (lamB) profF = profF + k.Fay10 * q0;
        if (lamC) profF = profF + k.Fay11 * q1;
        const auto Tr = to_line(d.at(1, eta, on) * m.W);
        const Line<double> FgxF = Tr - S * diff(profF) - (alpha * W) * profF;
        V = V + outer(p1, FgxF - k.Fx10 * b0 - k.Fx11 * b1);
        if (lamB) V = V + outer(a1, k.Fay10 * q0);
        if (lamC) V = V + outer(a1, k.Fay11 * q1);
        const auto FAB = to_line(d.at(0, xi, true)), FCD = to_line(d.at(2, xi, true)),
                   FAD = to_line(d.at(3, eta, true));
        return V + outer(FAB, b0) + outer(FCD, b1) + outer(a0, FAD - k.F00 * b0 - k.F01 * b1);
    }
};

// ------------------------------------------- flux edges BC and CD meeting at C

struct AdjacentEngine {
    double aBC = 0.0, aCD = 0.0;
    bool lamB = true, lamC = true, lamD = true;
    bool gamma = false, kappa = false;
    // Geometry at C.
    double SB = 0, SC = 0, Fbx = 0, Fby = 0, QbBC = 0, QbCD = 0;
    struct K {
        double F00 = 0, F10 = 0, F01 = 0, Fx10 = 0, Fy01 = 0, Fay10 = 0, Fax01 = 0;
        double Fax = 0, Fay = 0, QaBC = 0, QaCD = 0, Fa11 = 0;
    } on_, off_;

    AdjacentEngine(const CanonData& d, const CornerFlags& f, bool neumann)
        : aBC(d.alpha[1]), aCD(d.alpha[2]), lamB(f.lambda_B != 0), lamC(f.lambda_C != 0),
          lamD(f.lambda_D != 0)
    {
        const EdgeMetricJets mB = edge_metric_jets(d.map, Edge::BC, 1.0);
        const EdgeMetricJets mC = edge_metric_jets(d.map, Edge::CD, 1.0);
        SB = mB.S.value();
        SC = mC.S.value();
        const double den = 1.0 - SB * SC;
        if (!(den > 0.0)) {
            std::ostringstream os;
            os << "vertex C: S_BC*S_CD = " << SB * SC;
            throw Error(ErrorKind::CornerSolveSingular, os.str());
        }
        const double WB = mB.W.value(), WC = mC.W.value();
        Fbx = (aBC * WB - SB * aCD * WC) / den;
        Fby = (aCD * WC - SC * aBC * WB) / den;
        QbBC = (mB.S.deriv(1) + aBC * WB) * Fby - aBC * mB.W.deriv(1);
        QbCD = (mC.S.deriv(1) + aCD * WC) * Fbx - aCD * mC.W.deriv(1);
        gamma = !neumann && std::abs(QbBC - QbCD) > d.opts.gamma_rtol * (1.0 + std::abs(QbBC));
        kappa = !lamC && gamma;
        on_ = consts(d, true);
        off_ = consts(d, false);
    }

    K consts(const CanonData& d, bool on) const
    {
        K k;
        const EdgeJet ab0 = d.at(0, -1.0, on), ab1 = d.at(0, 1.0, on), ad1 = d.at(3, 1.0, on);
        if (on) d.same_corner("vertex A", ab0.value(), d.at(3, -1.0, on).value());
        k.F00 = ab0.value();
        k.F10 = ab1.value();
        k.Fx10 = ab1.deriv(1);
        k.F01 = ad1.value();
        k.Fy01 = ad1.deriv(1);

        const EdgeMetricJets mB0 = edge_metric_jets(d.map, Edge::BC, -1.0);
        {
            const double Tr = (d.at(1, -1.0, on) * mB0.W).value();
            const double r = Tr - k.Fx10 - aBC * mB0.W.value() * k.F10;
            if (lamB)
                k.Fay10 = r / mB0.S.value();
            else if (on)
                d.identity("vertex B", r, {Tr, k.Fx10, aBC * mB0.W.value() * k.F10});
        }
        const EdgeMetricJets mD0 = edge_metric_jets(d.map, Edge::CD, -1.0);
        {
            const double Tr = (d.at(2, -1.0, on) * mD0.W).value();
            const double r = Tr - k.Fy01 - aCD * mD0.W.value() * k.F01;
            if (lamD)
                k.Fax01 = r / mD0.S.value();
            else if (on)
                d.identity("vertex D", r, {Tr, k.Fy01, aCD * mD0.W.value() * k.F01});
        }

        const EdgeMetricJets mB = edge_metric_jets(d.map, Edge::BC, 1.0);
        const EdgeMetricJets mC = edge_metric_jets(d.map, Edge::CD, 1.0);
        const EdgeJet TB = d.at(1, 1.0, on) * mB.W, TC = d.at(2, 1.0, on) * mC.W;
        const double den = 1.0 - SB * SC;
        k.Fax = (TB.value() - SB * TC.value()) / den;
        k.Fay = (TC.value() - SC * TB.value()) / den;
        k.QaBC = TB.deriv(1) - (mB.S.deriv(1) + aBC * mB.W.value()) * k.Fay;
        k.QaCD = TC.deriv(1) - (mC.S.deriv(1) + aCD * mC.W.value()) * k.Fax;
        if (kappa)
            k.Fa11 = -(k.QaBC - k.QaCD) / (QbBC - QbCD);
        else if (!lamC && on)
            d.identity("vertex C", k.QaBC - k.QaCD, {k.QaBC, k.QaCD});
        return k;
    }

    template <class T>
    Jet2<T> eval(const CanonData& d, const Probe<T>& p, double xi, double eta, bool on) const
    {
        const K& k = on ? on_ : off_;
        const auto r0x = c2(xi, 0), r1x = c2(xi, 1), u0x = c2(xi, 2), u1x = c2(xi, 3),
                   w1x = c2(xi, 5);
        const auto r0y = c2(eta, 0), r1y = c2(eta, 1), u0y = c2(eta, 2), u1y = c2(eta, 3);
        const auto& C = *p.c;
        const T& g00 = C[0](0, 0);
        const T& g10 = C[1](0, 0);
        const T& gx10 = C[1](1, 0);
        const T& gy10 = C[1](0, 1);
        const T& g11 = C[2](0, 0);
        const T& gx11 = C[2](1, 0);
        const T& gy11 = C[2](0, 1);
        const T& gxx11 = C[2](2, 0);
        const T& gxy11 = C[2](1, 1);
        const T& gyy11 = C[2](0, 2);
        const T& g01 = C[3](0, 0);
        const T& gx01 = C[3](1, 0);
        const T& gy01 = C[3](0, 1);
        const Line<T> gAB = xline(p.ab, 0), gCD = xline(p.cd, 0), gyCD = xline(p.cd, 1),
                      gAD = yline(p.ad, 0), gBC = yline(p.bc, 0), gxBC = yline(p.bc, 1);

        // Corner C quantities split into a g part and a data part.
        const T V11g = kappa ? T(g11 * 0.0) : g11;
        const double V11F = kappa ? k.Fa11 : 0.0;
        const T FgyCg = T(-Fby * V11g), FgxCg = T(-Fbx * V11g);
        const double FgyCF = k.Fay - Fby * V11F, FgxCF = k.Fax - Fbx * V11F;
        const T Fgxy11g = T(QbBC * V11g - SB * gyy11);
        const double Fgxy11F = k.QaBC + QbBC * V11F;
        T Fgxx11g = g11 * 0.0;
        double Fgxx11F = 0.0;
        if (lamC) {
            Fgxx11g = T((SB / SC) * gyy11 - (QbBC - QbCD) * V11g / SC);
            Fgxx11F = -(QbBC - QbCD) * V11F / SC - (k.QaBC - k.QaCD) / SC;
        }

        Line<T> profg = g01 * r0x + gx11 * u1x;
        if (lamD) profg = profg + gx01 * u0x;
        if (kappa) profg = profg + g11 * r1x;
        if (lamC) profg = profg + gxx11 * w1x;
        const Line<T> hAD = gAD - g00 * r0y - gy01 * u1y - g01 * r1y;
        const Line<T> hxBC = gxBC - gx10 * r0y - gxy11 * u1y - gx11 * r1y;
        Jet2<T> V = p.P.jet() - outer(gAB, r0y) - outer(gyCD, u1y) - outer(profg, r1y) -
                    outer(r0x, hAD) - outer(u1x, hxBC);
        if (lamB) V = V - outer(r1x, gy10 * u0y);

        const EdgeMetricJets mB = edge_metric_jets(d.map, Edge::BC, eta);
        const EdgeMetricJets mC = edge_metric_jets(d.map, Edge::CD, xi);
        const auto SBl = to_line(mB.S), WBl = to_line(mB.W), SCl = to_line(mC.S), WCl = to_line(mC.W);

        Line<T> VBCg = gBC - g10 * r0y - T(gy11 - FgyCg) * u1y;
        if (lamB) VBCg = VBCg - gy10 * u0y;
        if (kappa) VBCg = VBCg - g11 * r1y;
        Line<T> VCDg = gCD - g01 * r0x - T(gx11 - FgxCg) * u1x;
        if (lamD) VCDg = VCDg - gx01 * u0x;
        if (lamC) VCDg = VCDg - T(gxx11 - Fgxx11g) * w1x;
        if (kappa) VCDg = VCDg - g11 * r1x;
        const Line<T> NgxBC = SBl * diff(VBCg) + (aBC * WBl) * VBCg;
        const Line<T> NgyCD = SCl * diff(VCDg) + (aCD * WCl) * VCDg;
        Line<T> profFg = FgxCg * u1x;
        if (lamC) profFg = profFg + Fgxx11g * w1x;
        V = V - outer(NgyCD, u1y) + outer(profFg, r1y) -
            outer(u1x, NgxBC + Fgxy11g * u1y + FgxCg * r1y);
        if (!on) return V;

        Line<double> VBCF = k.F10 * r0y + FgyCF * u1y;
        if (lamB) VBCF = VBCF + k.Fay10 * u0y;
        if (kappa) VBCF = VBCF + k.Fa11 * r1y;
        Line<double> VCDF = k.F01 * r0x + FgxCF * u1x;
        if (lamD) VCDF = VCDF + k.Fax01 * u0x;
        if (lamC) VCDF = VCDF + Fgxx11F * w1x;
        if (kappa) VCDF = VCDF + k.Fa11 * r1x;
        const Line<double> FgxBCF =
            to_line(d.at(1, eta, on) * mB.W) - SBl * diff(VBCF) - (aBC * WBl) * VBCF;
        const Line<double> FgyCDF =
            to_line(d.at(2, xi, on) * mC.W) - SCl * diff(VCDF) - (aCD * WCl) * VCDF;
        V = V + outer(FgyCDF, u1y) + outer(VCDF, r1y) +
            outer(u1x, FgxBCF - k.Fx10 * r0y - Fgxy11F * u1y - FgxCF * r1y);
        if (lamB) V = V + outer(r1x, k.Fay10 * u0y);
        const auto FAB = to_line(d.at(0, xi, on)), FAD = to_line(d.at(3, eta, on));
        return V + outer(FAB, r0y) + outer(r0x, FAD - k.F00 * r0y - k.Fy01 * u1y - k.F01 * r1y);
    }
};

}  // namespace

struct CanonicalEngine {
    CanonData data;
    std::variant<DirichletEngine, SingleFluxEngine, AdjacentEngine> eng;

    template <class T>
    Jet2<T> eval(const Probe<T>& p, double xi, double eta, bool on) const
    {
        return std::visit([&](const auto& e) { return e.eval(data, p, xi, eta, on); }, eng);
    }
};

namespace {

template <class T>
Jet2<T> eval_rotated(const CanonicalEngine& e, int rot, const FreeFunction<T>& g, double xi,
                     double eta, bool on, const std::array<PartialTable<T>, 4>* corners)
{
    const RotatedFree<T> rg(g, rot);
    std::array<PartialTable<T>, 4> own;
    if (!corners) {
        own = corner_tables<T>(rg);
        corners = &own;
    }
    const Vec2 q = rotate_point({xi, eta}, -rot);
    Jet2<T> V = e.eval(make_probe<T>(rg, q[0], q[1], corners), q[0], q[1], on);
    for (int i = 0; i < rot; ++i) V = rotate_jet(V);
    return V;
}

EdgeFn canonical_edge(const BoundarySpec& bc, int j, int k)
{
    const int src = (j + k) % 4;
    const EdgeFn f = bc[src].data;
    if (!f) return {};
    if (kSigma[src] * kSigma[j] > 0) return f;
    return [f](double t) { return reflect(f(-t)); };
}

}  // namespace

TrialForm::TrialForm(DomainMap map, BoundarySpec bc, FormOptions opts)
    : map_(std::move(map)), bc_(std::move(bc)), opts_(opts)
{
    std::vector<int> flux, free_edges;
    for (int e = 0; e < 4; ++e) {
        const auto t = bc_[e].type;
        if (t != BCType::Free && !bc_[e].data)
            throw Error(ErrorKind::InvalidArgument,
                        std::string("edge ") + to_string(static_cast<Edge>(e)) + " has no data");
        if (!std::isfinite(bc_[e].alpha))
            throw Error(ErrorKind::InvalidArgument, "Robin coefficient must be finite");
        if (t == BCType::Neumann || t == BCType::Robin) flux.push_back(e);
        if (t == BCType::Free) free_edges.push_back(e);
    }
    if (!free_edges.empty()) {
        if (free_edges.size() > 1 || !flux.empty())
            throw Error(ErrorKind::NotSupported,
                        "a free edge is only supported opposite AB with the other three Dirichlet");
        kind_ = FormKind::ThreeEdge;
        rot_ = (free_edges[0] + 2) % 4;
    } else if (flux.empty()) {
        kind_ = FormKind::Dirichlet;
        rot_ = 0;
    } else if (flux.size() == 1) {
        const bool robin = bc_[flux[0]].type == BCType::Robin;
        kind_ = robin ? FormKind::SingleRobin : FormKind::SingleNeumann;
        rot_ = (flux[0] + 3) % 4;
    } else if (flux.size() == 2) {
        const int a = flux[0], b = flux[1];
        if ((a + 2) % 4 == b)
            throw Error(ErrorKind::NotSupported,
                        "flux conditions on opposite edges are outside the supported forms");
        const int first = (b == (a + 1) % 4) ? a : b;
        rot_ = (first + 3) % 4;
        const bool na = bc_[a].type == BCType::Neumann, nb = bc_[b].type == BCType::Neumann;
        kind_ = (na && nb) ? FormKind::AdjacentNeumann
                : (!na && !nb) ? FormKind::AdjacentRobin
                               : FormKind::Mixed;
    } else {
        throw Error(ErrorKind::NotSupported, "more than two flux edges are outside the supported forms");
    }

    CanonData d{map_.rotated(rot_), {}, {}, {}, opts_};
    for (int j = 0; j < 4; ++j) {
        const int src = (j + rot_) % 4;
        d.type[j] = bc_[src].type;
        d.alpha[j] = bc_[src].type == BCType::Robin ? bc_[src].alpha : 0.0;
        d.fn[j] = canonical_edge(bc_, j, rot_);
    }

    auto lambda = [&](Vertex v) {
        const int orig = (static_cast<int>(v) + rot_) % 4;
        const int o = opts_.lambda_override[orig];
        const int l = o >= 0 ? (o != 0) : corner_flag(d.map, v, opts_.angular_tol);
        flags_.lambda[orig] = l;
        return l;
    };

    switch (kind_) {
        case FormKind::Dirichlet:
        case FormKind::ThreeEdge:
            eng_ = std::make_unique<CanonicalEngine>(
                CanonicalEngine{d, DirichletEngine(d, kind_ == FormKind::ThreeEdge)});
            break;
        case FormKind::SingleNeumann:
        case FormKind::SingleRobin: {
            const int lb = lambda(Vertex::B), lc = lambda(Vertex::C);
            eng_ = std::make_unique<CanonicalEngine>(CanonicalEngine{d, SingleFluxEngine(d, lb, lc)});
            break;
        }
        default: {
            CornerFlags f;
            f.lambda_B = lambda(Vertex::B);
            f.lambda_C = lambda(Vertex::C);
            f.lambda_D = lambda(Vertex::D);
            const bool neumann = kind_ == FormKind::AdjacentNeumann && !opts_.neumann_as_robin;
            AdjacentEngine a(d, f, neumann);
            flags_.gamma_C = a.gamma ? 1 : 0;
            eng_ = std::make_unique<CanonicalEngine>(CanonicalEngine{d, a});
            break;
        }
    }
}

TrialForm::~TrialForm() = default;
TrialForm::TrialForm(TrialForm&&) noexcept = default;
TrialForm& TrialForm::operator=(TrialForm&&) noexcept = default;
TrialForm::TrialForm(const TrialForm& o)
    : map_(o.map_), bc_(o.bc_), opts_(o.opts_), kind_(o.kind_), rot_(o.rot_), flags_(o.flags_),
      eng_(o.eng_ ? std::make_unique<CanonicalEngine>(*o.eng_) : nullptr)
{
}
TrialForm& TrialForm::operator=(const TrialForm& o)
{
    if (this != &o) *this = TrialForm(o);
    return *this;
}

Jet2<double> TrialForm::eval(const FreeFunction<double>& g, double xi, double eta,
                             bool with_data) const
{
    return eval_rotated<double>(*eng_, rot_, g, xi, eta, with_data, nullptr);
}

Jet2<Eigen::ArrayXd> TrialForm::eval(const FreeFunction<Eigen::ArrayXd>& g, double xi, double eta,
                                     bool with_data) const
{
    return eval_rotated<Eigen::ArrayXd>(*eng_, rot_, g, xi, eta, with_data, nullptr);
}

Affine TrialForm::affine(const FeatureNet& net, double xi, double eta) const
{
    return affine_batch(net, {{xi, eta}}).front();
}

std::vector<Affine> TrialForm::affine_batch(const FeatureNet& net,
                                            const std::vector<Vec2>& pts) const
{
    const FeatureBasis basis(net);
    const ZeroFunction zero;
    const auto cb = corner_tables<Eigen::ArrayXd>(RotatedFree<Eigen::ArrayXd>(basis, rot_));
    const auto cz = corner_tables<double>(RotatedFree<double>(zero, rot_));
    std::vector<Affine> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out[i].c = eval_rotated<double>(*eng_, rot_, zero, pts[i][0], pts[i][1], true, &cz);
        out[i].B =
            eval_rotated<Eigen::ArrayXd>(*eng_, rot_, basis, pts[i][0], pts[i][1], false, &cb);
    }
    return out;
}

std::vector<Jet2<double>> TrialForm::eval_batch(const FreeFunction<double>& g,
                                                const std::vector<Vec2>& pts,
                                                bool with_data) const
{
    const auto c = corner_tables<double>(RotatedFree<double>(g, rot_));
    std::vector<Jet2<double>> out;
    out.reserve(pts.size());
    for (const Vec2& p : pts)
        out.push_back(eval_rotated<double>(*eng_, rot_, g, p[0], p[1], with_data, &c));
    return out;
}

// ------------------------------------------------------------ named constructors

namespace {

void expect(bool ok, const char* what)
{
    if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

TrialForm checked(TrialForm f, std::initializer_list<FormKind> kinds, const char* what)
{
    expect(std::find(kinds.begin(), kinds.end(), f.kind()) != kinds.end(), what);
    return f;
}

}  // namespace

TrialForm dirichlet_form(const DomainMap& map, const std::array<EdgeFn, 4>& data, FormOptions opts)
{
    BoundarySpec bc;
    for (int e = 0; e < 4; ++e) bc[e] = {BCType::Dirichlet, 0.0, data[e]};
    return TrialForm(map, bc, opts);
}

TrialForm dirichlet_form_three_edge(const DomainMap& map, EdgeFn ab, EdgeFn bc, EdgeFn ad,
                                    FormOptions opts)
{
    BoundarySpec s;
    s[0] = {BCType::Dirichlet, 0.0, std::move(ab)};
    s[1] = {BCType::Dirichlet, 0.0, std::move(bc)};
    s[2] = {BCType::Free, 0.0, {}};
    s[3] = {BCType::Dirichlet, 0.0, std::move(ad)};
    return TrialForm(map, s, opts);
}

TrialForm single_neumann_form(const DomainMap& map, Edge flux, const BoundarySpec& bc,
                              FormOptions opts)
{
    expect(bc[static_cast<int>(flux)].type == BCType::Neumann, "flux edge must be Neumann");
    return checked(TrialForm(map, bc, opts), {FormKind::SingleNeumann},
                   "single Neumann form needs Dirichlet on the other three edges");
}

TrialForm single_robin_form(const DomainMap& map, Edge flux, const BoundarySpec& bc,
                            FormOptions opts)
{
    expect(bc[static_cast<int>(flux)].type == BCType::Robin, "flux edge must be Robin");
    return checked(TrialForm(map, bc, opts), {FormKind::SingleRobin},
                   "single Robin form needs Dirichlet on the other three edges");
}

TrialForm adjacent_neumann_form(const DomainMap& map, const BoundarySpec& bc, FormOptions opts)
{
    return checked(TrialForm(map, bc, opts), {FormKind::AdjacentNeumann},
                   "adjacent Neumann form needs two adjacent Neumann edges");
}

TrialForm adjacent_robin_form(const DomainMap& map, const BoundarySpec& bc, FormOptions opts)
{
    return checked(TrialForm(map, bc, opts), {FormKind::AdjacentRobin},
                   "adjacent Robin form needs two adjacent Robin edges");
}

TrialForm mixed_corner_form(const DomainMap& map, const BoundarySpec& bc, FormOptions opts)
{
    return checked(TrialForm(map, bc, opts), {FormKind::Mixed},
                   "mixed corner form needs one Neumann and one Robin edge, adjacent");
}

std::array<EdgeResidual, 4> boundary_residuals(const TrialForm& f, const FreeFunction<double>& g,
                                               int n)
{
    std::array<EdgeResidual, 4> out{};
    for (int i = 0; i < 4; ++i) {
        const EdgeCondition& c = f.boundary()[i];
        if (c.type == BCType::Free) continue;
        const Edge e = static_cast<Edge>(i);
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double s = -1.0 + 2.0 * j / (n - 1);
            const Vec2 q = edge_point(e, s);
            const Jet2<double> V = f.eval(g, q[0], q[1]);
            double r = 0.0;
            if (c.type == BCType::Dirichlet) {
                r = V[kV] - c.data(s).value();
            } else {
                const JacobianBundle jb = f.map().jacobian(q[0], q[1]);
                const EdgeMetrics m = edge_metrics(f.map(), e, s);
                const double ux = V[kXi] * jb.Jinv(0, 0) + V[kEta] * jb.Jinv(1, 0);
                const double uy = V[kXi] * jb.Jinv(0, 1) + V[kEta] * jb.Jinv(1, 1);
                r = m.n[0] * ux + m.n[1] * uy + c.alpha * V[kV] - c.data(s).value();
            }
            out[i].max = std::max(out[i].max, std::abs(r));
            sum += r * r;
        }
        out[i].rms = std::sqrt(sum / n);
    }
    return out;
}

}  // namespace hbc
