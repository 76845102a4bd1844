#pragma once

#include <array>
#include <cmath>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "hardbc/taylor.hpp"

namespace hbc {

template <class S>
using Vec = std::array<S, 2>;
using Vec2 = Vec<double>;

enum class Edge { AB = 0, BC = 1, CD = 2, AD = 3 };
enum class Vertex { A = 0, B = 1, C = 2, D = 3 };

const char* to_string(Edge e);
const char* to_string(Vertex v);

// Linear parameter blend th0*phi0(t) + th1*phi1(t).
template <class S>
S lerp_param(double a, double b, const S& t)
{
    return 0.5 * (a + b) + 0.5 * (b - a) * t;
}

struct LineCurve {
    Vec2 p0, p1;
    template <class S>
    Vec<S> at(const S& t) const
    {
        return {lerp_param(p0[0], p1[0], t), lerp_param(p0[1], p1[1], t)};
    }
};

struct CircularArc {
    Vec2 center;
    double radius = 1.0;
    double theta0 = 0.0, theta1 = 0.0;
    template <class S>
    Vec<S> at(const S& t) const
    {
        using std::cos;
        using std::sin;
        const S th = lerp_param(theta0, theta1, t);
        return {center[0] + radius * cos(th), center[1] + radius * sin(th)};
    }
};

struct EllipticArc {
    Vec2 center;
    double ax = 1.0, ay = 1.0;
    double theta0 = 0.0, theta1 = 0.0;
    template <class S>
    Vec<S> at(const S& t) const
    {
        using std::cos;
        using std::sin;
        const S th = lerp_param(theta0, theta1, t);
        return {center[0] + ax * cos(th), center[1] + ay * sin(th)};
    }
};

// r(theta) = a + b cos(k theta + phase), point = center + r (cos theta, sin theta).
struct PolarTrig {
    Vec2 center;
    double a = 1.0, b = 0.0, k = 0.0, phase = 0.0;
    double theta0 = 0.0, theta1 = 0.0;
    template <class S>
    Vec<S> at(const S& t) const
    {
        using std::cos;
        using std::sin;
        const S th = lerp_param(theta0, theta1, t);
        const S r = a + b * cos(k * th + phase);
        return {center[0] + r * cos(th), center[1] + r * sin(th)};
    }
};

// Segment p0 -> p1 displaced by c (1 + cos(pi t)) along dir.
struct BumpedLine {
    Vec2 p0, p1;
    double c = 0.0;
    Vec2 dir{0.0, 1.0};
    template <class S>
    Vec<S> at(const S& t) const
    {
        using std::cos;
        const S bump = c * (1.0 + cos(M_PI * t));
        return {lerp_param(p0[0], p1[0], t) + dir[0] * bump,
                lerp_param(p0[1], p1[1], t) + dir[1] * bump};
    }
};

// Space-time wall (x(tau), t_f tau), tau = (1+s)/2,
// x(tau) = x0 (1-tau) + x1 tau + amp (cos(omega tau) - 1).
struct TimeGraph {
    double x0 = 0.0, x1 = 0.0, amp = 0.0, omega = 0.0, t_final = 1.0;
    template <class S>
    Vec<S> at(const S& s) const
    {
        using std::cos;
        const S tau = 0.5 * (1.0 + s);
        const S x = x0 * (1.0 - tau) + x1 * tau + amp * (cos(omega * tau) - 1.0);
        return {x, t_final * tau};
    }
};

class ParametricCurve;

struct AffineCombination {
    std::vector<double> weights;
    std::vector<ParametricCurve> parts;
    Vec2 offset{0.0, 0.0};
};

class ParametricCurve {
public:
    using Kind = std::variant<LineCurve, CircularArc, EllipticArc, PolarTrig, BumpedLine,
                              TimeGraph, AffineCombination>;

    ParametricCurve() : kind_(LineCurve{}) {}
    template <class K>
        requires(!std::is_same_v<std::decay_t<K>, ParametricCurve>)
    ParametricCurve(K k) : kind_(std::move(k))  // NOLINT
    {
    }

    // Same point set traversed with t -> -t.
    ParametricCurve reversed() const
    {
        ParametricCurve c(*this);
        c.reversed_ = !c.reversed_;
        return c;
    }
    bool is_reversed() const { return reversed_; }
    const Kind& kind() const { return kind_; }
    const char* kind_name() const;

    template <class S>
    Vec<S> at(const S& t) const
    {
        const S tt = reversed_ ? S(-t) : t;
        return std::visit([&](const auto& k) { return eval_kind(k, tt); }, kind_);
    }

    // deriv = 0..3; analytic derivative with respect to t.
    Vec2 eval(double t, int deriv = 0) const;
    std::array<Vec2, 4> derivatives(double t) const;

private:
    template <class K, class S>
    Vec<S> eval_kind(const K& k, const S& t) const
    {
        return k.at(t);
    }
    template <class S>
    Vec<S> eval_kind(const AffineCombination& a, const S& t) const
    {
        Vec<S> r{S(a.offset[0]), S(a.offset[1])};
        for (std::size_t i = 0; i < a.parts.size(); ++i) {
            const Vec<S> p = a.parts[i].at(t);
            r[0] = r[0] + a.weights[i] * p[0];
            r[1] = r[1] + a.weights[i] * p[1];
        }
        return r;
    }

    Kind kind_;
    bool reversed_ = false;
};

struct QuadDomain {
    ParametricCurve ab, bc, cd, ad;
    std::array<Vec2, 4> vertices{};
    std::string name;

    const ParametricCurve& edge(Edge e) const;
    Vec2 vertex(Vertex v) const { return vertices[static_cast<int>(v)]; }
};

inline constexpr double kCornerTolerance = 1e-10;

// Vertices are taken from curve endpoints; throws CornerMismatch beyond 1e-10.
QuadDomain make_quad(ParametricCurve ab, ParametricCurve bc, ParametricCurve cd,
                     ParametricCurve ad, std::string name = {});

QuadDomain catalog(const std::string& name);
std::vector<std::string> catalog_names();

// Map kind the catalog designates for a domain ("coons" or "coons_center").
std::string designated_map_kind(const std::string& name);

// Straight-edged quadrilateral through four vertices.
QuadDomain straight_quad(Vec2 a, Vec2 b, Vec2 c, Vec2 d, std::string name = {});

}  // namespace hbc
