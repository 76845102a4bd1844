#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <stdexcept>
#include <type_traits>

#include "hardbc/taylor.hpp"

namespace hbc {

// double for scalar evaluation, Eigen::ArrayXd for one entry per feature.
template <class A, class B>
using Mix = std::conditional_t<std::is_same_v<A, double> && std::is_same_v<B, double>, double,
                               Eigen::ArrayXd>;

// Derivatives d[0..n] of a function of one variable at a point.
template <class T>
struct Line {
    std::array<T, 4> d{};
    int n = -1;

    Line() = default;
    Line(const T& a, const T& b, const T& c, const T& e) : d{a, b, c, e}, n(3) {}
    Line(const T& a, const T& b, const T& c) : d{a, b, c, T{}}, n(2) {}

    const T& operator[](int k) const { return d[k]; }
};

inline Line<double> to_line(const EdgeJet& j) { return {j.deriv(0), j.deriv(1), j.deriv(2)}; }

template <std::size_t K>
Line<double> basis_line(std::array<double, K> (*fn)(double, int), double s, int which)
{
    return {fn(s, 0)[which], fn(s, 1)[which], fn(s, 2)[which], fn(s, 3)[which]};
}

// d/ds, one order lost.
template <class T>
Line<T> diff(const Line<T>& a)
{
    Line<T> r;
    r.n = a.n - 1;
    for (int k = 0; k <= r.n; ++k) r.d[k] = a.d[k + 1];
    return r;
}

template <class A, class B>
Line<Mix<A, B>> operator+(const Line<A>& a, const Line<B>& b)
{
    Line<Mix<A, B>> r;
    r.n = std::min(a.n, b.n);
    for (int k = 0; k <= r.n; ++k) r.d[k] = a.d[k] + b.d[k];
    return r;
}

template <class A, class B>
Line<Mix<A, B>> operator-(const Line<A>& a, const Line<B>& b)
{
    Line<Mix<A, B>> r;
    r.n = std::min(a.n, b.n);
    for (int k = 0; k <= r.n; ++k) r.d[k] = a.d[k] - b.d[k];
    return r;
}

template <class A, class B>
Line<Mix<A, B>> operator*(const Line<A>& a, const Line<B>& b)
{
    static constexpr double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    Line<Mix<A, B>> r;
    r.n = std::min(a.n, b.n);
    for (int k = 0; k <= r.n; ++k) {
        Mix<A, B> s = a.d[0] * b.d[k];
        for (int i = 1; i <= k; ++i) s = s + binom[k][i] * (a.d[i] * b.d[k - i]);
        r.d[k] = s;
    }
    return r;
}

// Constant times a line; the constant may be a per-feature array.
template <class C, class B>
Line<Mix<C, B>> operator*(const C& c, const Line<B>& b)
    requires(std::is_same_v<C, double> || std::is_same_v<C, Eigen::ArrayXd>)
{
    Line<Mix<C, B>> r;
    r.n = b.n;
    for (int k = 0; k <= r.n; ++k) r.d[k] = c * b.d[k];
    return r;
}

// Second-order jet of a function of (xi, eta): v, xi, eta, xixi, xieta, etaeta.
template <class T>
struct Jet2 {
    std::array<T, 6> d{};
    T& operator[](int k) { return d[k]; }
    const T& operator[](int k) const { return d[k]; }
};

enum JetIndex { kV = 0, kXi = 1, kEta = 2, kXiXi = 3, kXiEta = 4, kEtaEta = 5 };

// a(xi) * b(eta).
template <class A, class B>
Jet2<Mix<A, B>> outer(const Line<A>& a, const Line<B>& b)
{
    if (a.n < 2 || b.n < 2) throw std::logic_error("outer: line carries fewer than 2 derivatives");
    Jet2<Mix<A, B>> r;
    r.d[kV] = a.d[0] * b.d[0];
    r.d[kXi] = a.d[1] * b.d[0];
    r.d[kEta] = a.d[0] * b.d[1];
    r.d[kXiXi] = a.d[2] * b.d[0];
    r.d[kXiEta] = a.d[1] * b.d[1];
    r.d[kEtaEta] = a.d[0] * b.d[2];
    return r;
}

template <class A, class B>
Jet2<Mix<A, B>> operator+(const Jet2<A>& a, const Jet2<B>& b)
{
    Jet2<Mix<A, B>> r;
    for (int k = 0; k < 6; ++k) r.d[k] = a.d[k] + b.d[k];
    return r;
}

template <class A, class B>
Jet2<Mix<A, B>> operator-(const Jet2<A>& a, const Jet2<B>& b)
{
    Jet2<Mix<A, B>> r;
    for (int k = 0; k < 6; ++k) r.d[k] = a.d[k] - b.d[k];
    return r;
}

// Partial derivatives d^{a+b} f / dxi^a deta^b at one point, a + b <= 4.
template <class T>
struct PartialTable {
    std::array<std::array<T, 5>, 5> p{};
    const T& operator()(int a, int b) const { return p[a][b]; }
    T& operator()(int a, int b) { return p[a][b]; }

    Jet2<T> jet() const
    {
        return Jet2<T>{{p[0][0], p[1][0], p[0][1], p[2][0], p[1][1], p[0][2]}};
    }
};

}  // namespace hbc
