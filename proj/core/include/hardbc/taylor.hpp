#pragma once

#include <array>
#include <cmath>

namespace hbc {

// Truncated Taylor polynomial in N (1 or 2) variables, total degree D.
// Coefficients are normalized: c(i,j) = d^{i+j}f / (dx^i dy^j) / (i! j!).
template <int N, int D>
class Taylor {
    static_assert(N == 1 || N == 2, "one or two variables");
    static_assert(D >= 0 && D <= 4, "degree 0..4");

public:
    static constexpr int kSide = D + 1;
    static constexpr int kSize = N == 1 ? kSide : kSide * kSide;

    Taylor() { c_.fill(0.0); }
    Taylor(double v) {  // NOLINT: implicit constants keep formulas readable
        c_.fill(0.0);
        c_[0] = v;
    }

    static Taylor variable(int k, double x0)
    {
        Taylor t(x0);
        if (D >= 1) t.coef_ref(k == 0 ? 1 : 0, k == 0 ? 0 : 1) = 1.0;
        return t;
    }

    double value() const { return c_[0]; }
    double coef(int i, int j = 0) const
    {
        if (i < 0 || j < 0 || i + j > D || (N == 1 && j != 0)) return 0.0;
        return c_[idx(i, j)];
    }
    double& coef_ref(int i, int j = 0) { return c_[idx(i, j)]; }

    // Actual partial derivative d^{i+j} / dx^i dy^j.
    double deriv(int i, int j = 0) const { return coef(i, j) * fact(i) * fact(j); }

    Taylor& operator+=(const Taylor& o)
    {
        for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
        return *this;
    }
    Taylor& operator-=(const Taylor& o)
    {
        for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Taylor& operator*=(double s)
    {
        for (auto& v : c_) v *= s;
        return *this;
    }
    Taylor operator-() const
    {
        Taylor r(*this);
        r *= -1.0;
        return r;
    }

    friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
    friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
    friend Taylor operator+(Taylor a, double b) { a.c_[0] += b; return a; }
    friend Taylor operator+(double b, Taylor a) { a.c_[0] += b; return a; }
    friend Taylor operator-(Taylor a, double b) { a.c_[0] -= b; return a; }
    friend Taylor operator-(double b, const Taylor& a) { Taylor r = -a; r.c_[0] += b; return r; }
    friend Taylor operator*(Taylor a, double s) { return a *= s; }
    friend Taylor operator*(double s, Taylor a) { return a *= s; }
    friend Taylor operator/(Taylor a, double s) { return a *= 1.0 / s; }

    friend Taylor operator*(const Taylor& a, const Taylor& b)
    {
        Taylor r;
        if constexpr (N == 1) {
            for (int i = 0; i <= D; ++i)
                for (int k = 0; k <= D - i; ++k) r.c_[i + k] += a.c_[i] * b.c_[k];
        } else {
            for (int i1 = 0; i1 <= D; ++i1)
                for (int j1 = 0; j1 <= D - i1; ++j1) {
                    const double av = a.c_[idx(i1, j1)];
                    if (av == 0.0) continue;
                    for (int i2 = 0; i2 <= D - i1 - j1; ++i2)
                        for (int j2 = 0; j2 <= D - i1 - j1 - i2; ++j2)
                            r.c_[idx(i1 + i2, j1 + j2)] += av * b.c_[idx(i2, j2)];
                }
        }
        return r;
    }
    Taylor& operator*=(const Taylor& o) { return *this = *this * o; }

    // f(u) given the derivatives f^(k)(u0), k = 0..D, at u0 = u.value().
    Taylor compose(const std::array<double, D + 1>& fd) const
    {
        Taylor delta(*this);
        delta.c_[0] = 0.0;
        Taylor r(fd[D] / fact(D));
        for (int k = D - 1; k >= 0; --k) {
            r = r * delta;
            r.c_[0] += fd[k] / fact(k);
        }
        return r;
    }

    friend Taylor inverse(const Taylor& u)
    {
        std::array<double, D + 1> fd{};
        const double u0 = u.value();
        double p = 1.0 / u0;
        for (int k = 0; k <= D; ++k) {
            fd[k] = p * fact(k) * ((k % 2) ? -1.0 : 1.0);
            p /= u0;
        }
        return u.compose(fd);
    }
    friend Taylor operator/(const Taylor& a, const Taylor& b) { return a * inverse(b); }
    friend Taylor operator/(double a, const Taylor& b) { return a * inverse(b); }

    friend Taylor sin(const Taylor& u)
    {
        std::array<double, D + 1> fd{};
        const double s = std::sin(u.value()), c = std::cos(u.value());
        for (int k = 0; k <= D; ++k) {
            const int m = k % 4;
            fd[k] = m == 0 ? s : m == 1 ? c : m == 2 ? -s : -c;
        }
        return u.compose(fd);
    }
    friend Taylor cos(const Taylor& u)
    {
        std::array<double, D + 1> fd{};
        const double s = std::sin(u.value()), c = std::cos(u.value());
        for (int k = 0; k <= D; ++k) {
            const int m = k % 4;
            fd[k] = m == 0 ? c : m == 1 ? -s : m == 2 ? -c : s;
        }
        return u.compose(fd);
    }
    friend Taylor exp(const Taylor& u)
    {
        std::array<double, D + 1> fd{};
        fd.fill(std::exp(u.value()));
        return u.compose(fd);
    }
    friend Taylor sqrt(const Taylor& u)
    {
        std::array<double, D + 1> fd{};
        const double u0 = u.value();
        double e = 0.5, p = std::sqrt(u0);
        fd[0] = p;
        double coef = 1.0;
        for (int k = 1; k <= D; ++k) {
            coef *= (e - (k - 1));
            fd[k] = coef * p / std::pow(u0, k);
        }
        return u.compose(fd);
    }

private:
    static constexpr int idx(int i, int j) { return i + kSide * j; }
    static constexpr double fact(int k)
    {
        double f = 1.0;
        for (int m = 2; m <= k; ++m) f *= m;
        return f;
    }

    std::array<double, kSize> c_;
};

using EdgeJet = Taylor<1, 2>;

// Scalar helpers so templated formulas work with double and Taylor alike.
inline double value_of(double v) { return v; }
template <int N, int D>
double value_of(const Taylor<N, D>& t) { return t.value(); }

// Reparameterize s -> -s: odd coefficients flip sign.
template <int D>
Taylor<1, D> reflect(const Taylor<1, D>& t)
{
    Taylor<1, D> r(t);
    for (int k = 1; k <= D; k += 2) r.coef_ref(k) = -r.coef(k);
    return r;
}

}  // namespace hbc
