#include "hardbc/blend.hpp"

#include "hardbc/errors.hpp"

namespace hbc {

namespace {

// Power-basis coefficients c[0] + c[1] xi + ... of each basis polynomial.
constexpr double kLinear[2][2] = {{0.5, -0.5}, {0.5, 0.5}};

constexpr double kC1[4][4] = {
    {0.5, -0.75, 0.0, 0.25},
    {0.5, 0.75, 0.0, -0.25},
    {0.25, -0.25, -0.25, 0.25},
    {-0.25, -0.25, 0.25, 0.25},
};

constexpr double kC2[6][6] = {
    {0.5, -15.0 / 16, 0.0, 5.0 / 8, 0.0, -3.0 / 16},
    {0.5, 15.0 / 16, 0.0, -5.0 / 8, 0.0, 3.0 / 16},
    {5.0 / 16, -7.0 / 16, -3.0 / 8, 5.0 / 8, 1.0 / 16, -3.0 / 16},
    {-5.0 / 16, -7.0 / 16, 3.0 / 8, 5.0 / 8, -1.0 / 16, -3.0 / 16},
    {1.0 / 16, -1.0 / 16, -1.0 / 8, 1.0 / 8, 1.0 / 16, -1.0 / 16},
    {1.0 / 16, 1.0 / 16, -1.0 / 8, -1.0 / 8, 1.0 / 16, 1.0 / 16},
};

template <int Deg>
double poly_deriv(const double (&c)[Deg + 1], double x, int deriv)
{
    double r = 0.0;
    for (int k = Deg; k >= deriv; --k) {
        double f = 1.0;
        for (int m = 0; m < deriv; ++m) f *= (k - m);
        r = r * x + f * c[k];
    }
    return r;
}

void check_order(int deriv)
{
    if (deriv < 0 || deriv > 3)
        throw Error(ErrorKind::InvalidArgument, "basis derivative order must be 0..3");
}

}  // namespace

std::array<double, 2> linear_blend(double xi, int deriv)
{
    check_order(deriv);
    return {poly_deriv<1>(kLinear[0], xi, deriv), poly_deriv<1>(kLinear[1], xi, deriv)};
}

std::array<double, 4> hermite_c1(double xi, int deriv)
{
    check_order(deriv);
    std::array<double, 4> r{};
    for (int i = 0; i < 4; ++i) r[i] = poly_deriv<3>(kC1[i], xi, deriv);
    return r;
}

std::array<double, 6> hermite_c2(double xi, int deriv)
{
    check_order(deriv);
    std::array<double, 6> r{};
    for (int i = 0; i < 6; ++i) r[i] = poly_deriv<5>(kC2[i], xi, deriv);
    return r;
}

}  // namespace hbc
