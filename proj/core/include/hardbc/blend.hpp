#pragma once

#include <array>

namespace hbc {

// Linear switching functions (phi0, phi1).
std::array<double, 2> linear_blend(double xi, int deriv);

// Cubic Hermite set (varphi0, varphi1, psi0, psi1).
std::array<double, 4> hermite_c1(double xi, int deriv);

// Quintic Hermite set (rho0, rho1, upsilon0, upsilon1, omega0, omega1).
std::array<double, 6> hermite_c2(double xi, int deriv);

// deriv accepts 0..3 for all three sets; order 3 is used internally when a
// profile has to be differentiated once more along an edge.

}  // namespace hbc
