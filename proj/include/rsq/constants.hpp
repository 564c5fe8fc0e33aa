// Physical constants in SI units.
#pragma once

namespace rsq::constants {

inline constexpr double hbar = 1.054571817e-34;       // reduced Planck constant, J s
inline constexpr double c0 = 299792458.0;             // vacuum speed of light, m/s
inline constexpr double eps0 = 8.8541878128e-12;      // vacuum permittivity, F/m
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

} // namespace rsq::constants
