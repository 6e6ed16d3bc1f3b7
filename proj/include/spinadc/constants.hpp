#pragma once

// Physical constants in SI units. gamma0 is the gyromagnetic ratio with the
// vacuum permeability folded in, so a field given in A/m precesses at
// omega = gamma0 * H (rad/s).
namespace spinadc::constants {

inline constexpr double gamma0 = 2.2127e5;    // m/(A s)
inline constexpr double mu0 = 1.2566e-6;      // H/m
inline constexpr double k_boltzmann = 1.38e-23;  // J/K
inline constexpr double q_electron = 1.6e-19;    // C
inline constexpr double hbar = 1.054e-34;        // J s
inline constexpr double pi = 3.14159265358979323846;

// 1 Oe = 1000/(4*pi) A/m
inline constexpr double am_per_oersted = 1000.0 / (4.0 * pi);

}  // namespace spinadc::constants
