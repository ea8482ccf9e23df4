#pragma once

// Physical constants (SI, CODATA 2018 exact values where defined).

namespace raresim::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double speed_of_light = 299792458.0;            // m/s
inline constexpr double planck = 6.62607015e-34;                 // J s
inline constexpr double hbar = planck / two_pi;                  // J s
inline constexpr double boltzmann = 1.380649e-23;                // J/K
inline constexpr double elementary_charge = 1.602176634e-19;     // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double vacuum_impedance = 376.730313668;        // Ohm

// Conversion helpers
inline constexpr double bohr_radius = 5.29177210903e-11;               // m
inline constexpr double e_times_a0 = elementary_charge * bohr_radius;  // C m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;          // kg

}  // namespace raresim::constants
