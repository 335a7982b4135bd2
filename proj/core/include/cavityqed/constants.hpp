#pragma once

#include <numbers>

namespace cavityqed::constants {

// CODATA 2018 values, SI units.
inline constexpr double c0 = 299792458.0;             // m/s
inline constexpr double mu0 = 1.25663706212e-6;       // H/m
inline constexpr double eps0 = 8.8541878128e-12;      // F/m
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double planck = 6.62607015e-34;      // J s
inline constexpr double e_charge = 1.602176634e-19;   // C

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace cavityqed::constants

namespace cavityqed::units {

inline constexpr double mm = 1e-3;
inline constexpr double us = 1e-6;
inline constexpr double fF = 1e-15;
inline constexpr double nH = 1e-9;
inline constexpr double GHz = 1e9;
inline constexpr double MHz = 1e6;

/// Angular frequency (rad/s) from a frequency in GHz.
constexpr double omega_from_ghz(double f_ghz) { return constants::two_pi * f_ghz * GHz; }
constexpr double ghz_from_omega(double omega) { return omega / (constants::two_pi * GHz); }
constexpr double mhz_from_omega(double omega) { return omega / (constants::two_pi * MHz); }

}  // namespace cavityqed::units
