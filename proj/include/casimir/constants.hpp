#pragma once

#include <numbers>

namespace casimir {

namespace constants {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018, SI.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double hbar_eVs = 6.582119569e-16;    // eV s
inline constexpr double c = 299792458.0;               // m / s
inline constexpr double k_B = 1.380649e-23;            // J / K
inline constexpr double k_B_eV = 8.617333262e-5;       // eV / K
inline constexpr double epsilon_0 = 8.8541878128e-12;  // F / m
inline constexpr double hbar_c_eVnm = 197.3269804;     // eV nm

}  // namespace constants

namespace units {

inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double pN = 1e-12;

/// Angular frequency (rad/s) of a photon energy given in eV.
constexpr double ev_to_rad_per_s(double energy_eV) { return energy_eV / constants::hbar_eVs; }
constexpr double rad_per_s_to_ev(double omega) { return omega * constants::hbar_eVs; }

// 1 N/V^2 = 1e12 pN / 1e6 mV^2
inline constexpr double newton_per_V2_to_pN_per_mV2 = 1e6;

constexpr double deg_to_rad(double deg) { return deg * constants::pi / 180.0; }

}  // namespace units

}  // namespace casimir
