#pragma once

namespace eitbec::constants {

// CODATA 2018 values; k_B and the derived hbar are exact in the 2019 SI.
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double k_boltzmann = 1.380649e-23;           // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg

// Isotope masses, for CLI convenience.
inline constexpr double mass_na23 = 22.98976928 * atomic_mass_unit; // kg

}  // namespace eitbec::constants
