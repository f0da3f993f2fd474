#pragma once

namespace dce::constants {

// CODATA 2018 values, SI units.
inline constexpr double c = 299'792'458.0;            // m/s
inline constexpr double hbar = 1.054'571'817e-34;     // J s
inline constexpr double k_boltzmann = 1.380'649e-23;  // J/K
inline constexpr double elementary_charge = 1.602'176'634e-19;  // C
inline constexpr double electron_mass = 9.109'383'7015e-31;     // kg

}  // namespace dce::constants
