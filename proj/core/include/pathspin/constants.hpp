#pragma once

namespace pathspin {

// CODATA values, SI units.
inline constexpr double kHbar = 1.054571817e-34;           // J s
inline constexpr double kNeutronMass = 1.67492749804e-27;  // kg

}  // namespace pathspin
