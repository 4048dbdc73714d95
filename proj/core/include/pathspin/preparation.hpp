// State preparation: the first beam splitter with a spin flipper in the
// transmitted channel and a phase shifter in the reflected one turns an
// incident +z-polarized particle into an entangled path-spin state
//
//   a |up>_p |down>_z  +  b e^{i delta} |down>_p |up>_z .
//
// The incident spin is fixed to +z and all relative phase is carried by
// delta; a and b are non-negative real amplitudes with a^2 + b^2 = 1.

#pragma once

#include "pathspin/linalg.hpp"

namespace pathspin {

struct PreparationConfig {
  double a = 0.0;      // BS1 transmission amplitude, >= 0
  double b = 0.0;      // BS1 reflection amplitude, >= 0
  double delta = 0.0;  // PS1 phase, radians

  /// Throws std::invalid_argument unless a, b >= 0 and a^2 + b^2 = 1
  /// within kNormConstructionTol.
  void validate() const;
};

struct PathSpinState {
  Vec4 vec;                      // normalized within kNormConstructionTol
  PreparationConfig provenance;  // config this state was prepared from
};

/// Joint state after BS1 + SF + PS1. Components in the fixed joint basis:
/// (0, a, b cos(delta) + i b sin(delta), 0). delta is canonicalized to
/// [0, 2*pi).
PathSpinState prepare_state(const PreparationConfig& cfg);

/// The a = b = 1/sqrt(2), delta = pi special case (singlet-like form);
/// identical, component for component, to calling prepare_state with those
/// parameters.
PathSpinState maximally_entangled();

}  // namespace pathspin
