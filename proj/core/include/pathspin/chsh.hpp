// The Bell/noncontextuality combination
//
//   S = <A1 B1> + <A1 B2> + <A2 B1> - <A2 B2>
//
// evaluated exactly on a state, and a deterministic settings optimizer that
// maximizes |S| over the path angles theta1, theta2 and the Stern-Gerlach
// orientations.

#pragma once

#include <array>

#include "pathspin/linalg.hpp"
#include "pathspin/measurement.hpp"

namespace pathspin {

struct ChshSettings {
  PathObservable a1;
  PathObservable a2;
  SpinObservable b1;
  SpinObservable b2;
};

struct ChshResult {
  double e11 = 0.0;
  double e12 = 0.0;
  double e21 = 0.0;
  double e22 = 0.0;
  double s = 0.0;
  bool violated = false;  // |s| > 2, no tolerance band
};

/// Angle parameterization of a settings quadruple: path angles plus spin
/// polar/azimuth pairs. Azimuth 0 keeps the spin directions in the x-z
/// plane, which is where the optimum lives for delta = pi preparations.
struct SettingsAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double b1_polar = 0.0;
  double b2_polar = 0.0;
  double b1_azimuth = 0.0;
  double b2_azimuth = 0.0;

  ChshSettings build() const;
};

struct OptimizerOptions {
  int grid_resolution = 64;     // coarse grid points per angle
  int refine_iterations = 40;   // coordinate-descent sweeps
  double refine_shrink = 0.7;   // bracket shrink factor per sweep, in (0,1)
  bool full_sphere = false;     // search spin azimuths too (needed off the
                                // delta = pi family)

  void validate() const;
};

struct OptimizationResult {
  SettingsAngles angles;
  ChshResult exact;   // chsh_value at the returned settings
  double s_max = 0.0; // |exact.s|
};

/// The four correlations via the exact measurement pipeline; s as defined
/// above; violated iff |s| > 2.
ChshResult chsh_value(const Vec4& state, const ChshSettings& settings);

/// 3x3 matrix t[i][j] = <sigma_i (x) sigma_j> on the state. Any product
/// correlation is then axis_a . t . axis_b.
using CorrelationMatrix = std::array<std::array<double, 3>, 3>;
CorrelationMatrix correlation_matrix(const Vec4& state);

/// Deterministic coarse grid scan (exact maximum over the grid, first-found
/// tie-break) followed by coordinate-descent refinement with geometrically
/// shrinking brackets. No randomness: identical inputs give identical
/// results. Both signs of S are refined and the larger |S| wins.
OptimizationResult optimize_settings(const Vec4& state,
                                     const OptimizerOptions& opts = {});

}  // namespace pathspin
