// Shot-level Monte Carlo of the interferometer arrangement: per-particle
// detector events with beam-splitter absorption and detector efficiency,
// count-based estimators of the correlations and of S, the finite-precision
// (misalignment) study, and the free-particle wave-packet spreading
// estimate.
//
// Detector naming: D3 fires for A = +1, D4 for A = -1; each splits by the
// Stern-Gerlach outcome into a primed (B = +1) and double-primed (B = -1)
// channel. Losses are outcome-independent (fair sampling).

#pragma once

#include <cstdint>
#include <variant>

#include "pathspin/chsh.hpp"
#include "pathspin/lhv.hpp"
#include "pathspin/linalg.hpp"
#include "pathspin/measurement.hpp"
#include "pathspin/rng.hpp"

namespace pathspin {

struct DetectorModel {
  double efficiency = 1.0;  // per detection attempt, in [0, 1]
  double absorption = 0.0;  // per beam-splitter traversal, in [0, 1]

  void validate() const;
};

struct CountRecord {
  std::uint64_t n3p = 0;   // A = +1, B = +1
  std::uint64_t n3pp = 0;  // A = +1, B = -1
  std::uint64_t n4p = 0;   // A = -1, B = +1
  std::uint64_t n4pp = 0;  // A = -1, B = -1
  std::uint64_t lost = 0;  // absorbed or undetected
  std::uint64_t shots = 0;

  std::uint64_t detected() const { return shots - lost; }
};

struct EstimatedCorrelation {
  double value = 0.0;    // in [-1, 1]
  double std_err = 0.0;  // sqrt((1 - value^2) / detected)
  std::uint64_t detected = 0;
};

struct ChshEstimate {
  double s_hat = 0.0;
  double s_err = 0.0;  // quadrature sum of the four standard errors
};

/// One record of `shots` particles measured jointly by A and B. Per shot:
/// two beam-splitter traversals each survive with probability
/// 1 - absorption, the outcome is drawn from the exact joint distribution,
/// and the event registers with probability `efficiency`, else it counts as
/// lost. Bit-reproducible for a fixed seed.
CountRecord simulate_counts(const Vec4& state, const PathObservable& a,
                            const SpinObservable& b, std::uint64_t shots,
                            const DetectorModel& det, std::uint64_t seed);

/// Same counting pipeline fed by a noncontextual model: per shot one
/// assignment answers both observables of the pair (a_index, b_index),
/// each in {1, 2}.
CountRecord simulate_counts_lhv(const LhvModel& model, int a_index, int b_index,
                                std::uint64_t shots, const DetectorModel& det,
                                std::uint64_t seed);

/// Per-event estimator (n3p - n3pp - n4p + n4pp) / detected.
EstimatedCorrelation estimate_correlation(const CountRecord& counts);

ChshEstimate estimate_chsh(const CountRecord& c11, const CountRecord& c12,
                           const CountRecord& c21, const CountRecord& c22);

struct QmSource {
  Vec4 state;
};

struct LhvSource {
  LhvModel model;
};

using ShotSource = std::variant<QmSource, LhvSource>;

struct ImprecisionSpec {
  double epsilon = 0.0;                  // angular jitter std. dev., radians
  std::uint64_t shots_per_setting = 0;   // per setting pair, per trial
  std::uint32_t trials = 0;
  double sigma_threshold = 5.0;          // violation margin multiplier

  void validate() const;
};

/// Fraction of independent trials whose estimate satisfies
/// s_hat - sigma_threshold * s_err > 2. Each trial perturbs theta1, theta2
/// and the two spin polar angles by independent Gaussian draws of std. dev.
/// epsilon (QM source; a noncontextual source has no angle dependence),
/// then simulates all four setting pairs. Per-trial seeds are derived from
/// the master seed by a fixed rule, so the result is bit-identical across
/// runs and across thread counts.
double violation_fraction(const ShotSource& source, const SettingsAngles& settings,
                          const ImprecisionSpec& spec, std::uint64_t seed,
                          const DetectorModel& det = {}, unsigned threads = 1);

struct WavePacketSpec {
  double sigma0 = 0.0;    // initial width, m
  double velocity = 0.0;  // mean velocity, m/s
  double distance = 0.0;  // flight path, m (0 allowed)
  double mass = 0.0;      // kg

  void validate() const;
};

struct WavePacketResult {
  double final_width = 0.0;  // m
  double delta = 0.0;        // final_width - sigma0
};

/// Free Gaussian dispersion: width(t) = sigma0 sqrt(1 + (hbar t / (2 m
/// sigma0^2))^2) at t = distance / velocity.
WavePacketResult wavepacket_spread(const WavePacketSpec& spec);

}  // namespace pathspin
