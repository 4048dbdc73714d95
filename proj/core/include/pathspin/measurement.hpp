// Dichotomic observables on the two factors and exact joint statistics.
//
// The path observable is built from the second beam splitter + phase
// shifter transfer matrix
//
//   (psi3)   (sin t e^{i phi}  cos t e^{i phi}) (psi1)
//   (psi4) = (cos t            -sin t         ) (psi2)
//
// as A = |psi3><psi3| - |psi4><psi4|; in the path basis that is
// [[-cos 2t, sin 2t], [sin 2t, cos 2t]]. The e^{i phi} factor multiplies
// both components of psi3, so it is a global phase on the eigenvector and
// drops out of A entirely; phi is kept in the type for fidelity to the
// device parameterization but is inert (see tests).
//
// Spin observables are n.sigma for a unit Bloch direction n, i.e. a
// Stern-Gerlach device oriented along n.

#pragma once

#include <array>

#include "pathspin/linalg.hpp"

namespace pathspin {

class PathObservable {
 public:
  /// Angles are taken as given (any real value; trigonometry wraps them).
  explicit PathObservable(double theta, double phi = 0.0);

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  const Herm2& matrix() const { return matrix_; }

 private:
  double theta_;
  double phi_;
  Herm2 matrix_;
};

class SpinObservable {
 public:
  /// Direction must be unit length within kNormPreconditionTol; it is then
  /// renormalized exactly so that matrix^2 = I holds to machine precision.
  explicit SpinObservable(const std::array<double, 3>& bloch_direction);

  /// Direction (sin p cos a, sin p sin a, cos p) from polar angle p
  /// (measured from +z) and azimuth a; azimuth 0 spans the x-z plane.
  static SpinObservable from_polar(double polar, double azimuth = 0.0);

  const std::array<double, 3>& direction() const { return n_; }
  const Herm2& matrix() const { return matrix_; }

 private:
  SpinObservable() = default;

  std::array<double, 3> n_{};
  Herm2 matrix_;
};

/// Joint outcome probabilities for (A, B) = (+,+), (+,-), (-,+), (-,-).
/// Sum to 1 within 1e-10; rounding negatives above kProbabilityFloor are
/// clamped to 0, anything lower is an invariant breach.
struct JointDistribution {
  double p_pp = 0.0;
  double p_pm = 0.0;
  double p_mp = 0.0;
  double p_mm = 0.0;
};

JointDistribution joint_distribution(const Vec4& state, const PathObservable& a,
                                     const SpinObservable& b);

/// <A (x) B> on the given state; equals the +-weighted sum of the joint
/// distribution within 1e-10 (the two routes are checked against each other
/// in the tests).
double correlation(const Vec4& state, const PathObservable& a,
                   const SpinObservable& b);

}  // namespace pathspin
