#include "pathspin/measurement.hpp"

#include <cmath>

namespace pathspin {

PathObservable::PathObservable(double theta, double phi)
    : theta_(theta), phi_(phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw std::invalid_argument("path observable: non-finite angle");
  }
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  matrix_ = Herm2::from_rows(-c, s, s, c);
}

SpinObservable::SpinObservable(const std::array<double, 3>& bloch_direction) {
  const double len = std::sqrt(bloch_direction[0] * bloch_direction[0] +
                               bloch_direction[1] * bloch_direction[1] +
                               bloch_direction[2] * bloch_direction[2]);
  if (!std::isfinite(len) || std::abs(len - 1.0) > kNormPreconditionTol) {
    throw std::invalid_argument("spin observable: direction is not unit length");
  }
  for (int i = 0; i < 3; ++i) n_[i] = bloch_direction[i] / len;
  matrix_ = Herm2::from_rows(n_[2], Cx(n_[0], -n_[1]), Cx(n_[0], n_[1]), -n_[2]);
}

SpinObservable SpinObservable::from_polar(double polar, double azimuth) {
  return SpinObservable({std::sin(polar) * std::cos(azimuth),
                         std::sin(polar) * std::sin(azimuth),
                         std::cos(polar)});
}

namespace {

double clamped_probability(const Vec4& state, const Herm4& projector) {
  double p = expectation(state, projector);
  if (p < kProbabilityFloor) {
    throw InvariantError("joint_distribution: negative probability");
  }
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return p;
}

}  // namespace

JointDistribution joint_distribution(const Vec4& state, const PathObservable& a,
                                     const SpinObservable& b) {
  const auto [pa_plus, pa_minus] = projectors_of(a.matrix());
  const auto [pb_plus, pb_minus] = projectors_of(b.matrix());
  JointDistribution d;
  d.p_pp = clamped_probability(state, tensor(pa_plus, pb_plus));
  d.p_pm = clamped_probability(state, tensor(pa_plus, pb_minus));
  d.p_mp = clamped_probability(state, tensor(pa_minus, pb_plus));
  d.p_mm = clamped_probability(state, tensor(pa_minus, pb_minus));
  if (std::abs(d.p_pp + d.p_pm + d.p_mp + d.p_mm - 1.0) > 1e-10) {
    throw InvariantError("joint_distribution: probabilities do not sum to 1");
  }
  return d;
}

double correlation(const Vec4& state, const PathObservable& a,
                   const SpinObservable& b) {
  return expectation(state, tensor(a.matrix(), b.matrix()));
}

}  // namespace pathspin
