#include "pathspin/preparation.hpp"

#include <cmath>
#include <numbers>

namespace pathspin {

namespace {

double canonical_angle(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

}  // namespace

void PreparationConfig::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(delta)) {
    throw std::invalid_argument("prep_a/prep_b/prep_delta: non-finite value");
  }
  if (a < 0.0 || b < 0.0) {
    throw std::invalid_argument("prep_a/prep_b: amplitudes must be non-negative");
  }
  if (std::abs(a * a + b * b - 1.0) > kNormConstructionTol) {
    throw std::invalid_argument(
        "prep_a/prep_b: a^2 + b^2 must equal 1 within 1e-12");
  }
}

PathSpinState prepare_state(const PreparationConfig& cfg) {
  cfg.validate();
  PreparationConfig canon = cfg;
  canon.delta = canonical_angle(cfg.delta);
  PathSpinState state;
  state.provenance = canon;
  state.vec.c = {Cx(0.0), Cx(cfg.a), std::polar(cfg.b, canon.delta), Cx(0.0)};
  return state;
}

PathSpinState maximally_entangled() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return prepare_state({inv_sqrt2, inv_sqrt2, std::numbers::pi});
}

}  // namespace pathspin
