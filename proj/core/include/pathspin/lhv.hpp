// Noncontextual hidden-variable models: deterministic +-1 value assignments
// to the quadruple (A1, A2, B1, B2) and probability mixtures over the 16
// possible assignments. For every assignment
//
//   a1 b1 + a1 b2 + a2 b1 - a2 b2 = +-2,
//
// so every mixture satisfies |S| <= 2. This is the most general
// noncontextual model for four dichotomic observables; no assumption about
// hidden-variable distribution functions is needed beyond the mixture
// weights themselves.

#pragma once

#include <array>
#include <cstddef>

#include "pathspin/rng.hpp"

namespace pathspin {

struct LhvAssignment {
  int a1 = +1;
  int a2 = +1;
  int b1 = +1;
  int b2 = +1;

  int a(int index) const { return index == 1 ? a1 : a2; }
  int b(int index) const { return index == 1 ? b1 : b2; }
};

/// All 16 assignments in canonical order: binary counting on
/// (a1, a2, b1, b2) with +1 as the 0 bit, b2 least significant.
const std::array<LhvAssignment, 16>& enumerate_assignments();

/// a1 b1 + a1 b2 + a2 b1 - a2 b2; always +-2.
int chsh_combination(const LhvAssignment& x);

/// Probability distribution over the 16 deterministic assignments,
/// in canonical order. Weights must be non-negative and sum to 1 within
/// 1e-12.
class LhvModel {
 public:
  explicit LhvModel(const std::array<double, 16>& weights);

  static LhvModel uniform();
  static LhvModel point_mass(std::size_t assignment_index);

  double weight(std::size_t i) const { return weights_[i]; }
  const std::array<double, 16>& weights() const { return weights_; }

 private:
  std::array<double, 16> weights_;
};

/// Model-averaged S = sum_x w(x) chsh_combination(x); |result| <= 2 for any model.
double lhv_chsh(const LhvModel& model);

/// One assignment drawn by cumulative weights; deterministic given the
/// generator state. One generator per thread of execution.
LhvAssignment sample_assignment(const LhvModel& model, Rng& rng);

}  // namespace pathspin
