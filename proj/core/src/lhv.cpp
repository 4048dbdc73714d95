#include "pathspin/lhv.hpp"

#include <cmath>
#include <stdexcept>

namespace pathspin {

const std::array<LhvAssignment, 16>& enumerate_assignments() {
  static const std::array<LhvAssignment, 16> table = [] {
    std::array<LhvAssignment, 16> t{};
    for (int i = 0; i < 16; ++i) {
      const auto sign = [i](int bit) { return ((i >> bit) & 1) == 0 ? +1 : -1; };
      t[i] = {sign(3), sign(2), sign(1), sign(0)};
    }
    return t;
  }();
  return table;
}

int chsh_combination(const LhvAssignment& x) {
  return x.a1 * x.b1 + x.a1 * x.b2 + x.a2 * x.b1 - x.a2 * x.b2;
}

LhvModel::LhvModel(const std::array<double, 16>& weights) : weights_(weights) {
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("lhv model: weights must be non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("lhv model: weights must sum to 1 within 1e-12");
  }
}

LhvModel LhvModel::uniform() {
  std::array<double, 16> w;
  w.fill(1.0 / 16.0);
  return LhvModel(w);
}

LhvModel LhvModel::point_mass(std::size_t assignment_index) {
  if (assignment_index >= 16) {
    throw std::invalid_argument("lhv model: assignment index out of range");
  }
  std::array<double, 16> w{};
  w[assignment_index] = 1.0;
  return LhvModel(w);
}

double lhv_chsh(const LhvModel& model) {
  const auto& table = enumerate_assignments();
  double s = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    s += model.weight(i) * chsh_combination(table[i]);
  }
  return s;
}

LhvAssignment sample_assignment(const LhvModel& model, Rng& rng) {
  const double u = rng.uniform();
  const auto& table = enumerate_assignments();
  double cum = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    cum += model.weight(i);
    if (u < cum) return table[i];
  }
  return table.back();  // u landed in the rounding gap below 1
}

}  // namespace pathspin
