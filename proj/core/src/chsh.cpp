#include "pathspin/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace pathspin {

namespace {
constexpr double kPi = std::numbers::pi;
}

ChshSettings SettingsAngles::build() const {
  return {PathObservable(theta1), PathObservable(theta2),
          SpinObservable::from_polar(b1_polar, b1_azimuth),
          SpinObservable::from_polar(b2_polar, b2_azimuth)};
}

void OptimizerOptions::validate() const {
  if (grid_resolution < 1) {
    throw std::invalid_argument("grid_resolution: must be positive");
  }
  if (refine_iterations < 0) {
    throw std::invalid_argument("refine_iterations: must be non-negative");
  }
  if (!(refine_shrink > 0.0 && refine_shrink < 1.0)) {
    throw std::invalid_argument("refine_shrink: must lie in (0, 1)");
  }
}

ChshResult chsh_value(const Vec4& state, const ChshSettings& settings) {
  ChshResult r;
  r.e11 = correlation(state, settings.a1, settings.b1);
  r.e12 = correlation(state, settings.a1, settings.b2);
  r.e21 = correlation(state, settings.a2, settings.b1);
  r.e22 = correlation(state, settings.a2, settings.b2);
  r.s = r.e11 + r.e12 + r.e21 - r.e22;
  r.violated = std::abs(r.s) > 2.0;
  return r;
}

CorrelationMatrix correlation_matrix(const Vec4& state) {
  const std::array<Herm2, 3> sigma = {pauli_x(), pauli_y(), pauli_z()};
  CorrelationMatrix t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      t[i][j] = expectation(state, tensor(sigma[i], sigma[j]));
    }
  }
  return t;
}

namespace {

using Axis = std::array<double, 3>;

// Bloch axis of the path observable A(theta): A = sin(2t) sx - cos(2t) sz,
// so the reachable axes sweep the x-z circle with period pi in theta.
Axis path_axis(double theta) {
  return {std::sin(2.0 * theta), 0.0, -std::cos(2.0 * theta)};
}

Axis spin_axis(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth),
          std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

double axis_correlation(const CorrelationMatrix& t, const Axis& a, const Axis& n) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r += a[i] * t[i][j] * n[j];
  }
  return r;
}

double combination_s(const CorrelationMatrix& t, const SettingsAngles& ang) {
  const Axis a1 = path_axis(ang.theta1);
  const Axis a2 = path_axis(ang.theta2);
  const Axis n1 = spin_axis(ang.b1_polar, ang.b1_azimuth);
  const Axis n2 = spin_axis(ang.b2_polar, ang.b2_azimuth);
  return axis_correlation(t, a1, n1) + axis_correlation(t, a1, n2) +
         axis_correlation(t, a2, n1) - axis_correlation(t, a2, n2);
}

// Exact maximum of sign*S over the full coarse grid. S is separable in
// (theta1, theta2) once (B1, B2) are fixed, so the 4-angle scan reduces to
// O(n_spin^2 * n_theta) with the same result and the same first-found
// argmax as the naive lexicographic scan over (b1, b2, theta1, theta2).
struct CoarseBest {
  double value;
  SettingsAngles angles;
};

CoarseBest coarse_scan(const CorrelationMatrix& t, int resolution,
                       bool full_sphere, double sign) {
  const int n_theta = resolution;
  const int n_polar = resolution;
  const int n_azimuth = full_sphere ? std::max(4, resolution / 8) : 1;
  const double theta_step = kPi / n_theta;
  const double polar_step = 2.0 * kPi / n_polar;
  const double azimuth_step = kPi / n_azimuth;

  struct SpinPoint {
    double polar;
    double azimuth;
  };
  std::vector<SpinPoint> spin;
  spin.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  for (int j = 0; j < n_polar; ++j) {
    for (int k = 0; k < n_azimuth; ++k) {
      spin.push_back({j * polar_step, k * azimuth_step});
    }
  }

  // corr[i][b]: correlation of A(theta_i) with B(spin[b]), sign applied.
  const std::size_t nb = spin.size();
  std::vector<double> corr(static_cast<std::size_t>(n_theta) * nb);
  for (int i = 0; i < n_theta; ++i) {
    const Axis a = path_axis(i * theta_step);
    for (std::size_t b = 0; b < nb; ++b) {
      corr[i * nb + b] =
          sign * axis_correlation(t, a, spin_axis(spin[b].polar, spin[b].azimuth));
    }
  }

  CoarseBest best{-std::numeric_limits<double>::infinity(), {}};
  for (std::size_t b1 = 0; b1 < nb; ++b1) {
    for (std::size_t b2 = 0; b2 < nb; ++b2) {
      double sum_best = -std::numeric_limits<double>::infinity();
      double diff_best = -std::numeric_limits<double>::infinity();
      int sum_arg = 0;
      int diff_arg = 0;
      for (int i = 0; i < n_theta; ++i) {
        const double c1 = corr[i * nb + b1];
        const double c2 = corr[i * nb + b2];
        if (c1 + c2 > sum_best) {
          sum_best = c1 + c2;
          sum_arg = i;
        }
        if (c1 - c2 > diff_best) {
          diff_best = c1 - c2;
          diff_arg = i;
        }
      }
      const double value = sum_best + diff_best;
      if (value > best.value) {
        best.value = value;
        best.angles = {sum_arg * theta_step,    diff_arg * theta_step,
                       spin[b1].polar,          spin[b2].polar,
                       spin[b1].azimuth,        spin[b2].azimuth};
      }
    }
  }
  return best;
}

// Coordinate descent on sign*S with per-angle brackets that shrink by
// refine_shrink each sweep. Nine candidates per bracket; strict improvement
// moves, ties keep the current point.
SettingsAngles refine(const CorrelationMatrix& t, SettingsAngles angles,
                      double sign, const OptimizerOptions& opts,
                      double theta_width, double polar_width,
                      double azimuth_width) {
  double* coords[6] = {&angles.theta1,   &angles.theta2, &angles.b1_polar,
                       &angles.b2_polar, &angles.b1_azimuth, &angles.b2_azimuth};
  double widths[6] = {theta_width, theta_width,   polar_width,
                      polar_width, azimuth_width, azimuth_width};
  const int n_coords = opts.full_sphere ? 6 : 4;

  double best = sign * combination_s(t, angles);
  for (int iter = 0; iter < opts.refine_iterations; ++iter) {
    for (int ci = 0; ci < n_coords; ++ci) {
      const double center = *coords[ci];
      double best_coord = center;
      for (int k = -4; k <= 4; ++k) {
        if (k == 0) continue;
        *coords[ci] = center + widths[ci] * (k / 4.0);
        const double v = sign * combination_s(t, angles);
        if (v > best) {
          best = v;
          best_coord = *coords[ci];
        }
      }
      *coords[ci] = best_coord;
    }
    for (double& w : widths) w *= opts.refine_shrink;
  }
  return angles;
}

}  // namespace

OptimizationResult optimize_settings(const Vec4& state,
                                     const OptimizerOptions& opts) {
  opts.validate();
  const CorrelationMatrix t = correlation_matrix(state);

  const double theta_width = kPi / opts.grid_resolution;
  const double polar_width = 2.0 * kPi / opts.grid_resolution;
  const double azimuth_width =
      opts.full_sphere ? kPi / std::max(4, opts.grid_resolution / 8) : 0.0;

  OptimizationResult best;
  best.s_max = -1.0;
  for (const double sign : {+1.0, -1.0}) {
    const CoarseBest coarse =
        coarse_scan(t, opts.grid_resolution, opts.full_sphere, sign);
    const SettingsAngles refined = refine(t, coarse.angles, sign, opts,
                                          theta_width, polar_width, azimuth_width);
    const ChshResult exact = chsh_value(state, refined.build());
    if (std::abs(exact.s) > best.s_max) {
      best.angles = refined;
      best.exact = exact;
      best.s_max = std::abs(exact.s);
    }
  }
  return best;
}

}  // namespace pathspin
