#include "pathspin/chsh.hpp"

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "pathspin/preparation.hpp"
#include "pathspin/rng.hpp"
#include "support/oracles.hpp"

using namespace pathspin;

namespace {

constexpr double kPi = std::numbers::pi;
const double kTsirelson = 2.0 * std::sqrt(2.0);

SettingsAngles optimal_angles() {
  return {kPi / 2.0, kPi / 4.0, 5.0 * kPi / 4.0, 3.0 * kPi / 4.0};
}

Vec4 random_state(Rng& rng) {
  Vec4 v;
  double norm2 = 0.0;
  for (Cx& z : v.c) {
    z = Cx(rng.gaussian(1.0), rng.gaussian(1.0));
    norm2 += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (Cx& z : v.c) z *= inv;
  return v;
}

SettingsAngles random_angles(Rng& rng) {
  return {2.0 * kPi * rng.uniform(), 2.0 * kPi * rng.uniform(),
          2.0 * kPi * rng.uniform(), 2.0 * kPi * rng.uniform(),
          2.0 * kPi * rng.uniform(), 2.0 * kPi * rng.uniform()};
}

oracle::V4 to_oracle(const Vec4& v) { return {v.c[0], v.c[1], v.c[2], v.c[3]}; }

}  // namespace

TEST_CASE("chsh_value: singlet-like state at the optimal settings") {
  const Vec4 psi = maximally_entangled().vec;
  const ChshResult r = chsh_value(psi, optimal_angles().build());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(r.e11 == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(r.e12 == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(r.e21 == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(r.e22 == doctest::Approx(-inv_sqrt2).epsilon(1e-12));
  CHECK(std::abs(r.s - kTsirelson) <= 1e-12);
  CHECK(r.violated);

  // A modest dense grid containing these exact settings confirms they are
  // the global maximum over the grid.
  CHECK(oracle::grid_max_abs_s(to_oracle(psi), 128) ==
        doctest::Approx(kTsirelson).epsilon(1e-12));
}

TEST_CASE("chsh_value: degenerate settings collapse to twice one correlation") {
  const Vec4 psi = maximally_entangled().vec;
  const SettingsAngles ang{kPi / 2.0, kPi / 2.0, 0.0, 0.0};
  const ChshResult r = chsh_value(psi, ang.build());
  CHECK(r.s == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK_FALSE(r.violated);
}

TEST_CASE("chsh_value: product state at the optimal settings") {
  const Vec4 product{{0.0, 1.0, 0.0, 0.0}};
  const ChshResult r = chsh_value(product, optimal_angles().build());
  CHECK(r.s == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_FALSE(r.violated);
}

TEST_CASE("optimize_settings: recovers the quantum maximum from a cold start") {
  const auto res = optimize_settings(maximally_entangled().vec);
  CHECK(std::abs(res.s_max - kTsirelson) <= 1e-6);
  // The returned settings reproduce the value through the exact pipeline.
  const ChshResult check = chsh_value(maximally_entangled().vec, res.angles.build());
  CHECK(std::abs(std::abs(check.s) - res.s_max) <= 1e-12);
}

TEST_CASE("optimize_settings: product state maximum is the classical bound") {
  const auto res = optimize_settings(prepare_state({1.0, 0.0, 0.0}).vec);
  CHECK(std::abs(res.s_max - 2.0) <= 1e-6);
}

TEST_CASE("optimize_settings: partially entangled state, closed form") {
  const auto res = optimize_settings(prepare_state({0.6, 0.8, kPi}).vec);
  CHECK(std::abs(res.s_max - 2.772436) <= 1e-4);
  CHECK(std::abs(res.s_max - 2.0 * std::sqrt(1.0 + 4.0 * 0.36 * 0.64)) <= 1e-9);
}

TEST_CASE("optimize_settings: full sphere recovers the delta != pi maximum") {
  const Vec4 psi = prepare_state({0.6, 0.8, kPi / 2.0}).vec;
  // Restricted to the x-z plane the best reachable value is the classical 2.
  const auto flat = optimize_settings(psi);
  CHECK(std::abs(flat.s_max - 2.0) <= 1e-6);
  OptimizerOptions full;
  full.full_sphere = true;
  const auto res = optimize_settings(psi, full);
  CHECK(std::abs(res.s_max - 2.0 * std::sqrt(1.0 + 4.0 * 0.36 * 0.64)) <= 1e-6);
}

TEST_CASE("optimize_settings: validates its options") {
  const Vec4 psi = maximally_entangled().vec;
  OptimizerOptions bad;
  bad.grid_resolution = 0;
  CHECK_THROWS_AS(optimize_settings(psi, bad), std::invalid_argument);
  bad = {};
  bad.refine_shrink = 1.0;
  CHECK_THROWS_AS(optimize_settings(psi, bad), std::invalid_argument);
  bad = {};
  bad.refine_iterations = -1;
  CHECK_THROWS_AS(optimize_settings(psi, bad), std::invalid_argument);
}

TEST_CASE("quantum bound: |S| never exceeds 2 sqrt(2)") {
  Rng rng(41);
  for (int trial = 0; trial < 10000; ++trial) {
    const ChshResult r = chsh_value(random_state(rng), random_angles(rng).build());
    CHECK(std::abs(r.s) <= kTsirelson + 1e-8);
    CHECK(std::abs(r.e11) <= 1.0 + 1e-10);
    CHECK(std::abs(r.e12) <= 1.0 + 1e-10);
    CHECK(std::abs(r.e21) <= 1.0 + 1e-10);
    CHECK(std::abs(r.e22) <= 1.0 + 1e-10);
  }
}

TEST_CASE("degenerate settings: |S| <= 2 when a side repeats") {
  Rng rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec4 psi = random_state(rng);
    const SettingsAngles ang = random_angles(rng);
    SettingsAngles same_a = ang;
    same_a.theta2 = same_a.theta1;
    CHECK(std::abs(chsh_value(psi, same_a.build()).s) <= 2.0 + 1e-10);
    SettingsAngles same_b = ang;
    same_b.b2_polar = same_b.b1_polar;
    same_b.b2_azimuth = same_b.b1_azimuth;
    CHECK(std::abs(chsh_value(psi, same_b.build()).s) <= 2.0 + 1e-10);
  }
}

TEST_CASE("negating all four observables leaves S unchanged") {
  // A(theta + pi/2) = -A(theta); the spin direction flips to -n.
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec4 psi = random_state(rng);
    const SettingsAngles ang = random_angles(rng);
    SettingsAngles neg = ang;
    neg.theta1 += kPi / 2.0;
    neg.theta2 += kPi / 2.0;
    neg.b1_polar += kPi;
    neg.b2_polar += kPi;
    const double s = chsh_value(psi, ang.build()).s;
    const double s_neg = chsh_value(psi, neg.build()).s;
    CHECK(s == doctest::Approx(s_neg).epsilon(1e-10));
  }
}

TEST_CASE("entanglement monotonicity of the optimized maximum") {
  OptimizerOptions quick;
  quick.grid_resolution = 32;
  const auto s_max_at = [&](double a) {
    const double b = std::sqrt(1.0 - a * a);
    return optimize_settings(prepare_state({a, b, kPi}).vec, quick).s_max;
  };
  const double at_zero = s_max_at(0.0);
  const double at_quarter = s_max_at(0.25);
  const double at_balanced = s_max_at(1.0 / std::sqrt(2.0));
  const double at_nine = s_max_at(0.9);
  const double at_one = s_max_at(1.0);
  CHECK(std::abs(at_zero - 2.0) <= 1e-6);
  CHECK(std::abs(at_one - 2.0) <= 1e-6);
  CHECK(std::abs(at_balanced - kTsirelson) <= 1e-6);
  CHECK(at_balanced >= at_quarter);
  CHECK(at_balanced >= at_nine);
  CHECK(at_quarter >= at_zero - 1e-9);
  CHECK(at_nine >= at_one - 1e-9);
}
