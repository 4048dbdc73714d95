#include "pathspin/measurement.hpp"

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "pathspin/preparation.hpp"
#include "pathspin/rng.hpp"
#include "support/oracles.hpp"

using namespace pathspin;

namespace {

constexpr double kPi = std::numbers::pi;

void check_equal(const Herm2& m, const oracle::M2& expected, double tol) {
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      CAPTURE(r);
      CAPTURE(c);
      CHECK(std::abs(m(r, c) - expected[r][c]) <= tol);
    }
  }
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

std::array<double, 3> random_unit_axis(Rng& rng) {
  double n[3];
  double len = 0.0;
  do {
    len = 0.0;
    for (double& x : n) {
      x = rng.gaussian(1.0);
      len += x * x;
    }
    len = std::sqrt(len);
  } while (len < 1e-6);
  return {n[0] / len, n[1] / len, n[2] / len};
}

}  // namespace

TEST_CASE("path_observable: theta = pi/2 is sigma_z on the path factor") {
  check_equal(PathObservable(kPi / 2.0).matrix(), oracle::sigma_z(), 1e-15);
}

TEST_CASE("path_observable: theta = pi/4 is sigma_x") {
  // Oracle: outer-product construction from the splitter output vectors.
  check_equal(PathObservable(kPi / 4.0, 0.0).matrix(),
              oracle::path_observable_from_vectors(kPi / 4.0, 0.0), 1e-15);
  check_equal(PathObservable(kPi / 4.0).matrix(), oracle::sigma_x(), 1e-15);
}

TEST_CASE("path_observable: theta = 0 is minus sigma_z") {
  const Herm2 m = PathObservable(0.0).matrix();
  CHECK(m(0, 0) == Cx(-1.0));
  CHECK(m(1, 1) == Cx(1.0));
  CHECK(m(0, 1) == Cx(0.0));
}

TEST_CASE("path_observable: matches the outer-product oracle for random angles") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = 2.0 * kPi * rng.uniform();
    const double phi = 2.0 * kPi * rng.uniform();
    check_equal(PathObservable(theta, phi).matrix(),
                oracle::path_observable_from_vectors(theta, phi), 1e-12);
  }
}

TEST_CASE("path_observable: the +1 eigenvector is the first splitter output") {
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = 2.0 * kPi * rng.uniform();
    const double phi = 2.0 * kPi * rng.uniform();
    const Cx phase = std::polar(1.0, phi);
    const Vec2 psi3{{std::sin(theta) * phase, std::cos(theta) * phase}};
    const Vec2 psi4{{Cx(std::cos(theta)), Cx(-std::sin(theta))}};
    const Vec2 a3 = apply(PathObservable(theta, phi).matrix(), psi3);
    const Vec2 a4 = apply(PathObservable(theta, phi).matrix(), psi4);
    CHECK(std::abs(a3.c[0] - psi3.c[0]) <= 1e-12);
    CHECK(std::abs(a3.c[1] - psi3.c[1]) <= 1e-12);
    CHECK(std::abs(a4.c[0] + psi4.c[0]) <= 1e-12);
    CHECK(std::abs(a4.c[1] + psi4.c[1]) <= 1e-12);
  }
}

TEST_CASE("path_observable: phi never changes the matrix") {
  Rng rng(33);
  for (double theta : {0.0, 0.3, kPi / 4.0, 1.9, kPi}) {
    const Herm2 reference = PathObservable(theta, 0.0).matrix();
    for (int trial = 0; trial < 100; ++trial) {
      const Herm2 m = PathObservable(theta, 2.0 * kPi * rng.uniform()).matrix();
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          CHECK(std::abs(m(r, c) - reference(r, c)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("spin_observable: coordinate axes") {
  check_equal(SpinObservable({0.0, 0.0, 1.0}).matrix(), oracle::sigma_z(), 0.0);
  check_equal(SpinObservable({1.0, 0.0, 0.0}).matrix(), oracle::sigma_x(), 0.0);
  check_equal(SpinObservable({0.0, 1.0, 0.0}).matrix(), oracle::sigma_y(), 0.0);
}

TEST_CASE("spin_observable: diagonal direction by linearity") {
  const double r = 1.0 / std::sqrt(2.0);
  const Herm2 m = SpinObservable({r, 0.0, -r}).matrix();
  CHECK(std::abs(m(0, 0) - Cx(-r)) <= 1e-15);
  CHECK(std::abs(m(0, 1) - Cx(r)) <= 1e-15);
  CHECK(std::abs(m(1, 0) - Cx(r)) <= 1e-15);
  CHECK(std::abs(m(1, 1) - Cx(r)) <= 1e-15);
}

TEST_CASE("spin_observable: rejects non-unit directions") {
  CHECK_THROWS_AS(SpinObservable({1.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SpinObservable({0.0, 0.0, 0.5}), std::invalid_argument);
}

TEST_CASE("spin_observable: from_polar spans the x-z plane at azimuth 0") {
  const SpinObservable b = SpinObservable::from_polar(3.0 * kPi / 4.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(b.direction()[0] == doctest::Approx(r).epsilon(1e-14));
  CHECK(b.direction()[1] == doctest::Approx(0.0));
  CHECK(b.direction()[2] == doctest::Approx(-r).epsilon(1e-14));
}

TEST_CASE("joint_distribution: singlet-like state, A(pi/2), B(z)") {
  // Direct 4x4 oracle: probabilities via raw projector expectations.
  const Vec4 psi = maximally_entangled().vec;
  const JointDistribution d =
      joint_distribution(psi, PathObservable(kPi / 2.0), SpinObservable({0, 0, 1}));
  CHECK(d.p_pp == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d.p_pm == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.p_mp == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.p_mm == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("joint_distribution: product state has definite outcomes") {
  const Vec4 psi{{0.0, 1.0, 0.0, 0.0}};
  const JointDistribution d =
      joint_distribution(psi, PathObservable(kPi / 2.0), SpinObservable({0, 0, 1}));
  CHECK(d.p_pp == doctest::Approx(0.0));
  CHECK(d.p_pm == doctest::Approx(1.0));
  CHECK(d.p_mp == doctest::Approx(0.0));
  CHECK(d.p_mm == doctest::Approx(0.0));
}

TEST_CASE("joint_distribution: singlet-like state, A(pi/4), B(z) is uniform") {
  const Vec4 psi = maximally_entangled().vec;
  const JointDistribution d =
      joint_distribution(psi, PathObservable(kPi / 4.0), SpinObservable({0, 0, 1}));
  CHECK(d.p_pp == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(d.p_pm == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(d.p_mp == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(d.p_mm == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("correlation: frozen values on the singlet-like and product states") {
  const Vec4 singlet = maximally_entangled().vec;
  const SpinObservable bz({0, 0, 1});
  CHECK(correlation(singlet, PathObservable(kPi / 2.0), bz) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(correlation(singlet, PathObservable(kPi / 4.0), bz) ==
        doctest::Approx(0.0).epsilon(1e-10));
  const Vec4 product{{0.0, 1.0, 0.0, 0.0}};
  CHECK(correlation(product, PathObservable(kPi / 2.0), bz) ==
        doctest::Approx(-1.0));
}

TEST_CASE("correlation: closed form on the singlet-like state") {
  // E(A(theta), B(n)) = -(sin 2t nx - cos 2t nz).
  Rng rng(34);
  const Vec4 psi = maximally_entangled().vec;
  for (int trial = 0; trial < 200; ++trial) {
    const double theta = 2.0 * kPi * rng.uniform();
    const auto n = random_unit_axis(rng);
    const double e = correlation(psi, PathObservable(theta), SpinObservable(n));
    const double closed = -(std::sin(2.0 * theta) * n[0] - std::cos(2.0 * theta) * n[2]);
    CHECK(e == doctest::Approx(closed).epsilon(1e-10));
  }
}

TEST_CASE("joint_distribution: marginals match projector expectations") {
  Rng rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec4 psi = random_state(rng);
    const PathObservable a(2.0 * kPi * rng.uniform(), 2.0 * kPi * rng.uniform());
    const SpinObservable b(random_unit_axis(rng));
    const JointDistribution d = joint_distribution(psi, a, b);
    const auto [pa_plus, pa_minus] = projectors_of(a.matrix());
    const double marginal = expectation(psi, tensor(pa_plus, identity2()));
    CHECK(d.p_pp + d.p_pm == doctest::Approx(marginal).epsilon(1e-10));
    CHECK(d.p_pp + d.p_pm + d.p_mp + d.p_mm == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("correlation: projector route equals operator route") {
  Rng rng(36);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec4 psi = random_state(rng);
    const PathObservable a(2.0 * kPi * rng.uniform());
    const SpinObservable b(random_unit_axis(rng));
    const JointDistribution d = joint_distribution(psi, a, b);
    const double via_projectors = d.p_pp - d.p_pm - d.p_mp + d.p_mm;
    CHECK(correlation(psi, a, b) == doctest::Approx(via_projectors).epsilon(1e-10));
  }
}
