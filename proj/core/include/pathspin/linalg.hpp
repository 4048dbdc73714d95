// Exact complex linear algebra on the fixed 2- and 4-dimensional Hilbert
// spaces of the path-spin interferometer model.
//
// Basis conventions, fixed project-wide:
//   path factor   (|up>_p, |down>_p)            -- transmitted / reflected channel
//   spin factor   (|up>_z, |down>_z)
//   joint space   (|up up>, |up down>, |down up>, |down down>), path index first

#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <utility>

namespace pathspin {

using Cx = std::complex<double>;

// Tolerances. Everything here is machine-precision arithmetic on size-4
// problems; construction checks are tighter than operation preconditions.
inline constexpr double kNormConstructionTol = 1e-12;
inline constexpr double kNormPreconditionTol = 1e-9;
inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kDichotomyTol = 1e-10;
inline constexpr double kImagResidueTol = 1e-10;
inline constexpr double kProbabilityFloor = -1e-12;

/// Thrown when a quantity that should hold by construction is found broken
/// at runtime (as opposed to a caller-supplied precondition violation,
/// which throws std::invalid_argument).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Vec2 {
  std::array<Cx, 2> c{};

  double norm() const;
};

struct Vec4 {
  std::array<Cx, 4> c{};

  double norm() const;
  bool is_normalized(double tol = kNormPreconditionTol) const;
};

Cx inner(const Vec2& u, const Vec2& v);
Cx inner(const Vec4& u, const Vec4& v);

/// Hermitian 2x2 operator. Entries are checked on construction: finite and
/// M = M^dagger entrywise within kHermiticityTol.
class Herm2 {
 public:
  Herm2() = default;  // zero operator

  static Herm2 from_rows(Cx m00, Cx m01, Cx m10, Cx m11);

  Cx operator()(int row, int col) const { return m_[row * 2 + col]; }

 private:
  std::array<Cx, 4> m_{};
};

/// Hermitian 4x4 operator, row-major entries, same construction checks.
class Herm4 {
 public:
  Herm4() = default;

  static Herm4 from_rows(const std::array<Cx, 16>& entries);

  Cx operator()(int row, int col) const { return m_[row * 4 + col]; }

 private:
  std::array<Cx, 16> m_{};
};

Herm2 identity2();
Herm4 identity4();
Herm2 pauli_x();
Herm2 pauli_y();
Herm2 pauli_z();

Vec2 apply(const Herm2& op, const Vec2& v);
Vec4 apply(const Herm4& op, const Vec4& v);

/// Kronecker product in the fixed joint basis order (path factor first):
/// result[(2p+s),(2p'+s')] = path_op[p,p'] * spin_op[s,s'].
Herm4 tensor(const Herm2& path_op, const Herm2& spin_op);

/// <psi|M|psi> for a normalized state. Rejects states whose norm deviates
/// from 1 by more than kNormPreconditionTol; the imaginary residue must be
/// below kImagResidueTol and is discarded.
double expectation(const Vec4& state, const Herm4& op);

/// Spectral projectors (P+, P-) of a dichotomic operator (op^2 = I within
/// kDichotomyTol). Satisfies P+ + P- = I, P+ - P- = op, P+- idempotent.
std::pair<Herm2, Herm2> projectors_of(const Herm2& op);

}  // namespace pathspin
