#include "pathspin/linalg.hpp"

#include <cmath>
#include <string>

namespace pathspin {

namespace {

bool finite(Cx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <typename Array>
void check_finite(const Array& entries, const char* what) {
  for (const Cx& z : entries) {
    if (!finite(z)) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace

double Vec2::norm() const {
  return std::sqrt(std::norm(c[0]) + std::norm(c[1]));
}

double Vec4::norm() const {
  double s = 0.0;
  for (const Cx& z : c) s += std::norm(z);
  return std::sqrt(s);
}

bool Vec4::is_normalized(double tol) const {
  return std::abs(norm() - 1.0) <= tol;
}

Cx inner(const Vec2& u, const Vec2& v) {
  return std::conj(u.c[0]) * v.c[0] + std::conj(u.c[1]) * v.c[1];
}

Cx inner(const Vec4& u, const Vec4& v) {
  Cx s = 0.0;
  for (int i = 0; i < 4; ++i) s += std::conj(u.c[i]) * v.c[i];
  return s;
}

Herm2 Herm2::from_rows(Cx m00, Cx m01, Cx m10, Cx m11) {
  Herm2 out;
  out.m_ = {m00, m01, m10, m11};
  check_finite(out.m_, "Herm2");
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (std::abs(out(r, c) - std::conj(out(c, r))) > kHermiticityTol) {
        throw std::invalid_argument("Herm2: entries are not Hermitian");
      }
    }
  }
  return out;
}

Herm4 Herm4::from_rows(const std::array<Cx, 16>& entries) {
  Herm4 out;
  out.m_ = entries;
  check_finite(out.m_, "Herm4");
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (std::abs(out(r, c) - std::conj(out(c, r))) > kHermiticityTol) {
        throw std::invalid_argument("Herm4: entries are not Hermitian");
      }
    }
  }
  return out;
}

Herm2 identity2() { return Herm2::from_rows(1.0, 0.0, 0.0, 1.0); }

Herm4 identity4() {
  std::array<Cx, 16> e{};
  for (int i = 0; i < 4; ++i) e[i * 4 + i] = 1.0;
  return Herm4::from_rows(e);
}

Herm2 pauli_x() { return Herm2::from_rows(0.0, 1.0, 1.0, 0.0); }

Herm2 pauli_y() {
  return Herm2::from_rows(0.0, Cx(0.0, -1.0), Cx(0.0, 1.0), 0.0);
}

Herm2 pauli_z() { return Herm2::from_rows(1.0, 0.0, 0.0, -1.0); }

Vec2 apply(const Herm2& op, const Vec2& v) {
  Vec2 out;
  for (int r = 0; r < 2; ++r) {
    out.c[r] = op(r, 0) * v.c[0] + op(r, 1) * v.c[1];
  }
  return out;
}

Vec4 apply(const Herm4& op, const Vec4& v) {
  Vec4 out;
  for (int r = 0; r < 4; ++r) {
    Cx s = 0.0;
    for (int c = 0; c < 4; ++c) s += op(r, c) * v.c[c];
    out.c[r] = s;
  }
  return out;
}

Herm4 tensor(const Herm2& path_op, const Herm2& spin_op) {
  std::array<Cx, 16> e;
  for (int pr = 0; pr < 2; ++pr) {
    for (int sr = 0; sr < 2; ++sr) {
      for (int pc = 0; pc < 2; ++pc) {
        for (int sc = 0; sc < 2; ++sc) {
          e[(2 * pr + sr) * 4 + (2 * pc + sc)] = path_op(pr, pc) * spin_op(sr, sc);
        }
      }
    }
  }
  return Herm4::from_rows(e);
}

double expectation(const Vec4& state, const Herm4& op) {
  check_finite(state.c, "expectation");
  if (!state.is_normalized()) {
    throw std::invalid_argument("expectation: state is not normalized");
  }
  const Cx value = inner(state, apply(op, state));
  if (std::abs(value.imag()) > kImagResidueTol) {
    throw InvariantError("expectation: imaginary residue exceeds tolerance");
  }
  return value.real();
}

std::pair<Herm2, Herm2> projectors_of(const Herm2& op) {
  // Dichotomy check: op*op = I entrywise.
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const Cx sq = op(r, 0) * op(0, c) + op(r, 1) * op(1, c);
      const Cx expect = (r == c) ? Cx(1.0) : Cx(0.0);
      if (std::abs(sq - expect) > kDichotomyTol) {
        throw std::invalid_argument("projectors_of: operator is not dichotomic");
      }
    }
  }
  const Herm2 plus = Herm2::from_rows(
      0.5 * (1.0 + op(0, 0)), 0.5 * op(0, 1), 0.5 * op(1, 0), 0.5 * (1.0 + op(1, 1)));
  const Herm2 minus = Herm2::from_rows(
      0.5 * (1.0 - op(0, 0)), -0.5 * op(0, 1), -0.5 * op(1, 0), 0.5 * (1.0 - op(1, 1)));
  return {plus, minus};
}

}  // namespace pathspin
