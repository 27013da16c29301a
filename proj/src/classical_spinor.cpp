#include "spinkvn/classical_spinor.hpp"

#include <cmath>
#include <sstream>

#include "spinkvn/errors.hpp"

namespace spinkvn {

using namespace std::complex_literals;

Matrix4 boost_from_velocity(const FourVector& u, double c) {
  if (!(u[0] > 0.0)) {
    std::ostringstream os;
    os << "boost requires u^0 > 0, got " << u[0];
    throw DirectionOfTimeError(os.str());
  }
  const double shell = lorentz_inner(u, u);
  if (std::abs(shell - c * c) > kOnShellTolerance * c * c) {
    std::ostringstream os;
    os << "off-shell proper velocity: u.u = " << shell << ", expected " << c * c;
    throw PreconditionError(os.str());
  }
  // sign(u^0) = +1 branch of the analytic square root of slash(u) gamma^0 / c
  const Matrix4 numerator = slash(u) * gamma(0) + c * Matrix4::Identity();
  return numerator / std::sqrt(2.0 * c * (c + u[0]));
}

Spinor spinor_from_transform(const Matrix4& l) { return l.col(0); }

Matrix4 embed_spinor(const Spinor& psi) {
  const Complex p1 = psi[0], p2 = psi[1], p3 = psi[2], p4 = psi[3];
  Matrix4 l;
  // clang-format off
  l << p1,  -std::conj(p2), p3,  std::conj(p4),
       p2,   std::conj(p1), p4, -std::conj(p3),
       p3,   std::conj(p4), p1, -std::conj(p2),
       p4,  -std::conj(p3), p2,  std::conj(p1);
  // clang-format on
  return l;
}

FourVector velocity_from_spinor(const Spinor& psi, double c) {
  FourVector u;
  for (int nu = 0; nu < 4; ++nu) {
    u[nu] = c * (psi.adjoint() * gamma0_gamma(nu) * psi)(0, 0).real();
  }
  return u;
}

Matrix4 projector_Q() {
  const Matrix4 id = Matrix4::Identity();
  return 0.25 * (id + gamma(0)) * (id + 1i * gamma(1) * gamma(2));
}

SpinTransform SpinTransform::from_velocity(const FourVector& u, double c) {
  return {boost_from_velocity(u, c), Matrix4::Identity()};
}

SpinTransform SpinTransform::from_velocity(const FourVector& u, double c, const Matrix4& rotor) {
  const double err = max_abs_entry(rotor * rotor.adjoint() - Matrix4::Identity());
  if (err > 1e-10) throw PreconditionError("rotor is not unitary");
  return {boost_from_velocity(u, c), rotor};
}

Matrix4 SpinTransform::slashed_velocity(double c) const {
  const Matrix4 l = matrix();
  return c * l * l.adjoint() * gamma(0);
}

Matrix4 spatial_rotor(int i, int j, double phi) {
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j) throw DomainError("spatial_rotor needs distinct spatial indices");
  // (gamma^i gamma^j)^2 = -1
  return std::cos(0.5 * phi) * Matrix4::Identity() - std::sin(0.5 * phi) * gamma(i) * gamma(j);
}

}  // namespace spinkvn
