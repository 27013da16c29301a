#pragma once

// Classical spinor kinematics: boosts from proper velocities, the spinor
// stored in the first column of a Spin+(1,3) element, and velocity recovery.

#include "spinkvn/clifford.hpp"

namespace spinkvn {

/// Relative tolerance on u.u = c^2 accepted by boost_from_velocity.
inline constexpr double kOnShellTolerance = 1e-9;

/// Hermitian boost B with c B B gamma^0 = slash(u).
/// Throws PreconditionError for off-shell u, DirectionOfTimeError for u^0 <= 0.
Matrix4 boost_from_velocity(const FourVector& u, double c);

/// Leftmost column of L.
Spinor spinor_from_transform(const Matrix4& l);

/// The 4x4 pattern a Spin+(1,3) element takes in the Pauli-Dirac
/// representation, rebuilt from its first column.
Matrix4 embed_spinor(const Spinor& psi);

/// u^nu = Psi^dagger c gamma^0 gamma^nu Psi.
FourVector velocity_from_spinor(const Spinor& psi, double c);

/// (1/4)(1 + gamma^0)(1 + i gamma^1 gamma^2) = diag(1,0,0,0).
Matrix4 projector_Q();

/// An element L = B R of Spin+(1,3). The rotor is caller-supplied and must be
/// unitary; only the boost has a dedicated constructor.
class SpinTransform {
 public:
  static SpinTransform from_velocity(const FourVector& u, double c);
  static SpinTransform from_velocity(const FourVector& u, double c, const Matrix4& rotor);

  const Matrix4& boost() const { return boost_; }
  const Matrix4& rotor() const { return rotor_; }
  Matrix4 matrix() const { return boost_ * rotor_; }
  Spinor spinor() const { return spinor_from_transform(matrix()); }

  /// c L L^dagger gamma^0, the slashed proper velocity.
  Matrix4 slashed_velocity(double c) const;

 private:
  SpinTransform(Matrix4 boost, Matrix4 rotor) : boost_(std::move(boost)), rotor_(std::move(rotor)) {}

  Matrix4 boost_;
  Matrix4 rotor_;
};

/// exp(-(phi/2) gamma^i gamma^j): rotation by phi in the (i,j) plane, i != j spatial.
Matrix4 spatial_rotor(int i, int j, double phi);

}  // namespace spinkvn
