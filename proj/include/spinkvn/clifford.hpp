#pragma once

// Gamma-matrix algebra in the Pauli-Dirac representation.
//
// Conventions: metric g = diag(1,-1,-1,-1), four-vectors are stored with
// upper (contravariant) indices, and slash(v) = v^mu gamma_mu.

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace spinkvn {

using Complex = std::complex<double>;
using Matrix4 = Eigen::Matrix4cd;
using Spinor = Eigen::Vector4cd;

struct FourVector {
  std::array<double, 4> v{};

  constexpr FourVector() = default;
  constexpr FourVector(double v0, double v1, double v2, double v3) : v{v0, v1, v2, v3} {}

  constexpr double operator[](int mu) const { return v[static_cast<std::size_t>(mu)]; }
  constexpr double& operator[](int mu) { return v[static_cast<std::size_t>(mu)]; }

  /// Index lowering (or raising; the metric is its own inverse).
  constexpr FourVector lowered() const { return {v[0], -v[1], -v[2], -v[3]}; }

  friend constexpr FourVector operator+(const FourVector& a, const FourVector& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
  }
  friend constexpr FourVector operator-(const FourVector& a, const FourVector& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
  }
  friend constexpr FourVector operator*(double s, const FourVector& a) {
    return {s * a[0], s * a[1], s * a[2], s * a[3]};
  }
  friend constexpr bool operator==(const FourVector&, const FourVector&) = default;
};

/// g^{mu nu}; zero off the diagonal.
constexpr double metric(int mu, int nu) {
  if (mu != nu) return 0.0;
  return mu == 0 ? 1.0 : -1.0;
}

/// gamma^mu, mu in 0..3. Throws DomainError otherwise.
const Matrix4& gamma(int mu);

/// gamma^0 gamma^nu (alpha_k for spatial nu, identity for nu = 0).
const Matrix4& gamma0_gamma(int nu);

Matrix4 slash(const FourVector& v);

double lorentz_inner(const FourVector& p, const FourVector& q);

/// Tr[(p/ - eA/ - mc)(p/ - eA/ + mc)]; vanishes on the mass shell.
Complex shell_mass_trace(const FourVector& p, const FourVector& a, double m, double c, double e);

struct CliffordReport {
  // max over (mu,nu) of max-entry |{gamma^mu, gamma^nu} - 2 g^{mu nu} 1|
  double max_anticommutator_deviation = 0.0;
  // max over k of the distance of the spectrum of c gamma^0 gamma^k from {+c,+c,-c,-c}
  double max_velocity_eigenvalue_deviation = 0.0;
};

CliffordReport verify_clifford(double c = 1.0);

double max_abs_entry(const Matrix4& m);

}  // namespace spinkvn
