#include "spinkvn/clifford.hpp"

#include <algorithm>
#include <string>

#include "spinkvn/errors.hpp"

namespace spinkvn {
namespace {

using namespace std::complex_literals;

std::array<Matrix4, 4> make_gammas() {
  std::array<Matrix4, 4> g;
  g[0] = Matrix4::Zero();
  g[0].diagonal() << 1.0, 1.0, -1.0, -1.0;

  // gamma^k = [[0, sigma_k], [-sigma_k, 0]]
  const std::array<Eigen::Matrix2cd, 3> sigma = [] {
    std::array<Eigen::Matrix2cd, 3> s;
    s[0] << 0.0, 1.0, 1.0, 0.0;
    s[1] << 0.0, -1i, 1i, 0.0;
    s[2] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  for (int k = 0; k < 3; ++k) {
    Matrix4 m = Matrix4::Zero();
    m.block<2, 2>(0, 2) = sigma[static_cast<std::size_t>(k)];
    m.block<2, 2>(2, 0) = -sigma[static_cast<std::size_t>(k)];
    g[static_cast<std::size_t>(k + 1)] = m;
  }
  return g;
}

const std::array<Matrix4, 4>& gammas() {
  static const std::array<Matrix4, 4> g = make_gammas();
  return g;
}

const std::array<Matrix4, 4>& alphas() {
  static const std::array<Matrix4, 4> a = [] {
    std::array<Matrix4, 4> out;
    for (std::size_t nu = 0; nu < 4; ++nu) out[nu] = gammas()[0] * gammas()[nu];
    return out;
  }();
  return a;
}

void check_index(int mu) {
  if (mu < 0 || mu > 3) throw DomainError("gamma index out of range: " + std::to_string(mu));
}

}  // namespace

const Matrix4& gamma(int mu) {
  check_index(mu);
  return gammas()[static_cast<std::size_t>(mu)];
}

const Matrix4& gamma0_gamma(int nu) {
  check_index(nu);
  return alphas()[static_cast<std::size_t>(nu)];
}

Matrix4 slash(const FourVector& v) {
  const FourVector low = v.lowered();
  Matrix4 out = Matrix4::Zero();
  for (int mu = 0; mu < 4; ++mu) out += low[mu] * gamma(mu);
  return out;
}

double lorentz_inner(const FourVector& p, const FourVector& q) {
  return p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3];
}

Complex shell_mass_trace(const FourVector& p, const FourVector& a, double m, double c, double e) {
  const Matrix4 kin = slash(p - e * a);
  const Matrix4 id = Matrix4::Identity();
  return ((kin - m * c * id) * (kin + m * c * id)).trace();
}

double max_abs_entry(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

CliffordReport verify_clifford(double c) {
  CliffordReport report;
  const Matrix4 id = Matrix4::Identity();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const Matrix4 anti = gamma(mu) * gamma(nu) + gamma(nu) * gamma(mu) - 2.0 * metric(mu, nu) * id;
      report.max_anticommutator_deviation =
          std::max(report.max_anticommutator_deviation, max_abs_entry(anti));
    }
  }
  for (int k = 1; k < 4; ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix4> es(c * gamma0_gamma(k));
    const Eigen::Vector4d ev = es.eigenvalues();  // ascending
    const std::array<double, 4> expected{-c, -c, c, c};
    for (int i = 0; i < 4; ++i) {
      report.max_velocity_eigenvalue_deviation = std::max(
          report.max_velocity_eigenvalue_deviation, std::abs(ev[i] - expected[static_cast<std::size_t>(i)]));
    }
  }
  return report;
}

}  // namespace spinkvn
