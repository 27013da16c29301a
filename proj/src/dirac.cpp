#include "spinkvn/dirac.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spinkvn/errors.hpp"
#include "spinkvn/wigner.hpp"

namespace spinkvn {

using namespace std::complex_literals;

Matrix4 free_dirac_symbol(double p, const Constants& k) {
  return k.c * p * gamma0_gamma(1) + k.m * k.c * k.c * gamma(0);
}

Matrix4 dirac_potential_symbol(double x, const Potential& pot, const Constants& k) {
  const Covector a = pot.covariant(x);
  Matrix4 v = Matrix4::Zero();
  for (int nu = 0; nu < 4; ++nu) v += k.c * k.e * a[static_cast<std::size_t>(nu)] * gamma0_gamma(nu);
  return v;
}

Matrix4 dirac_hamiltonian_symbol(double p, double x, const Potential& pot, const Constants& k) {
  // -gamma^0 gamma^1 c p_1 with p_1 = -p
  return free_dirac_symbol(p, k) + dirac_potential_symbol(x, pot, k);
}

Matrix4 hermitian_exponential(const Matrix4& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix4> es(h);
  const Eigen::Vector4cd phases = (-1i * t * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// exp(-i t T/hbar) for the free symbol T, T^2 = K^2: cos(K t/hbar) - i sin(K t/hbar) T/K.
Matrix4 free_kinetic_exponential(double p, double t, const Constants& k) {
  const Matrix4 sym = free_dirac_symbol(p, k);
  const double energy = std::sqrt(std::pow(k.m * k.c * k.c, 2) + std::pow(k.c * p, 2));
  const double phase = energy * t / k.hbar;
  return std::cos(phase) * Matrix4::Identity() - 1i * (std::sin(phase) / energy) * sym;
}

void check_normalized(const SpinorField& psi) {
  const double n = psi.norm_squared();
  if (std::abs(n - 1.0) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "initial spinor field is not normalized (norm^2 = " << n << ")";
    throw PreconditionError(os.str());
  }
}

}  // namespace

DiracPropagator::DiracPropagator(const PhaseGrid& grid, DiracParams params)
    : grid_(grid), params_(std::move(params)), fft_(1, grid.nx(), 4) {
  const Constants& k = params_.constants;
  if (!(params_.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(k.c > 0.0 && k.hbar > 0.0 && k.m > 0.0 && k.e > 0.0)) {
    throw ConfigError("physical constants must be positive");
  }
  const std::size_t n = grid_.nx();
  const std::vector<double> lambdas = grid_.lambdas();

  // Eigenvalues of H(p, x) are c e A_0(x) +- K(p, x).
  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid_.x(i);
    const double shift = k.c * k.e * params_.potential.covariant(x)[0];
    for (std::size_t j = 0; j < n; ++j) {
      const double kin = kinetic_energy(k.hbar * lambdas[j], x, params_.potential, k);
      radius = std::max(radius, std::abs(shift) + kin);
    }
  }
  spectral_radius_ = radius;
  if (params_.dt * radius >= std::numbers::pi * k.hbar) {
    std::ostringstream os;
    os << "sampling guard violated: dt * max|eig H| = " << params_.dt * radius << " >= pi hbar";
    throw ConfigError(os.str());
  }

  potential_half_.resize(n);
  uniform_phase_ = params_.potential.kind() == PotentialKind::free;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix4 v = dirac_potential_symbol(grid_.x(i), params_.potential, k);
    potential_half_[i] = hermitian_exponential(v, 0.5 * params_.dt / k.hbar);
  }
  kinetic_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    kinetic_[j] = free_kinetic_exponential(k.hbar * lambdas[j], params_.dt, k);
  }
}

void DiracPropagator::step(SpinorField& psi) const {
  if (!psi.grid().same_as(grid_)) throw PreconditionError("spinor field grid does not match the propagator");
  const std::size_t n = grid_.nx();
  const Exec exec = params_.exec;
  auto apply = [&](const MatrixTable& table) {
    parallel_for(n, exec, [&](std::size_t i) {
      auto v = psi.at(i);
      const Eigen::Vector4cd tmp = table[i] * v;
      v = tmp;
    });
  };
  if (!uniform_phase_) apply(potential_half_);
  fft_.forward(psi.data(), exec);
  apply(kinetic_);
  fft_.inverse(psi.data(), exec);
  if (!uniform_phase_) apply(potential_half_);
}

void propagate_dirac(const SpinorField& psi0, const DiracParams& params, std::size_t n_steps, std::size_t stride,
                     const SpinorObserver& observer) {
  check_normalized(psi0);
  if (stride == 0) throw PreconditionError("frame stride must be positive");
  const DiracPropagator prop(psi0.grid(), params);
  SpinorField psi = psi0;
  observer(0, 0.0, psi);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    prop.step(psi);
    if (s % stride == 0 || s == n_steps) observer(s, static_cast<double>(s) * params.dt, psi);
  }
}

SpinorTrajectory propagate_dirac(const SpinorField& psi0, const DiracParams& params, std::size_t n_steps,
                                 std::size_t stride) {
  SpinorTrajectory traj;
  propagate_dirac(psi0, params, n_steps, stride, [&](std::size_t, double t, const SpinorField& psi) {
    traj.times.push_back(t);
    traj.frames.push_back(psi);
  });
  return traj;
}

SpinorField apply_momentum(const SpinorField& psi, double hbar) {
  const PhaseGrid& g = psi.grid();
  SpinorField out = psi;
  const FftAxis fft(1, g.nx(), 4);
  fft.forward(out.data(), Exec::serial);
  const std::vector<double> lambdas = g.lambdas();
  for (std::size_t j = 0; j < g.nx(); ++j) out.at(j) *= hbar * lambdas[j];
  fft.inverse(out.data(), Exec::serial);
  return out;
}

DiracObservables dirac_observables(const SpinorField& psi, const Constants& k, double time) {
  const PhaseGrid& g = psi.grid();
  DiracObservables obs;
  obs.time = time;
  obs.norm = psi.norm_squared();
  double sx = 0.0;
  double sv = 0.0;
  const Matrix4& a1 = gamma0_gamma(1);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const auto v = psi.at(i);
    sx += g.x(i) * v.squaredNorm();
    sv += (v.adjoint() * a1 * v)(0, 0).real();
  }
  obs.mean_x = sx * g.dx() / obs.norm;
  obs.mean_velocity = k.c * sv * g.dx() / obs.norm;

  SpinorField spec = psi;
  const FftAxis fft(1, g.nx(), 4);
  fft.forward(spec.data(), Exec::serial);
  const std::vector<double> lambdas = g.lambdas();
  double sp = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < g.nx(); ++j) {
    const double w = spec.at(j).squaredNorm();
    sp += k.hbar * lambdas[j] * w;
    total += w;
  }
  obs.mean_p = sp / total;
  return obs;
}

double dirac_mean_force(const SpinorField& psi, const Potential& pot, const Constants& k) {
  const PhaseGrid& g = psi.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const Covector grad = pot.gradient(g.x(i));
    Matrix4 f = Matrix4::Zero();
    for (int nu = 0; nu < 4; ++nu) f += k.c * k.e * grad[static_cast<std::size_t>(nu)] * gamma0_gamma(nu);
    const auto v = psi.at(i);
    s += (v.adjoint() * f * v)(0, 0).real();
  }
  return s * g.dx() / psi.norm_squared();
}

std::vector<EhrenfestSample> ehrenfest_residuals(const SpinorTrajectory& trajectory, const DiracParams& params) {
  const std::size_t n = trajectory.frames.size();
  if (n < 3 || trajectory.times.size() != n) throw PreconditionError("Ehrenfest residuals need at least 3 frames");
  const double h = trajectory.times[1] - trajectory.times[0];
  for (std::size_t f = 1; f < n; ++f) {
    if (std::abs((trajectory.times[f] - trajectory.times[f - 1]) - h) > 1e-9 * std::abs(h)) {
      throw PreconditionError("Ehrenfest residuals need equally spaced frames");
    }
  }
  const Constants& k = params.constants;
  std::vector<DiracObservables> obs;
  obs.reserve(n);
  for (std::size_t f = 0; f < n; ++f) obs.push_back(dirac_observables(trajectory.frames[f], k, trajectory.times[f]));

  std::vector<EhrenfestSample> out;
  for (std::size_t f = 1; f + 1 < n; ++f) {
    const double dxdt = (obs[f + 1].mean_x - obs[f - 1].mean_x) / (2.0 * h);
    // physical momentum p = -p_1
    const double dp1dt = -(obs[f + 1].mean_p - obs[f - 1].mean_p) / (2.0 * h);
    const double force = dirac_mean_force(trajectory.frames[f], params.potential, k);
    out.push_back({trajectory.times[f], std::abs(dxdt - obs[f].mean_velocity), std::abs(dp1dt - force)});
  }
  return out;
}

SpinorField gaussian_packet(const PhaseGrid& grid, const GaussianPacket& packet, double hbar) {
  if (!(packet.sigma > 0.0)) throw ConfigError("Gaussian width must be positive");
  const double wn = packet.direction.norm();
  if (!(wn > 0.0)) throw ConfigError("spinor direction must be nonzero");
  const Spinor w = packet.direction / wn;
  SpinorField psi(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    const double x = grid.x(i);
    const double d = (x - packet.x0) / packet.sigma;
    const Complex amp = std::exp(Complex(-0.5 * d * d, packet.p0 * x / hbar));
    psi.at(i) = amp * w;
  }
  const double scale = 1.0 / std::sqrt(psi.norm_squared());
  for (Complex& z : psi.data()) z *= scale;
  return psi;
}

SpinorField filter_positive_energy(const SpinorField& psi, const Constants& k) {
  const PhaseGrid& g = psi.grid();
  SpinorField out = psi;
  const FftAxis fft(1, g.nx(), 4);
  fft.forward(out.data(), Exec::serial);
  const std::vector<double> lambdas = g.lambdas();
  const Potential none = Potential::free();
  for (std::size_t j = 0; j < g.nx(); ++j) {
    const Matrix4 proj = positive_energy_projector(k.hbar * lambdas[j], 0.0, none, k);
    const Eigen::Vector4cd v = proj * out.at(j);
    out.at(j) = v;
  }
  fft.inverse(out.data(), Exec::serial);
  return out;
}

}  // namespace spinkvn
