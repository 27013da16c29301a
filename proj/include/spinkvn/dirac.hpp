#pragma once

// The 1D Dirac equation i hbar d psi/dt = H psi with
//   H = c alpha_1 (p - eA)^1 + c e gamma^0 gamma^nu A_nu  (spatial parts folded)
//     + m c^2 gamma^0,
// evolved by a Strang split-operator scheme: half potential step (pointwise
// 4x4 exponential), exact kinetic step in momentum space, half potential step.

#include <cstddef>
#include <functional>
#include <vector>

#include "spinkvn/clifford.hpp"
#include "spinkvn/fft.hpp"
#include "spinkvn/grid.hpp"
#include "spinkvn/kernels.hpp"
#include "spinkvn/potential.hpp"

namespace spinkvn {

struct DiracParams {
  Constants constants;
  double dt = 1e-3;
  Potential potential;
  Exec exec = Exec::parallel;
};

/// Full Hamiltonian symbol at (p, x); p is the physical momentum p^1 = -p_1.
Matrix4 dirac_hamiltonian_symbol(double p, double x, const Potential& pot, const Constants& k);

/// c p alpha_1 + m c^2 gamma^0; squares to (m^2 c^4 + c^2 p^2) 1.
Matrix4 free_dirac_symbol(double p, const Constants& k);

/// Potential part c e gamma^0 gamma^nu A_nu(x).
Matrix4 dirac_potential_symbol(double x, const Potential& pot, const Constants& k);

/// Hermitian 4x4 exponential exp(-i t h) by eigendecomposition.
Matrix4 hermitian_exponential(const Matrix4& h, double t);

class DiracPropagator {
 public:
  /// Throws ConfigError when dt max|eig H| >= pi hbar on this grid.
  DiracPropagator(const PhaseGrid& grid, DiracParams params);

  void step(SpinorField& psi) const;

  const DiracParams& params() const { return params_; }
  /// max over grid points of |eigenvalue of H|.
  double spectral_radius() const { return spectral_radius_; }

 private:
  PhaseGrid grid_;
  DiracParams params_;
  FftAxis fft_;
  MatrixTable potential_half_;  // per x point
  MatrixTable kinetic_;         // per FFT momentum index
  bool uniform_phase_ = false;
  double spectral_radius_ = 0.0;
};

struct SpinorTrajectory {
  std::vector<double> times;
  std::vector<SpinorField> frames;
};

using SpinorObserver = std::function<void(std::size_t step, double time, const SpinorField& psi)>;

/// Calls observer at step 0 and every `stride` steps (and at n_steps).
/// Throws PreconditionError if psi0 is not normalized within 1e-10.
void propagate_dirac(const SpinorField& psi0, const DiracParams& params, std::size_t n_steps, std::size_t stride,
                     const SpinorObserver& observer);

SpinorTrajectory propagate_dirac(const SpinorField& psi0, const DiracParams& params, std::size_t n_steps,
                                 std::size_t stride = 1);

struct DiracObservables {
  double time = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double norm = 0.0;
  double mean_velocity = 0.0;  // <c gamma^0 gamma^1>
};

DiracObservables dirac_observables(const SpinorField& psi, const Constants& k, double time = 0.0);

/// <c e (d_1 A_nu) gamma^0 gamma^nu>, the covariant force on p_1.
double dirac_mean_force(const SpinorField& psi, const Potential& pot, const Constants& k);

struct EhrenfestSample {
  double time = 0.0;
  double r_x = 0.0;
  double r_p = 0.0;
};

/// Residuals of d<x>/dt = <c gamma^0 gamma^1> and d<p_1>/dt = <c e d_1A_nu gamma^0 gamma^nu>
/// at interior frames, with centered differences on equally spaced frames.
std::vector<EhrenfestSample> ehrenfest_residuals(const SpinorTrajectory& trajectory, const DiracParams& params);

struct GaussianPacket {
  double x0 = -5.0;
  double p0 = 2.0;
  double sigma = 1.0;
  Spinor direction = Spinor(1.0, 0.0, 0.0, 0.0);
};

/// exp(-(x - x0)^2 / (2 sigma^2) + i p0 x / hbar) w, normalized on the grid.
SpinorField gaussian_packet(const PhaseGrid& grid, const GaussianPacket& packet, double hbar);

/// Applies the field-free positive-energy projector P+(p) in momentum space.
SpinorField filter_positive_energy(const SpinorField& psi, const Constants& k);

/// Spectral momentum operator -i hbar d/dx applied componentwise.
SpinorField apply_momentum(const SpinorField& psi, double hbar);

}  // namespace spinkvn
