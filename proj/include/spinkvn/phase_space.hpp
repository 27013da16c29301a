#pragma once

// Classical spinorial phase-space evolution of a Wigner matrix field:
//
//   kvn:   i dW/dt = (1/2) [gamma^0 gamma^nu, K_nu W]_+
//   spohn: i dW/dt = (1/2) P+ [gamma^0 gamma^nu, K_nu W]_+ P+
//
// with K_nu = -c lambda_nu - c e (d_1 A_nu) theta^1 and lambda_0 = 0. lambda is
// realized as i d/dx and theta^1 as i d/dp_1 = -i d/dp on the physical
// momentum axis, so in the mixed representations both flows are pointwise
// sandwiches W <- E W E with E = exp(-i dt M / 2):
//
//   kinetic (lambda, p):  M = c lambda gamma^0 gamma^1
//   field   (x, theta):   M = -c e theta (d_1 A_nu(x)) gamma^0 gamma^nu
//
// The unpaired Nyquist wavenumbers of lambda and theta are taken as zero.
// A step is the Strang composition field(dt/2) kinetic(dt) field(dt/2); in
// spohn mode the whole step is wrapped as P+ (step W) P+.

#include <cstddef>
#include <functional>
#include <vector>

#include "spinkvn/dirac.hpp"
#include "spinkvn/fft.hpp"
#include "spinkvn/grid.hpp"
#include "spinkvn/kernels.hpp"
#include "spinkvn/potential.hpp"
#include "spinkvn/wigner.hpp"

namespace spinkvn {

enum class EvolutionMode { kvn, spohn };

struct KvnParams {
  Constants constants;
  double dt = 1e-3;
  Potential potential;
  EvolutionMode mode = EvolutionMode::kvn;
  Exec exec = Exec::parallel;
};

/// exp(-i tau (s 1 + v_k gamma^0 gamma^k)), exact since (v.alpha)^2 = |v|^2.
Matrix4 alpha_exponential(double s, const std::array<double, 3>& v, double tau);

class PhaseSpacePropagator {
 public:
  /// Validates guards (dt c max|lambda| < pi, same for the field generator)
  /// and m > 0 in spohn mode; throws ConfigError otherwise.
  PhaseSpacePropagator(const PhaseGrid& grid, KvnParams params);

  /// One full step (Strang, plus projection in spohn mode).
  void step(WignerMatrixField& w) const;

  /// Kinetic flow over `dt` alone.
  void kinetic_step(WignerMatrixField& w, double dt) const;
  /// Field flow over `dt` alone (identity for x-independent potentials).
  void field_step(WignerMatrixField& w, double dt) const;
  /// W <- P+ W P+ (only meaningful in spohn mode, available in both).
  void project(WignerMatrixField& w) const;

  const KvnParams& params() const { return params_; }
  bool has_field_step() const { return has_field_; }

 private:
  MatrixTable kinetic_table(double dt) const;
  MatrixTable field_table(double dt) const;
  void apply_kinetic(WignerMatrixField& w, const MatrixTable& table) const;
  void apply_field(WignerMatrixField& w, const MatrixTable& table) const;

  PhaseGrid grid_;
  KvnParams params_;
  FftAxis fft_x_;
  FftAxis fft_p_;
  bool has_field_ = false;
  std::vector<Covector> gradients_;  // d_1 A_nu at grid x
  MatrixTable kinetic_full_;
  MatrixTable field_half_;
  ProjectorTable projector_;
};

WignerMatrixField kvn_kinetic_step(const WignerMatrixField& w, double dt, const KvnParams& params);
WignerMatrixField kvn_field_step(const WignerMatrixField& w, double dt, const KvnParams& params);

struct PhaseSpaceTrajectory {
  std::vector<double> times;
  std::vector<WignerMatrixField> frames;
};

using PhaseSpaceObserver = std::function<void(std::size_t step, double time, const WignerMatrixField& w)>;

/// Observer runs at step 0, every `stride` steps and at n_steps. Requires W0
/// pointwise Hermitian with nonnegative trace; spohn mode also requires
/// W0 = P+ W0 P+.
void propagate_phase_space(const WignerMatrixField& w0, const KvnParams& params, std::size_t n_steps,
                           std::size_t stride, const PhaseSpaceObserver& observer);

PhaseSpaceTrajectory propagate_phase_space(const WignerMatrixField& w0, const KvnParams& params,
                                           std::size_t n_steps, std::size_t stride = 1);

struct PhaseSpaceObservables {
  double time = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double trace = 0.0;
  double antiparticle_fraction = 0.0;
};

PhaseSpaceObservables phase_space_observables(const WignerMatrixField& w, const Potential& pot,
                                              const Constants& k, double time = 0.0, Exec exec = Exec::parallel);

/// Residuals of the trace-form Ehrenfest relations; in spohn mode P+ is
/// inserted on the right-hand sides.
std::vector<EhrenfestSample> phase_space_ehrenfest_residuals(const PhaseSpaceTrajectory& trajectory,
                                                             const KvnParams& params);

}  // namespace spinkvn
