#pragma once

// Classical relativistic point particles in coordinate time:
//
//   dx/dt   = c^2 (p - eA)^1 / K
//   dp_1/dt = c^2 e (d_1 A_nu)(p^nu - e A^nu) / K
//           = c e d_1 A_0 + (c^2 e / K) sum_k (d_1 A_k)(p - eA)^k
//
// States carry the physical momentum p = p^1 = -p_1. The energy
// c p^0 = K + c e A_0 is derived on demand, never integrated.

#include <cstdint>
#include <functional>
#include <vector>

#include "spinkvn/grid.hpp"
#include "spinkvn/parallel.hpp"
#include "spinkvn/potential.hpp"

namespace spinkvn {

struct Particle {
  double x = 0.0;
  double p = 0.0;
  double tau = 0.0;  // accumulated proper time
  friend bool operator==(const Particle&, const Particle&) = default;
};

struct EnsembleState {
  std::vector<Particle> particles;
  Constants constants;
  Potential potential;
  double time = 0.0;
};

/// Inverse-CDF sampling of max(W, 0) on the flattened grid with uniform
/// jitter inside each (dx, dp) cell centred on its grid point. Throws
/// PreconditionError when the clipped field has no mass.
EnsembleState sample_from_wigner(const PhaseSpaceDensity& w, std::size_t n, std::uint64_t seed,
                                 const Constants& k = {}, const Potential& pot = {});

/// (dx/dt, dp/dt) for the physical momentum.
std::array<double, 2> ensemble_velocity(const Particle& q, const Potential& pot, const Constants& k);

/// c p^0 = K + c e A_0.
double particle_energy(const Particle& q, const Potential& pot, const Constants& k);

/// One classical RK4 step of every particle (proper time integrated along).
void rk4_step(EnsembleState& s, double dt, Exec exec = Exec::parallel);

using EnsembleObserver = std::function<void(std::size_t step, const EnsembleState& s)>;

/// Observer runs at step 0, every `stride` steps and at n_steps. Throws
/// PreconditionError unless dt > 0.
void integrate_ensemble(EnsembleState state, double dt, std::size_t n_steps, std::size_t stride,
                        const EnsembleObserver& observer, Exec exec = Exec::parallel);

std::vector<EnsembleState> integrate_ensemble(const EnsembleState& state, double dt, std::size_t n_steps,
                                              std::size_t stride = 1, Exec exec = Exec::parallel);

struct EnsembleMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
};

EnsembleMoments ensemble_moments(const EnsembleState& s);

/// Closed-form motion under a uniform force F along +x starting from (x0, p0).
Particle hyperbolic_motion(double x0, double p0, double force, double t, const Constants& k);

}  // namespace spinkvn
