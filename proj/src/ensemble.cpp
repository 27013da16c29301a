#include "spinkvn/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spinkvn/errors.hpp"

namespace spinkvn {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

EnsembleState sample_from_wigner(const PhaseSpaceDensity& w, std::size_t n, std::uint64_t seed, const Constants& k,
                                 const Potential& pot) {
  const PhaseGrid& g = w.grid;
  std::vector<double> cdf(w.values.size());
  double acc = 0.0;
  for (std::size_t b = 0; b < w.values.size(); ++b) {
    acc += std::max(w.values[b], 0.0);
    cdf[b] = acc;
  }
  if (!(acc > 0.0)) throw PreconditionError("Wigner representation has no positive mass to sample");

  EnsembleState s;
  s.constants = k;
  s.potential = pot;
  s.particles.resize(n);
  std::mt19937_64 rng(seed);
  for (Particle& q : s.particles) {
    const double u = unit_uniform(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // skip empty cells that share the cumulative value
    while (it != cdf.end() && w.values[static_cast<std::size_t>(it - cdf.begin())] <= 0.0) ++it;
    const std::size_t b = std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    const std::size_t i = b / g.np();
    const std::size_t j = b % g.np();
    q.x = g.x(i) + (unit_uniform(rng) - 0.5) * g.dx();
    q.p = g.p(j) + (unit_uniform(rng) - 0.5) * g.dp();
  }
  return s;
}

std::array<double, 2> ensemble_velocity(const Particle& q, const Potential& pot, const Constants& k) {
  const auto pi = kinetic_momentum(q.p, q.x, pot, k);
  const double mc2 = k.m * k.c * k.c;
  const double energy = std::sqrt(mc2 * mc2 + k.c * k.c * (pi[0] * pi[0] + pi[1] * pi[1] + pi[2] * pi[2]));
  const double c2 = k.c * k.c;
  double dp1 = 0.0;
  if (!pot.is_uniform()) {
    const Covector g = pot.gradient(q.x);
    dp1 = k.c * k.e * g[0] + c2 * k.e / energy * (g[1] * pi[0] + g[2] * pi[1] + g[3] * pi[2]);
  }
  return {c2 * pi[0] / energy, -dp1};
}

double particle_energy(const Particle& q, const Potential& pot, const Constants& k) {
  return kinetic_energy(q.p, q.x, pot, k) + k.c * k.e * pot.covariant(q.x)[0];
}

void rk4_step(EnsembleState& s, double dt, Exec exec) {
  const Constants& k = s.constants;
  const Potential& pot = s.potential;
  const double mc2 = k.m * k.c * k.c;
  auto deriv = [&](const Particle& q) {
    const auto v = ensemble_velocity(q, pot, k);
    return std::array<double, 3>{v[0], v[1], mc2 / kinetic_energy(q.p, q.x, pot, k)};
  };
  auto shift = [](const Particle& q, const std::array<double, 3>& d, double h) {
    return Particle{q.x + h * d[0], q.p + h * d[1], q.tau + h * d[2]};
  };
  parallel_for(s.particles.size(), exec, [&](std::size_t idx) {
    Particle& q = s.particles[idx];
    const auto k1 = deriv(q);
    const auto k2 = deriv(shift(q, k1, 0.5 * dt));
    const auto k3 = deriv(shift(q, k2, 0.5 * dt));
    const auto k4 = deriv(shift(q, k3, dt));
    q.x += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    q.p += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    q.tau += dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
  });
  s.time += dt;
}

void integrate_ensemble(EnsembleState state, double dt, std::size_t n_steps, std::size_t stride,
                        const EnsembleObserver& observer, Exec exec) {
  if (!(dt > 0.0)) throw PreconditionError("ensemble time step must be positive");
  if (stride == 0) throw PreconditionError("frame stride must be positive");
  const double t0 = state.time;
  observer(0, state);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    rk4_step(state, dt, exec);
    // keep frame times identical to the field solvers' s * dt
    state.time = t0 + static_cast<double>(s) * dt;
    if (s % stride == 0 || s == n_steps) observer(s, state);
  }
}

std::vector<EnsembleState> integrate_ensemble(const EnsembleState& state, double dt, std::size_t n_steps,
                                              std::size_t stride, Exec exec) {
  std::vector<EnsembleState> out;
  integrate_ensemble(state, dt, n_steps, stride, [&](std::size_t, const EnsembleState& s) { out.push_back(s); },
                     exec);
  return out;
}

EnsembleMoments ensemble_moments(const EnsembleState& s) {
  EnsembleMoments m;
  if (s.particles.empty()) return m;
  for (const Particle& q : s.particles) {
    m.mean_x += q.x;
    m.mean_p += q.p;
  }
  const auto n = static_cast<double>(s.particles.size());
  m.mean_x /= n;
  m.mean_p /= n;
  return m;
}

Particle hyperbolic_motion(double x0, double p0, double force, double t, const Constants& k) {
  const double mc2 = k.m * k.c * k.c;
  auto energy = [&](double p) { return std::sqrt(mc2 * mc2 + k.c * k.c * p * p); };
  Particle q;
  q.p = p0 + force * t;
  q.x = force == 0.0 ? x0 + k.c * k.c * p0 / energy(p0) * t : x0 + (energy(q.p) - energy(p0)) / force;
  // dtau = mc^2 dt / K integrates to (mc/F)(asinh(p/mc) - asinh(p0/mc))
  const double mc = k.m * k.c;
  q.tau = force == 0.0 ? mc2 / energy(p0) * t : mc / force * (std::asinh(q.p / mc) - std::asinh(p0 / mc));
  return q;
}

}  // namespace spinkvn
