#include "spinkvn/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spinkvn/errors.hpp"

namespace spinkvn {

using namespace std::complex_literals;

Matrix4 alpha_exponential(double s, const std::array<double, 3>& v, double tau) {
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  Matrix4 out = std::cos(tau * norm) * Matrix4::Identity();
  if (norm > 0.0) {
    const double sn = std::sin(tau * norm) / norm;
    for (int k = 0; k < 3; ++k) out -= 1i * sn * v[static_cast<std::size_t>(k)] * gamma0_gamma(k + 1);
  }
  return std::polar(1.0, -tau * s) * out;
}

namespace {

double max_abs(std::span<const Complex> d) {
  double m = 0.0;
  for (const Complex& z : d) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

PhaseSpacePropagator::PhaseSpacePropagator(const PhaseGrid& grid, KvnParams params)
    : grid_(grid),
      params_(std::move(params)),
      fft_x_(1, grid.nx(), grid.np() * 16, 16),
      fft_p_(grid.nx(), grid.np(), 16, 16) {
  const Constants& k = params_.constants;
  if (!(params_.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(k.c > 0.0 && k.e > 0.0)) throw ConfigError("c and e must be positive");

  const double max_lambda = std::numbers::pi / grid_.dx();
  if (params_.dt * k.c * max_lambda >= std::numbers::pi) {
    std::ostringstream os;
    os << "kinetic sampling guard violated: dt c max|lambda| = " << params_.dt * k.c * max_lambda << " >= pi";
    throw ConfigError(os.str());
  }

  has_field_ = !params_.potential.is_uniform();
  if (has_field_) {
    if (!params_.potential.has_gradient()) throw ConfigError("tabulated potential has no derivative data");
    gradients_.resize(grid_.nx());
    const double max_theta = std::numbers::pi / grid_.dp();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid_.nx(); ++i) {
      gradients_[i] = params_.potential.gradient(grid_.x(i));
      const Covector& g = gradients_[i];
      const double vn = std::sqrt(g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
      worst = std::max(worst, k.c * k.e * max_theta * (std::abs(g[0]) + vn));
    }
    if (params_.dt * worst >= std::numbers::pi) {
      std::ostringstream os;
      os << "field sampling guard violated: dt max|M| = " << params_.dt * worst << " >= pi";
      throw ConfigError(os.str());
    }
    field_half_ = field_table(0.5 * params_.dt);
  }
  kinetic_full_ = kinetic_table(params_.dt);

  if (params_.mode == EvolutionMode::spohn) {
    if (!(k.m > 0.0)) throw ConfigError("spohn mode needs m > 0 (projector denominator K vanishes)");
    projector_ = make_projector_table(grid_, params_.potential, k);
  }
}

namespace {

// The Nyquist wavenumber has no +- partner, so a sandwich with it would break
// the Hermiticity of W in x (or p); it is taken as zero, as for any odd
// spectral derivative.
std::vector<double> paired_frequencies(std::vector<double> f) {
  if (f.size() > 1) f[f.size() / 2] = 0.0;
  return f;
}

}  // namespace

MatrixTable PhaseSpacePropagator::kinetic_table(double dt) const {
  const double c = params_.constants.c;
  const std::vector<double> lambdas = paired_frequencies(grid_.lambdas());
  MatrixTable table(grid_.nx());
  for (std::size_t i = 0; i < grid_.nx(); ++i) table[i] = alpha_exponential(0.0, {c * lambdas[i], 0.0, 0.0}, 0.5 * dt);
  return table;
}

MatrixTable PhaseSpacePropagator::field_table(double dt) const {
  const double ce = params_.constants.c * params_.constants.e;
  const std::vector<double> thetas = paired_frequencies(grid_.thetas());
  const std::size_t np = grid_.np();
  MatrixTable table(grid_.nx() * np);
  for (std::size_t i = 0; i < grid_.nx(); ++i) {
    const Covector& g = gradients_[i];
    for (std::size_t q = 0; q < np; ++q) {
      const double f = -ce * thetas[q];
      table[i * np + q] = alpha_exponential(f * g[0], {f * g[1], f * g[2], f * g[3]}, 0.5 * dt);
    }
  }
  return table;
}

void PhaseSpacePropagator::apply_kinetic(WignerMatrixField& w, const MatrixTable& table) const {
  fft_x_.forward(w.data(), params_.exec);
  kernels::sandwich(w.data(), table, BlockMap{grid_.np(), grid_.nx()}, params_.exec);
  fft_x_.inverse(w.data(), params_.exec);
}

void PhaseSpacePropagator::apply_field(WignerMatrixField& w, const MatrixTable& table) const {
  fft_p_.forward(w.data(), params_.exec);
  kernels::sandwich(w.data(), table, BlockMap{1, grid_.nx() * grid_.np()}, params_.exec);
  fft_p_.inverse(w.data(), params_.exec);
}

void PhaseSpacePropagator::kinetic_step(WignerMatrixField& w, double dt) const {
  if (!w.grid().same_as(grid_)) throw PreconditionError("Wigner field grid does not match the propagator");
  apply_kinetic(w, dt == params_.dt ? kinetic_full_ : kinetic_table(dt));
}

void PhaseSpacePropagator::field_step(WignerMatrixField& w, double dt) const {
  if (!w.grid().same_as(grid_)) throw PreconditionError("Wigner field grid does not match the propagator");
  if (!has_field_) return;
  apply_field(w, dt == 0.5 * params_.dt ? field_half_ : field_table(dt));
}

void PhaseSpacePropagator::project(WignerMatrixField& w) const {
  if (projector_.table.empty()) throw PreconditionError("propagator was not built in spohn mode");
  kernels::sandwich(w.data(), projector_.table, projector_.map, params_.exec);
}

void PhaseSpacePropagator::step(WignerMatrixField& w) const {
  if (!w.grid().same_as(grid_)) throw PreconditionError("Wigner field grid does not match the propagator");
  if (has_field_) apply_field(w, field_half_);
  apply_kinetic(w, kinetic_full_);
  if (has_field_) apply_field(w, field_half_);
  if (params_.mode == EvolutionMode::spohn) project(w);
}

WignerMatrixField kvn_kinetic_step(const WignerMatrixField& w, double dt, const KvnParams& params) {
  WignerMatrixField out = w;
  if (dt == 0.0) return out;
  KvnParams p = params;
  p.dt = std::abs(dt);
  p.mode = EvolutionMode::kvn;
  p.potential = Potential::free();
  const PhaseSpacePropagator prop(w.grid(), p);
  prop.kinetic_step(out, dt);
  return out;
}

WignerMatrixField kvn_field_step(const WignerMatrixField& w, double dt, const KvnParams& params) {
  WignerMatrixField out = w;
  if (dt == 0.0) return out;
  if (params.potential.kind() == PotentialKind::tabulated && !params.potential.has_gradient()) {
    throw ConfigError("tabulated potential has no derivative data");
  }
  KvnParams p = params;
  p.dt = std::abs(dt);
  p.mode = EvolutionMode::kvn;
  const PhaseSpacePropagator prop(w.grid(), p);
  prop.field_step(out, dt);
  return out;
}

namespace {

void check_initial_state(const WignerMatrixField& w0, const KvnParams& params) {
  const double scale = max_abs(w0.data());
  const double tol = 1e-9 * scale + 1e-14;
  if (w0.max_hermiticity_defect() > tol) throw PreconditionError("initial Wigner field is not pointwise Hermitian");
  if (w0.total_trace().real() < 0.0) throw PreconditionError("initial Wigner field has negative total trace");
  if (params.mode == EvolutionMode::spohn) {
    const WignerMatrixField projected = project_state(w0, params.potential, params.constants, params.exec);
    double worst = 0.0;
    for (std::size_t q = 0; q < projected.data().size(); ++q) {
      worst = std::max(worst, std::abs(projected.data()[q] - w0.data()[q]));
    }
    if (worst > tol) throw PreconditionError("spohn mode needs an antiparticle-free initial state (W = P+ W P+)");
  }
}

}  // namespace

void propagate_phase_space(const WignerMatrixField& w0, const KvnParams& params, std::size_t n_steps,
                           std::size_t stride, const PhaseSpaceObserver& observer) {
  if (stride == 0) throw PreconditionError("frame stride must be positive");
  const PhaseSpacePropagator prop(w0.grid(), params);
  check_initial_state(w0, params);
  WignerMatrixField w = w0;
  observer(0, 0.0, w);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    prop.step(w);
    if (s % stride == 0 || s == n_steps) observer(s, static_cast<double>(s) * params.dt, w);
  }
}

PhaseSpaceTrajectory propagate_phase_space(const WignerMatrixField& w0, const KvnParams& params,
                                           std::size_t n_steps, std::size_t stride) {
  PhaseSpaceTrajectory traj;
  propagate_phase_space(w0, params, n_steps, stride, [&](std::size_t, double t, const WignerMatrixField& w) {
    traj.times.push_back(t);
    traj.frames.push_back(w);
  });
  return traj;
}

namespace {

struct Moments {
  double trace = 0.0;
  double x = 0.0;
  double p = 0.0;
};

Moments moments(const WignerMatrixField& w) {
  const PhaseGrid& g = w.grid();
  Moments m;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    double row = 0.0;
    double row_p = 0.0;
    for (std::size_t q = 0; q < g.np(); ++q) {
      const double tr = w.at(i, q).trace().real();
      row += tr;
      row_p += g.p(q) * tr;
    }
    m.trace += row;
    m.x += g.x(i) * row;
    m.p += row_p;
  }
  const double cell = g.dx() * g.dp();
  m.trace *= cell;
  m.x *= cell;
  m.p *= cell;
  return m;
}

}  // namespace

PhaseSpaceObservables phase_space_observables(const WignerMatrixField& w, const Potential& pot, const Constants& k,
                                              double time, Exec exec) {
  const Moments m = moments(w);
  PhaseSpaceObservables obs;
  obs.time = time;
  obs.trace = m.trace;
  obs.mean_x = m.x / m.trace;
  obs.mean_p = m.p / m.trace;
  obs.antiparticle_fraction = m.trace > 0.0 ? antiparticle_fraction(w, pot, k, exec) : std::nan("");
  return obs;
}

std::vector<EhrenfestSample> phase_space_ehrenfest_residuals(const PhaseSpaceTrajectory& trajectory,
                                                             const KvnParams& params) {
  const std::size_t n = trajectory.frames.size();
  if (n < 3 || trajectory.times.size() != n) throw PreconditionError("Ehrenfest residuals need at least 3 frames");
  const double h = trajectory.times[1] - trajectory.times[0];
  for (std::size_t f = 1; f < n; ++f) {
    if (std::abs((trajectory.times[f] - trajectory.times[f - 1]) - h) > 1e-9 * std::abs(h)) {
      throw PreconditionError("Ehrenfest residuals need equally spaced frames");
    }
  }
  const Constants& k = params.constants;
  const PhaseGrid& g = trajectory.frames.front().grid();
  const bool spohn = params.mode == EvolutionMode::spohn;
  const bool uniform = params.potential.is_uniform();

  std::vector<Moments> mom;
  mom.reserve(n);
  for (const auto& w : trajectory.frames) mom.push_back(moments(w));

  std::vector<EhrenfestSample> out;
  for (std::size_t f = 1; f + 1 < n; ++f) {
    const WignerMatrixField& w = trajectory.frames[f];
    double rhs_x = 0.0;
    double rhs_p1 = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double x = g.x(i);
      Matrix4 force = Matrix4::Zero();
      if (!uniform) {
        const Covector grad = params.potential.gradient(x);
        for (int nu = 0; nu < 4; ++nu) force += k.c * k.e * grad[static_cast<std::size_t>(nu)] * gamma0_gamma(nu);
      }
      for (std::size_t q = 0; q < g.np(); ++q) {
        const Matrix4 wm = w.at(i, q);
        Matrix4 vel = k.c * gamma0_gamma(1);
        Matrix4 frc = force;
        if (spohn) {
          const Matrix4 proj = positive_energy_projector(g.p(q), x, params.potential, k);
          vel = vel * proj;
          frc = frc * proj;
        }
        rhs_x += (wm * vel).trace().real();
        if (!uniform) rhs_p1 += (wm * frc).trace().real();
      }
    }
    const double cell = g.dx() * g.dp();
    rhs_x *= cell;
    rhs_p1 *= cell;
    const double dxdt = (mom[f + 1].x - mom[f - 1].x) / (2.0 * h);
    const double dp1dt = -(mom[f + 1].p - mom[f - 1].p) / (2.0 * h);
    out.push_back({trajectory.times[f], std::abs(dxdt - rhs_x), std::abs(dp1dt - rhs_p1)});
  }
  return out;
}

}  // namespace spinkvn
