#include <doctest.h>

#include <numbers>
#include <random>

#include "oracle.hpp"
#include "spinkvn/errors.hpp"
#include "spinkvn/phase_space.hpp"

using namespace spinkvn;

namespace {

constexpr double pi = std::numbers::pi;

PhaseGrid tiny_grid() { return make_grid(4, 4, {-2.0, 2.0, -pi, pi}); }

WignerMatrixField random_field(const PhaseGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WignerMatrixField w(g);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    for (std::size_t q = 0; q < g.np(); ++q) w.at(i, q) = oracle::random_density(rng);
  }
  return w;
}

double max_diff(const WignerMatrixField& a, const WignerMatrixField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

double max_diff(const oracle::VecX& a, const WignerMatrixField& b) { return (a - oracle::flatten(b)).cwiseAbs().maxCoeff(); }

std::vector<std::array<double, 4>> gradients(const PhaseGrid& g, const Potential& pot) {
  std::vector<std::array<double, 4>> out(g.nx(), {0.0, 0.0, 0.0, 0.0});
  if (pot.is_uniform()) return out;
  for (std::size_t i = 0; i < g.nx(); ++i) out[i] = pot.gradient(g.x(i));
  return out;
}

// Positive-energy projectors per (x,p) block from eigenvectors, pi^1 = p + e A_1(x).
std::vector<oracle::Mat4> eigen_projectors(const PhaseGrid& g, const Potential& pot, const Constants& k) {
  std::vector<oracle::Mat4> out;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    for (std::size_t q = 0; q < g.np(); ++q) {
      out.push_back(oracle::projector_by_eigen(g.p(q) + k.e * pot.covariant(g.x(i))[1], k.m, k.c));
    }
  }
  return out;
}

WignerMatrixField run(WignerMatrixField w, const KvnParams& params, std::size_t steps) {
  const PhaseSpacePropagator prop(w.grid(), params);
  for (std::size_t s = 0; s < steps; ++s) prop.step(w);
  return w;
}

WignerMatrixField filtered_gaussian(const PhaseGrid& g, const Constants& k, const GaussianPacket& packet = {}) {
  const SpinorField psi = filter_positive_energy(gaussian_packet(g, packet, k.hbar), k);
  return project_state(wigner_transform(psi, g, k.hbar), Potential::free(), k);
}

}  // namespace

TEST_CASE("alpha exponential matches a series exponential") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 0; n < 20; ++n) {
    const double s = u(rng), tau = u(rng);
    const std::array<double, 3> v{u(rng), u(rng), u(rng)};
    oracle::Mat4 m = s * oracle::Mat4::Identity();
    for (int j = 0; j < 3; ++j) m += v[std::size_t(j)] * oracle::alpha(j + 1);
    const oracle::MatX ref = oracle::expm(Complex(0.0, -1.0) * m, tau);
    CHECK((alpha_exponential(s, v, tau) - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK(max_abs_entry(alpha_exponential(0.0, {0.0, 0.0, 0.0}, 1.0) - Matrix4::Identity()) == 0.0);
}

TEST_CASE("kinetic step on a single Fourier mode matches the 16-dimensional ODE") {
  const Constants k{1.3, 1.0, 1.0, 1.0};
  const PhaseGrid g = make_grid(16, 8, {-4.0, 4.0, -pi, pi});
  const std::vector<double> lambdas = g.lambdas();
  std::mt19937_64 rng(5);
  for (std::size_t j : {1, 3, 7, 9, 12}) {
    const oracle::Mat4 b = oracle::random_hermitian(rng) + Complex(0.0, 1.0) * oracle::random_hermitian(rng);
    WignerMatrixField w(g);
    for (std::size_t i = 0; i < g.nx(); ++i) {
      for (std::size_t q = 0; q < g.np(); ++q) w.at(i, q) = std::polar(1.0, lambdas[j] * g.x(i)) * b;
    }
    const double dt = 0.11;
    const WignerMatrixField out = kvn_kinetic_step(w, dt, KvnParams{k, dt});

    // dB/dt = -(i/2)(M B + B M), M = c lambda alpha_1, on row-major vec(B)
    const oracle::Mat4 m = k.c * lambdas[j] * oracle::alpha(1);
    oracle::MatX gen = oracle::MatX::Zero(16, 16);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        for (int s = 0; s < 4; ++s) {
          gen(r * 4 + c, s * 4 + c) += Complex(0.0, -0.5) * m(r, s);
          gen(r * 4 + c, r * 4 + s) += Complex(0.0, -0.5) * m(s, c);
        }
      }
    }
    const oracle::MatX prop = oracle::expm(gen, dt);
    Eigen::VectorXcd vb(16);
    for (int r = 0; r < 16; ++r) vb(r) = b(r / 4, r % 4);
    const Eigen::VectorXcd ref = prop * vb;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
      for (std::size_t q = 0; q < g.np(); ++q) {
        for (int r = 0; r < 16; ++r) {
          worst = std::max(worst, std::abs(out.at(i, q)(r / 4, r % 4) - std::polar(1.0, lambdas[j] * g.x(i)) * ref(r)));
        }
      }
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("field step on a single (x, theta) mode matches the 16-dimensional ODE") {
  const Constants k{1.0, 1.0, 1.0, 0.7};
  const PhaseGrid g = make_grid(8, 16, {-4.0, 4.0, -pi, pi});
  const Potential pot = Potential::polynomial({Quadratic{0.0, 0.4, 0.1}, Quadratic{0.0, -0.3}, Quadratic{0.0, 0.2}, Quadratic{}});
  const std::vector<double> thetas = g.thetas();
  std::mt19937_64 rng(7);
  const std::size_t a = 5, j = 3;
  const oracle::Mat4 b = oracle::random_hermitian(rng);
  WignerMatrixField w(g);
  for (std::size_t q = 0; q < g.np(); ++q) w.at(a, q) = std::polar(1.0, thetas[j] * g.p(q)) * b;
  const double dt = 0.2;
  const WignerMatrixField out = kvn_field_step(w, dt, KvnParams{k, dt, pot});

  const Covector grad = pot.gradient(g.x(a));
  oracle::Mat4 m = oracle::Mat4::Zero();
  for (int nu = 0; nu < 4; ++nu) m += -k.c * k.e * grad[std::size_t(nu)] * thetas[j] * oracle::alpha(nu);
  oracle::MatX gen = oracle::MatX::Zero(16, 16);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      for (int s = 0; s < 4; ++s) {
        gen(r * 4 + c, s * 4 + c) += Complex(0.0, -0.5) * m(r, s);
        gen(r * 4 + c, r * 4 + s) += Complex(0.0, -0.5) * m(s, c);
      }
    }
  }
  const oracle::MatX prop = oracle::expm(gen, dt);
  Eigen::VectorXcd vb(16);
  for (int r = 0; r < 16; ++r) vb(r) = b(r / 4, r % 4);
  const Eigen::VectorXcd ref = prop * vb;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    for (std::size_t q = 0; q < g.np(); ++q) {
      for (int r = 0; r < 16; ++r) {
        const Complex expect = i == a ? std::polar(1.0, thetas[j] * g.p(q)) * ref(r) : Complex(0.0);
        worst = std::max(worst, std::abs(out.at(i, q)(r / 4, r % 4) - expect));
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("steps keep an under-resolved field Hermitian") {
  // random blocks put weight on the Nyquist modes of both axes
  const PhaseGrid g = make_grid(16, 16, {-4.0, 4.0, -5.0, 5.0});
  const Potential pot = Potential::polynomial({Quadratic{0.0, 0.3, 0.1}, Quadratic{0.0, 0.2}, Quadratic{}, Quadratic{}});
  for (EvolutionMode mode : {EvolutionMode::kvn, EvolutionMode::spohn}) {
    WignerMatrixField w = random_field(g, 41);
    if (mode == EvolutionMode::spohn) w = project_state(w, pot, Constants{});
    const WignerMatrixField out = run(w, KvnParams{Constants{}, 0.05, pot, mode}, 40);
    CHECK(out.max_hermiticity_defect() < 1e-12);
  }
}

TEST_CASE("trivial sub-steps and trace conservation") {
  const PhaseGrid g = make_grid(32, 32, {-8.0, 8.0, -6.0, 6.0});
  const WignerMatrixField w = random_field(g, 11);
  CHECK(max_diff(kvn_kinetic_step(w, 0.0, KvnParams{}), w) == 0.0);
  CHECK(max_diff(kvn_field_step(w, 0.05, KvnParams{}), w) == 0.0);
  CHECK(max_diff(kvn_field_step(w, 0.05, KvnParams{Constants{}, 0.05, Potential::scalar_linear(3.0, 0.0)}), w) == 0.0);

  const WignerMatrixField wk = kvn_kinetic_step(w, 0.05, KvnParams{});
  CHECK(std::abs(wk.total_trace() - w.total_trace()) < 1e-10);

  KvnParams params{Constants{}, 0.01, Potential::scalar_quadratic(0.0, 0.2, 0.05)};
  const WignerMatrixField w1000 = run(w, params, 1000);
  CHECK(std::abs(w1000.total_trace() - w.total_trace()) < 1e-8);
}

TEST_CASE("uniform force shifts the mean momentum by F dt per step") {
  const Constants k;
  // theta band edge pi/dp = 16, where the Gaussian spectrum is ~e^-64
  const PhaseGrid g = natural_grid(128, -16.0, 16.0, 1.0);
  const WignerMatrixField w = wigner_transform(gaussian_packet(g, {0.0, 0.0, 1.0, Spinor(1, 0, 0, 0)}, 1.0), g, 1.0);
  const double force = 0.5, dt = 0.01;
  const KvnParams params{k, dt, Potential::uniform_force(force, k)};
  const double p0 = phase_space_observables(w, params.potential, k).mean_p;
  WignerMatrixField cur = w;
  for (int s = 1; s <= 10; ++s) {
    cur = kvn_field_step(cur, dt, params);
    CHECK(std::abs(phase_space_observables(cur, params.potential, k).mean_p - (p0 + force * dt * s)) < 1e-10);
  }
  // and through full steps (free kinetic flow leaves the p-marginal alone)
  const WignerMatrixField full = run(w, params, 10);
  CHECK(std::abs(phase_space_observables(full, params.potential, k).mean_p - (p0 + 10 * force * dt)) < 1e-10);
}

TEST_CASE("dense oracle: KvN on a 4x4 grid") {
  const PhaseGrid g = tiny_grid();
  const Constants k{1.0, 1.0, 1.0, 1.0};
  const WignerMatrixField w0 = random_field(g, 13);
  const double dt = 0.05;
  const std::size_t steps = 50;
  struct Case {
    const char* name;
    Potential pot;
  };
  for (const Case& c : {Case{"free", Potential::free()}, Case{"linear A0", Potential::scalar_linear(0.2, 0.35)},
                        Case{"linear A0 + A1", Potential::polynomial({Quadratic{0.0, 0.35}, Quadratic{0.1, -0.25},
                                                                     Quadratic{}, Quadratic{}})}}) {
    CAPTURE(c.name);
    const oracle::MatX gen = oracle::kvn_generator(g, k.c, k.e, gradients(g, c.pot));
    const oracle::VecX ref = oracle::expm(gen, dt * double(steps)) * oracle::flatten(w0);
    const WignerMatrixField got = run(w0, KvnParams{k, dt, c.pot}, steps);
    CHECK(max_diff(ref, got) < 1e-8);
  }

  // non-commuting split: quadratic A0 and A2, small step
  const Potential quad = Potential::polynomial({Quadratic{0.0, 0.1, 0.05}, Quadratic{}, Quadratic{0.0, 0.0, 0.04}, Quadratic{}});
  const oracle::MatX gen = oracle::kvn_generator(g, k.c, k.e, gradients(g, quad));
  const double small = 2e-4;
  const oracle::VecX ref = oracle::expm(gen, small * double(steps)) * oracle::flatten(w0);
  CHECK(max_diff(ref, run(w0, KvnParams{k, small, quad}, steps)) < 1e-8);
}

TEST_CASE("dense oracle: Spohn on a 4x4 grid") {
  const PhaseGrid g = tiny_grid();
  const Constants k{1.0, 1.0, 1.0, 1.0};
  for (const Potential& pot : {Potential::free(), Potential::polynomial({Quadratic{0.0, 0.3}, Quadratic{0.0, -0.2},
                                                                         Quadratic{}, Quadratic{}})}) {
    const oracle::MatX proj = oracle::projection_superop(eigen_projectors(g, pot, k));
    const oracle::MatX gen = oracle::kvn_generator(g, k.c, k.e, gradients(g, pot));
    WignerMatrixField w0(g);
    oracle::unflatten(proj * oracle::flatten(random_field(g, 17)), w0);

    // exact projected flow dW/dt = P G W from a projected start
    const double dt = 1e-6;
    const oracle::VecX exact = oracle::expm(proj * gen * proj, 50 * dt) * oracle::flatten(w0);
    const WignerMatrixField got = run(w0, KvnParams{k, dt, pot, EvolutionMode::spohn}, 50);
    CHECK(max_diff(exact, got) < 1e-8);

    // the discrete scheme itself: W <- P exp(dt G) W, composed 50 times at a large step
    const double big = 0.05;
    const oracle::MatX one = proj * oracle::expm(gen, big);
    oracle::VecX v = oracle::flatten(w0);
    for (int s = 0; s < 50; ++s) v = one * v;
    CHECK(max_diff(v, run(w0, KvnParams{k, big, pot, EvolutionMode::spohn}, 50)) < 1e-8);

    // first-order convergence to the projected flow at fixed time
    const double t = 0.4;
    const oracle::VecX target = oracle::expm(proj * gen * proj, t) * oracle::flatten(w0);
    const double e1 = max_diff(target, run(w0, KvnParams{k, t / 20, pot, EvolutionMode::spohn}, 20));
    const double e2 = max_diff(target, run(w0, KvnParams{k, t / 40, pot, EvolutionMode::spohn}, 40));
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("spohn steps preserve the projected subspace and never grow the trace") {
  const Constants k;
  const PhaseGrid g = natural_grid(64, -8.0, 8.0, 1.0);
  const WignerMatrixField w0 = filtered_gaussian(g, k, {-2.0, 1.0, 1.0, Spinor(1, 0, 0, 0)});
  const KvnParams params{k, 0.02, Potential::uniform_force(0.3, k), EvolutionMode::spohn};
  const PhaseSpacePropagator prop(g, params);
  WignerMatrixField w = w0;
  double prev = w.total_trace().real();
  double worst_proj = 0.0;
  bool monotone = true;
  for (int s = 0; s < 100; ++s) {
    prop.step(w);
    worst_proj = std::max(worst_proj, max_diff(project_state(w, params.potential, k), w));
    const double tr = w.total_trace().real();
    monotone = monotone && tr <= prev + 1e-13;
    prev = tr;
  }
  CHECK(worst_proj < 1e-12);
  CHECK(monotone);
  CHECK(antiparticle_fraction(w, params.potential, k) < 1e-8);
}

TEST_CASE("classical evolution operators do not depend on hbar") {
  const PhaseGrid g = make_grid(16, 16, {-4.0, 4.0, -5.0, 5.0});
  const WignerMatrixField w0 = random_field(g, 19);
  const Potential pot = Potential::polynomial({Quadratic{0.0, 0.2, 0.03}, Quadratic{0.0, 0.1}, Quadratic{}, Quadratic{}});
  for (EvolutionMode mode : {EvolutionMode::kvn, EvolutionMode::spohn}) {
    WignerMatrixField start = w0;
    if (mode == EvolutionMode::spohn) start = project_state(w0, pot, Constants{});
    std::vector<WignerMatrixField> outs;
    for (double hbar : {0.5, 1.0, 2.0}) outs.push_back(run(start, KvnParams{Constants{1.0, hbar, 1.0, 1.0}, 0.02, pot, mode}, 20));
    CHECK(max_diff(outs[0], outs[1]) == 0.0);
    CHECK(max_diff(outs[0], outs[2]) == 0.0);
  }
}

TEST_CASE("KvN propagation is linear") {
  const PhaseGrid g = make_grid(16, 16, {-4.0, 4.0, -5.0, 5.0});
  const WignerMatrixField a = random_field(g, 23), b = random_field(g, 29);
  const KvnParams params{Constants{}, 0.02, Potential::scalar_quadratic(0.0, 0.2, 0.04)};
  const double alpha = 0.7, beta = -1.9;
  WignerMatrixField mix(g);
  for (std::size_t k = 0; k < mix.data().size(); ++k) mix.data()[k] = alpha * a.data()[k] + beta * b.data()[k];
  const WignerMatrixField ra = run(a, params, 30), rb = run(b, params, 30), rm = run(mix, params, 30);
  double worst = 0.0;
  for (std::size_t k = 0; k < mix.data().size(); ++k) {
    worst = std::max(worst, std::abs(rm.data()[k] - (alpha * ra.data()[k] + beta * rb.data()[k])));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("serial and parallel steps agree") {
  const PhaseGrid g = make_grid(32, 32, {-8.0, 8.0, -6.0, 6.0});
  const WignerMatrixField w0 = project_state(random_field(g, 31), Potential::free(), Constants{});
  for (EvolutionMode mode : {EvolutionMode::kvn, EvolutionMode::spohn}) {
    KvnParams p{Constants{}, 0.02, Potential::uniform_force(0.4, Constants{}), mode, Exec::serial};
    const WignerMatrixField s = run(w0, p, 5);
    p.exec = Exec::parallel;
    CHECK(max_diff(s, run(w0, p, 5)) < 1e-14);
  }
}

TEST_CASE("Ehrenfest residuals on the default grid") {
  const Constants k;
  const PhaseGrid g = natural_grid(256, -16.0, 16.0, 1.0);
  const WignerMatrixField w0 = filtered_gaussian(g, k);

  SUBCASE("kvn free") {
    const KvnParams params{k, 1e-3};
    const auto res = phase_space_ehrenfest_residuals(propagate_phase_space(w0, params, 5), params);
    for (const auto& r : res) {
      CHECK(r.r_x < 1e-4);
      CHECK(r.r_p < 1e-10);
    }
  }
  SUBCASE("kvn uniform force") {
    const KvnParams params{k, 1e-3, Potential::uniform_force(0.5, k)};
    const auto res = phase_space_ehrenfest_residuals(propagate_phase_space(w0, params, 5), params);
    for (const auto& r : res) {
      CHECK(r.r_x < 1e-4);
      CHECK(r.r_p < 1e-8);
    }
  }
  SUBCASE("spohn free") {
    const KvnParams params{k, 1e-3, Potential::free(), EvolutionMode::spohn};
    const auto res = phase_space_ehrenfest_residuals(propagate_phase_space(w0, params, 5), params);
    for (const auto& r : res) {
      CHECK(r.r_x < 1e-4);
      CHECK(r.r_p < 1e-4);
    }
  }
}

TEST_CASE("spohn centroid moves at the classical velocity") {
  const Constants k;
  const PhaseGrid g = natural_grid(128, -16.0, 16.0, 1.0);
  const double p0 = 2.0;
  const WignerMatrixField w0 = filtered_gaussian(g, k, {-5.0, p0, 2.0, Spinor(1, 0, 0, 0)});
  const KvnParams params{k, 0.02, Potential::free(), EvolutionMode::spohn};
  const double v = k.c * k.c * p0 / std::sqrt(k.m * k.m * k.c * k.c * k.c * k.c + k.c * k.c * p0 * p0);
  double x_start = 0.0, worst = 0.0;
  propagate_phase_space(w0, params, 300, 25, [&](std::size_t s, double t, const WignerMatrixField& w) {
    const double x = phase_space_observables(w, params.potential, k, t).mean_x;
    if (s == 0) x_start = x;
    worst = std::max(worst, std::abs(x - (x_start + v * t)));
  });
  CHECK(worst < 2.0 * g.dx());
}

TEST_CASE("phase-space preconditions and guards") {
  const PhaseGrid g = make_grid(16, 16, {-4.0, 4.0, -5.0, 5.0});
  const WignerMatrixField w = random_field(g, 37);
  CHECK_THROWS_AS(PhaseSpacePropagator(g, KvnParams{Constants{}, 0.5}), ConfigError);
  CHECK_THROWS_AS(PhaseSpacePropagator(g, KvnParams{Constants{}, 0.0}), ConfigError);
  CHECK_THROWS_AS(PhaseSpacePropagator(g, KvnParams{Constants{}, 0.1, Potential::scalar_linear(0.0, 20.0)}), ConfigError);
  CHECK_THROWS_AS(PhaseSpacePropagator(g, KvnParams{Constants{1, 1, 0, 1}, 0.1, Potential::free(), EvolutionMode::spohn}),
                  ConfigError);
  const Potential tab = Potential::tabulated(-4.0, 0.5, std::vector<Covector>(16, Covector{0.1, 0, 0, 0}));
  CHECK_THROWS_AS(kvn_field_step(w, 0.1, KvnParams{Constants{}, 0.1, tab}), ConfigError);

  WignerMatrixField bad = w;
  bad.at(2, 3)(0, 1) += 0.5;
  CHECK_THROWS_AS(propagate_phase_space(bad, KvnParams{Constants{}, 0.1}, 2), PreconditionError);
  WignerMatrixField negative = w;
  for (auto& z : negative.data()) z = -z;
  CHECK_THROWS_AS(propagate_phase_space(negative, KvnParams{Constants{}, 0.1}, 2), PreconditionError);
  CHECK_THROWS_AS(propagate_phase_space(w, KvnParams{Constants{}, 0.1, Potential::free(), EvolutionMode::spohn}, 2),
                  PreconditionError);
  CHECK_THROWS_AS(propagate_phase_space(w, KvnParams{Constants{}, 0.1}, 2, 0), PreconditionError);

  const KvnParams params{Constants{}, 0.1};
  CHECK_THROWS_AS(phase_space_ehrenfest_residuals(propagate_phase_space(w, params, 1), params), PreconditionError);
  WignerMatrixField other(make_grid(8, 16, {-4.0, 4.0, -5.0, 5.0}));
  CHECK_THROWS_AS(PhaseSpacePropagator(g, params).step(other), PreconditionError);
}
