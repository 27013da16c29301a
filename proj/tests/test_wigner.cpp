#include <doctest.h>

#include <numbers>
#include <random>

#include "oracle.hpp"
#include "spinkvn/dirac.hpp"
#include "spinkvn/errors.hpp"
#include "spinkvn/wigner.hpp"

using namespace spinkvn;

namespace {

const PhaseGrid& sgrid() {
  static const PhaseGrid g = natural_grid(256, -16.0, 16.0, 1.0);
  return g;
}

SpinorField centred_gaussian(const Spinor& w = Spinor(1, 0, 0, 0), double p0 = 0.0) {
  return gaussian_packet(sgrid(), {0.0, p0, 1.0, w}, 1.0);
}

}  // namespace

TEST_CASE("Gaussian Wigner function matches the analytic oracle") {
  const WignerMatrixField w = wigner_transform(centred_gaussian(), sgrid(), 1.0);
  const PhaseGrid& g = w.grid();
  double worst = 0.0;
  double worst_imag = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    for (std::size_t q = 0; q < g.np(); ++q) {
      const double x = g.x(i), p = g.p(q);
      const Complex tr = w.at(i, q).trace();
      worst = std::max(worst, std::abs(tr.real() - std::exp(-x * x - p * p) / std::numbers::pi));
      worst_imag = std::max(worst_imag, std::abs(tr.imag()));
    }
  }
  CHECK(worst < 1e-8);
  CHECK(worst_imag < 1e-10);
  CHECK(std::abs(w.total_trace() - 1.0) < 1e-8);
  CHECK(w.max_hermiticity_defect() < 1e-14);
  const PhaseSpaceDensity d = wigner_representation(w);
  CHECK(d.at(128, 128) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("moving Gaussian with a general spinor") {
  const double hbar = 0.5;
  const PhaseGrid g = natural_grid(256, -16.0, 16.0, hbar);
  const Spinor w(Complex(0.6, 0.0), Complex(0.0, 0.8), Complex(0.3, -0.1), 0.2);
  const SpinorField psi = gaussian_packet(g, {1.0, 1.5, 1.3, w}, hbar);
  const WignerMatrixField wf = wigner_transform(psi, g, hbar);
  const Spinor u = w / w.norm();
  const Matrix4 uu = u * u.adjoint();
  // W = (1/(pi hbar)) exp(-(x-x0)^2/s^2 - s^2 (p-p0)^2/hbar^2) u u^dagger
  double worst = 0.0;
  for (std::size_t i = 0; i < g.nx(); i += 3) {
    for (std::size_t q = 0; q < g.np(); q += 3) {
      const double x = g.x(i) - 1.0, p = g.p(q) - 1.5, s = 1.3;
      const double f = std::exp(-x * x / (s * s) - s * s * p * p / (hbar * hbar)) / (std::numbers::pi * hbar);
      worst = std::max(worst, (Matrix4(wf.at(i, q)) - f * uu).cwiseAbs().maxCoeff());
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("marginal and velocity consistency") {
  const SpinorField psi = gaussian_packet(sgrid(), {-2.0, 1.0, 0.8, Spinor(1, 0.3, 0, 0.5)}, 1.0);
  const WignerMatrixField w = wigner_transform(psi, sgrid(), 1.0);
  const auto marginal = position_marginal(w);
  double worst = 0.0;
  for (std::size_t i = 0; i < sgrid().nx(); ++i) worst = std::max(worst, std::abs(marginal[i] - psi.at(i).squaredNorm()));
  CHECK(worst < 1e-6);
  double from_w = 0.0;
  for (std::size_t i = 0; i < sgrid().nx(); ++i) {
    for (std::size_t q = 0; q < sgrid().np(); ++q) from_w += (Matrix4(w.at(i, q)) * gamma0_gamma(1)).trace().real();
  }
  from_w *= sgrid().dx() * sgrid().dp();
  CHECK(std::abs(from_w - dirac_observables(psi, Constants{}).mean_velocity) < 1e-8);
}

TEST_CASE("serial and parallel Wigner transforms agree") {
  const SpinorField psi = gaussian_packet(sgrid(), {}, 1.0);
  const WignerMatrixField a = wigner_transform(psi, sgrid(), 1.0, Exec::serial);
  const WignerMatrixField b = wigner_transform(psi, sgrid(), 1.0, Exec::parallel);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  CHECK(worst < 1e-15);
}

TEST_CASE("Wigner grid pairing checks") {
  const SpinorField psi = centred_gaussian();
  const double pm = std::numbers::pi / 0.125;
  CHECK_NOTHROW(wigner_transform(psi, make_grid(256, 128, {-16, 16, -pm, pm}), 1.0));
  CHECK_NOTHROW(wigner_transform(psi, make_grid(256, 256, {-16, 16, -2 * pm, 2 * pm}), 1.0));
  CHECK_THROWS_AS(wigner_transform(psi, make_grid(256, 256, {-16, 16, -pm, 0.5 * pm}), 1.0), ConfigError);
  CHECK_THROWS_AS(wigner_transform(psi, make_grid(256, 256, {-16, 16, -0.5 * pm, 0.5 * pm}), 1.0), ConfigError);
  CHECK_THROWS_AS(wigner_transform(psi, make_grid(256, 1024, {-16, 16, -pm, pm}), 1.0), ConfigError);
  CHECK_THROWS_AS(wigner_transform(psi, make_grid(128, 128, {-16, 16, -pm, pm}), 1.0), ConfigError);
  CHECK_THROWS_AS(wigner_transform(psi, make_grid(256, 256, {-8, 24, -pm, pm}), 1.0), ConfigError);
  // coarser momentum grid still reproduces the Gaussian at its own points
  const WignerMatrixField w = wigner_transform(psi, make_grid(256, 128, {-16, 16, -pm, pm}), 1.0);
  const PhaseGrid& g = w.grid();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    for (std::size_t q = 0; q < g.np(); ++q) {
      worst = std::max(worst, std::abs(w.at(i, q).trace().real() -
                                       std::exp(-g.x(i) * g.x(i) - g.p(q) * g.p(q)) / std::numbers::pi));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("Wigner representation") {
  const WignerMatrixField w = wigner_transform(gaussian_packet(sgrid(), {-1, 2, 1, Spinor(1, 0, 1, 0)}, 1.0), sgrid(), 1.0);
  const PhaseSpaceDensity d = wigner_representation(w);
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<std::size_t> idx(0, 255);
  for (int n = 0; n < 5; ++n) {
    const std::size_t i = idx(rng), q = idx(rng);
    CHECK(d.at(i, q) == w.at(i, q).trace().real());
  }
  const PhaseSpaceDensity z = wigner_representation(WignerMatrixField(sgrid()));
  CHECK(std::all_of(z.values.begin(), z.values.end(), [](double v) { return v == 0.0; }));
  WignerMatrixField bad = w;
  bad.at(3, 4)(1, 1) += Complex(0.0, 1e-6);
  CHECK_THROWS_AS(wigner_representation(bad), IntegrityError);
}

TEST_CASE("positive-energy projector identities") {
  const Constants k;
  Matrix4 rest = Matrix4::Zero();
  rest.diagonal() << 1.0, 1.0, 0.0, 0.0;
  CHECK(max_abs_entry(positive_energy_projector(0.0, 0.0, Potential::free(), k) - rest) < 1e-15);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const Potential pot = Potential::polynomial({Quadratic{0.3, 0.2}, Quadratic{0.1, -0.4, 0.05}, Quadratic{0.2}, Quadratic{}});
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const Constants kk{1.0 + 0.01 * n, 1.0, 0.5 + 0.02 * n, 1.0};
    const double p = u(rng), x = u(rng);
    const Matrix4 pp = positive_energy_projector(p, x, pot, kk);
    const Matrix4 pm = Matrix4::Identity() - pp;
    worst = std::max({worst, max_abs_entry(pp * pp - pp), std::abs(pp.trace() - 2.0), max_abs_entry(pp * pm),
                      max_abs_entry(pp - pp.adjoint())});
    // oracle: spectral projector of the kinetic symbol
    const auto pi = kinetic_momentum(p, x, pot, kk);
    oracle::Mat4 h = kk.m * kk.c * kk.c * oracle::gamma(0);
    for (int j = 0; j < 3; ++j) h += kk.c * pi[std::size_t(j)] * oracle::alpha(j + 1);
    Eigen::SelfAdjointEigenSolver<oracle::Mat4> es(h);
    oracle::Mat4 ref = oracle::Mat4::Zero();
    for (int j = 2; j < 4; ++j) ref += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
    worst = std::max(worst, max_abs_entry(pp - ref));
  }
  CHECK(worst < 1e-12);

  for (double p : {-3.0, 0.5, 2.0}) {
    const Matrix4 pp = positive_energy_projector(p, 0.0, Potential::free(), k);
    const Matrix4 h = free_dirac_symbol(p, k);
    CHECK(max_abs_entry(pp * h - h * pp) < 1e-14);
    Eigen::SelfAdjointEigenSolver<Matrix4> es(pp * h * pp);
    const double kin = std::sqrt(1.0 + p * p);
    CHECK(std::abs(es.eigenvalues()(0)) < 1e-13);
    CHECK(std::abs(es.eigenvalues()(1)) < 1e-13);
    CHECK(es.eigenvalues()(2) == doctest::Approx(kin));
    CHECK(es.eigenvalues()(3) == doctest::Approx(kin));
  }
  CHECK_THROWS_AS(make_projector_table(sgrid(), Potential::free(), Constants{1, 1, 0, 1}), ConfigError);
}

TEST_CASE("state projection") {
  const Constants k;
  const WignerMatrixField w = wigner_transform(centred_gaussian(Spinor(1, 0, 0.4, 0), 1.5), sgrid(), 1.0);
  const WignerMatrixField w0 = project_state(w, Potential::free(), k);
  const WignerMatrixField w1 = project_state(w0, Potential::free(), k);
  double worst = 0.0;
  for (std::size_t j = 0; j < w0.data().size(); ++j) worst = std::max(worst, std::abs(w1.data()[j] - w0.data()[j]));
  CHECK(worst < 1e-12);
  CHECK(std::abs(antiparticle_fraction(w0, Potential::free(), k)) < 1e-10);

  // a uniform rest-frame antiparticle is annihilated
  SpinorField flat(sgrid());
  for (std::size_t i = 0; i < sgrid().nx(); ++i) flat.at(i) = Spinor(0, 0, 1, 0) / std::sqrt(32.0);
  const WignerMatrixField wa = wigner_transform(flat, sgrid(), 1.0);
  CHECK(std::abs(antiparticle_fraction(wa, Potential::free(), k) - 1.0) < 1e-8);
  const WignerMatrixField gone = project_state(wa, Potential::free(), k);
  double m = 0.0;
  for (const auto& z : gone.data()) m = std::max(m, std::abs(z));
  CHECK(m < 1e-12);
}

TEST_CASE("antiparticle fraction of an antiparticle plane-wave packet") {
  const Constants k;
  const PhaseGrid& g = sgrid();
  const std::size_t mode = 16;
  const double p0 = g.lambda(mode);
  const Matrix4 pm = Matrix4::Identity() - positive_energy_projector(p0, 0.0, Potential::free(), k);
  Eigen::SelfAdjointEigenSolver<Matrix4> es(pm);
  const Spinor v = es.eigenvectors().col(3);
  SpinorField psi(g);
  for (std::size_t i = 0; i < g.nx(); ++i) psi.at(i) = std::polar(1.0, p0 * g.x(i)) * v / std::sqrt(32.0);
  CHECK(std::abs(antiparticle_fraction(wigner_transform(psi, g, 1.0), Potential::free(), k) - 1.0) < 1e-8);
}

TEST_CASE("antiparticle fraction matches an x-space oracle") {
  // unfiltered rest Gaussian: fraction = |P- psi|^2 / |psi|^2 evaluated by a naive DFT
  const Constants k;
  const PhaseGrid& g = sgrid();
  const SpinorField psi = centred_gaussian();
  const std::size_t n = g.nx();
  double anti = 0.0, total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = j < n / 2 ? double(j) : double(j) - double(n);
    const double p = 2.0 * std::numbers::pi * s / g.x_length();
    Spinor hat = Spinor::Zero();
    for (std::size_t i = 0; i < n; ++i) hat += std::polar(1.0, -p * g.x(i)) * Spinor(psi.at(i));
    const oracle::Mat4 pm = oracle::Mat4::Identity() - oracle::projector_by_eigen(p, k.m, k.c);
    anti += (pm * hat).squaredNorm();
    total += hat.squaredNorm();
  }
  const double expect = anti / total;
  CHECK(expect > 1e-3);
  const double got = antiparticle_fraction(wigner_transform(psi, g, 1.0), Potential::free(), k);
  CHECK(std::abs(got - expect) < 1e-10);
  CHECK_THROWS_AS(antiparticle_fraction(WignerMatrixField(g), Potential::free(), k), PreconditionError);
}
