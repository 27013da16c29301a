#include "spinkvn/wigner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spinkvn/errors.hpp"
#include "spinkvn/fft.hpp"

namespace spinkvn {

void check_wigner_grid(const PhaseGrid& spinor_grid, const PhaseGrid& grid, double hbar) {
  const Bounds& sb = spinor_grid.bounds();
  const Bounds& b = grid.bounds();
  const double len = spinor_grid.x_length();
  if (spinor_grid.nx() != grid.nx() || std::abs(sb.x_min - b.x_min) > 1e-12 * len ||
      std::abs(sb.x_max - b.x_max) > 1e-12 * len) {
    throw ConfigError("Wigner grid x axis differs from the spinor grid");
  }
  if (grid.np() < 2) throw ConfigError("Wigner grid needs at least two momentum points");
  const double span = grid.p_length();
  if (std::abs(b.p_min + b.p_max) > 1e-9 * span) {
    throw ConfigError("Wigner grid momentum range must be symmetric about zero");
  }
  const double band = 2.0 * std::numbers::pi * hbar / grid.dx();
  if (span < band * (1.0 - 1e-9)) {
    std::ostringstream os;
    os << "momentum range " << span << " does not cover the x-grid band 2 pi hbar/dx = " << band;
    throw ConfigError(os.str());
  }
  if (grid.dp() < std::numbers::pi * hbar / len * (1.0 - 1e-9)) {
    std::ostringstream os;
    os << "momentum spacing " << grid.dp() << " is below pi hbar / L = " << std::numbers::pi * hbar / len;
    throw ConfigError(os.str());
  }
}

WignerMatrixField wigner_transform(const SpinorField& psi, const PhaseGrid& grid, double hbar, Exec exec) {
  check_wigner_grid(psi.grid(), grid, hbar);
  const std::size_t nx = grid.nx();
  const std::size_t np = grid.np();
  const auto half = static_cast<std::ptrdiff_t>(np / 2);
  // Shift step conjugate to the momentum grid: dp * np * dy = 2 pi hbar.
  const double dy = 2.0 * std::numbers::pi * hbar / grid.p_length();

  // shifted[j + np/2] = psi(x - j dy / 2) for j = -np/2 .. np/2, by spectral interpolation.
  SpinorField spectrum = psi;
  const FftAxis spinor_fft(1, nx, 4);
  spinor_fft.forward(spectrum.data(), Exec::serial);
  const std::vector<double> lambdas = grid.lambdas();
  std::vector<Complex> shifted((np + 1) * nx * 4);
  parallel_for(np + 1, exec, [&](std::size_t idx) {
    const double s = static_cast<double>(static_cast<std::ptrdiff_t>(idx) - half) * dy / 2.0;
    Complex* out = shifted.data() + idx * nx * 4;
    for (std::size_t q = 0; q < nx; ++q) {
      const Complex phase = std::polar(1.0, -lambdas[q] * s);
      for (std::size_t a = 0; a < 4; ++a) out[4 * q + a] = spectrum.data()[4 * q + a] * phase;
    }
    spinor_fft.inverse(std::span<Complex>(out, nx * 4), Exec::serial);
  });
  auto at = [&](std::ptrdiff_t j, std::size_t i) {
    return Eigen::Map<const Eigen::Vector4cd>(shifted.data() + (static_cast<std::size_t>(j + half) * nx + i) * 4);
  };

  WignerMatrixField w(grid);
  const FftAxis shift_fft(1, np, 16);
  const double scale = 1.0 / (static_cast<double>(np) * grid.dp());
  parallel_for(nx, exec, [&](std::size_t i) {
    std::vector<Complex> row(np * 16);
    for (std::ptrdiff_t j = -half; j < half; ++j) {
      Eigen::Matrix<Complex, 4, 4, Eigen::RowMajor> corr;
      if (j == -half) {
        // Unpaired Nyquist shift: average the +-np/2 correlations so W stays Hermitian.
        const Matrix4 c = at(-half, i) * at(half, i).adjoint();
        corr = 0.5 * (c + c.adjoint());
      } else {
        corr = at(j, i) * at(-j, i).adjoint();
      }
      // exp(i p_min y_j / hbar) = (-1)^j for the symmetric momentum range
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      const std::size_t slot = static_cast<std::size_t>((j + static_cast<std::ptrdiff_t>(np)) %
                                                        static_cast<std::ptrdiff_t>(np));
      Eigen::Map<Eigen::Matrix<Complex, 4, 4, Eigen::RowMajor>>(row.data() + 16 * slot) = sign * corr;
    }
    shift_fft.backward_unnormalized(row, Exec::serial);
    Complex* dst = w.data().data() + i * np * 16;
    for (std::size_t q = 0; q < np * 16; ++q) dst[q] = scale * row[q];
  });
  return w;
}

PhaseSpaceDensity wigner_representation(const WignerMatrixField& w) {
  PhaseSpaceDensity out(w.grid());
  const std::size_t n = w.blocks();
  const Complex* d = w.data().data();
  double worst = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    const Complex* m = d + 16 * b;
    const Complex tr = m[0] + m[5] + m[10] + m[15];
    worst = std::max(worst, std::abs(tr.imag()));
    out.values[b] = tr.real();
  }
  if (worst > 1e-8) {
    std::ostringstream os;
    os << "Wigner trace has imaginary residue " << worst;
    throw IntegrityError(os.str());
  }
  return out;
}

Matrix4 positive_energy_projector(double p, double x, const Potential& pot, const Constants& k) {
  const auto pi = kinetic_momentum(p, x, pot, k);
  const double mc2 = k.m * k.c * k.c;
  const double energy = std::sqrt(mc2 * mc2 + k.c * k.c * (pi[0] * pi[0] + pi[1] * pi[1] + pi[2] * pi[2]));
  Matrix4 h = mc2 * gamma(0);
  for (int j = 0; j < 3; ++j) h += k.c * pi[static_cast<std::size_t>(j)] * gamma0_gamma(j + 1);
  return 0.5 * (Matrix4::Identity() + h / energy);
}

ProjectorTable make_projector_table(const PhaseGrid& grid, const Potential& pot, const Constants& k,
                                    bool complement) {
  if (!(k.m > 0.0)) throw ConfigError("the antiparticle projector needs m > 0");
  ProjectorTable out;
  const std::size_t nx = grid.nx();
  const std::size_t np = grid.np();
  auto entry = [&](double p, double x) {
    Matrix4 proj = positive_energy_projector(p, x, pot, k);
    return complement ? Matrix4(Matrix4::Identity() - proj) : proj;
  };
  if (pot.is_uniform()) {
    const double x0 = grid.x(0);
    out.table.resize(np);
    for (std::size_t q = 0; q < np; ++q) out.table[q] = entry(grid.p(q), x0);
    out.map = {1, np};
  } else {
    out.table.resize(nx * np);
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t q = 0; q < np; ++q) out.table[i * np + q] = entry(grid.p(q), grid.x(i));
    }
    out.map = {1, nx * np};
  }
  return out;
}

WignerMatrixField project_state(const WignerMatrixField& w, const Potential& pot, const Constants& k, Exec exec) {
  const ProjectorTable proj = make_projector_table(w.grid(), pot, k);
  WignerMatrixField out = w;
  kernels::sandwich(out.data(), proj.table, proj.map, exec);
  return out;
}

double antiparticle_fraction(const WignerMatrixField& w, const Potential& pot, const Constants& k, Exec exec) {
  const double total = w.total_trace().real();
  if (!(total > 0.0)) throw PreconditionError("antiparticle fraction needs a positive total trace");
  const ProjectorTable minus = make_projector_table(w.grid(), pot, k, true);
  const double anti = kernels::projected_trace(w.data(), minus.table, minus.map, w.grid().np(), exec) *
                      w.grid().dx() * w.grid().dp();
  return anti / total;
}

std::vector<double> position_marginal(const WignerMatrixField& w) {
  const PhaseGrid& g = w.grid();
  std::vector<double> out(g.nx(), 0.0);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    double s = 0.0;
    for (std::size_t q = 0; q < g.np(); ++q) s += w.at(i, q).trace().real();
    out[i] = s * g.dp();
  }
  return out;
}

}  // namespace spinkvn
