#pragma once

// Uniform periodic phase-space grids and the field containers built on them.
//
// The momentum axis carries the physical momentum p = p^1 = -p_1. Conjugate
// coordinates follow FFT ordering: lambda_k = 2 pi k / (Nx dx) for
// k = 0..Nx/2-1, -Nx/2..-1, and likewise theta for the momentum axis.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spinkvn {

using Complex = std::complex<double>;

/// Physical constants in internal units.
struct Constants {
  double c = 1.0;
  double hbar = 1.0;
  double m = 1.0;
  double e = 1.0;

  friend bool operator==(const Constants&, const Constants&) = default;
};

struct Bounds {
  double x_min = -16.0;
  double x_max = 16.0;
  double p_min = 0.0;
  double p_max = 0.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

bool is_power_of_two(std::size_t n);

/// 2 pi k / (n * spacing) in FFT order.
std::vector<double> fft_frequencies(std::size_t n, double spacing);

class PhaseGrid {
 public:
  PhaseGrid(std::size_t nx, std::size_t np, const Bounds& bounds);

  std::size_t nx() const { return nx_; }
  std::size_t np() const { return np_; }
  const Bounds& bounds() const { return bounds_; }
  double dx() const { return dx_; }
  double dp() const { return dp_; }
  double x_length() const { return bounds_.x_max - bounds_.x_min; }
  double p_length() const { return bounds_.p_max - bounds_.p_min; }

  double x(std::size_t i) const { return bounds_.x_min + static_cast<double>(i) * dx_; }
  double p(std::size_t k) const { return bounds_.p_min + static_cast<double>(k) * dp_; }
  double lambda(std::size_t i) const;
  double theta(std::size_t k) const;

  std::vector<double> xs() const;
  std::vector<double> ps() const;
  std::vector<double> lambdas() const { return fft_frequencies(nx_, dx_); }
  std::vector<double> thetas() const { return fft_frequencies(np_, dp_); }

  bool same_as(const PhaseGrid& other, double rel_tol = 1e-12) const;

  friend bool operator==(const PhaseGrid& a, const PhaseGrid& b) {
    return a.nx_ == b.nx_ && a.np_ == b.np_ && a.bounds_ == b.bounds_;
  }

 private:
  std::size_t nx_;
  std::size_t np_;
  Bounds bounds_;
  double dx_;
  double dp_;
};

/// Validating factory: sizes must be powers of two and bounds ordered.
PhaseGrid make_grid(std::size_t nx, std::size_t np, const Bounds& bounds);

/// Grid whose momentum axis is the one the Wigner transform of an Nx-point
/// spinor produces: Np = Nx and p in [-pi hbar/dx, pi hbar/dx).
PhaseGrid natural_grid(std::size_t nx, double x_min, double x_max, double hbar);

/// 4-component spinor field psi(x), layout [x][component].
class SpinorField {
 public:
  using Map = Eigen::Map<Eigen::Vector4cd>;
  using ConstMap = Eigen::Map<const Eigen::Vector4cd>;

  explicit SpinorField(const PhaseGrid& grid);

  const PhaseGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.nx(); }

  Map at(std::size_t i) { return Map(data_.data() + 4 * i); }
  ConstMap at(std::size_t i) const { return ConstMap(data_.data() + 4 * i); }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  /// sum_x psi^dagger psi dx
  double norm_squared() const;

 private:
  PhaseGrid grid_;
  std::vector<Complex> data_;
};

/// 4x4 matrix field W(x,p), layout [x][p][row][col].
class WignerMatrixField {
 public:
  using Block = Eigen::Map<Eigen::Matrix<Complex, 4, 4, Eigen::RowMajor>>;
  using ConstBlock = Eigen::Map<const Eigen::Matrix<Complex, 4, 4, Eigen::RowMajor>>;

  explicit WignerMatrixField(const PhaseGrid& grid);

  const PhaseGrid& grid() const { return grid_; }
  std::size_t blocks() const { return grid_.nx() * grid_.np(); }

  Block at(std::size_t i, std::size_t k) { return Block(data_.data() + 16 * (i * grid_.np() + k)); }
  ConstBlock at(std::size_t i, std::size_t k) const {
    return ConstBlock(data_.data() + 16 * (i * grid_.np() + k));
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  /// sum_{x,p} Tr W dx dp
  Complex total_trace() const;

  /// max over grid points of max-entry |W - W^dagger|
  double max_hermiticity_defect() const;

 private:
  PhaseGrid grid_;
  std::vector<Complex> data_;
};

/// Real scalar field over (x,p), layout [x][p].
struct PhaseSpaceDensity {
  PhaseGrid grid;
  std::vector<double> values;

  explicit PhaseSpaceDensity(const PhaseGrid& g) : grid(g), values(g.nx() * g.np(), 0.0) {}

  double& at(std::size_t i, std::size_t k) { return values[i * grid.np() + k]; }
  double at(std::size_t i, std::size_t k) const { return values[i * grid.np() + k]; }
  double total() const;
};

}  // namespace spinkvn
