#include "spinkvn/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spinkvn/errors.hpp"

namespace spinkvn {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> fft_frequencies(std::size_t n, double spacing) {
  std::vector<double> out(n);
  const double scale = 2.0 * std::numbers::pi / (static_cast<double>(n) * spacing);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t k = 0; k < n; ++k) {
    auto s = static_cast<std::ptrdiff_t>(k);
    if (s >= half) s -= static_cast<std::ptrdiff_t>(n);
    out[k] = scale * static_cast<double>(s);
  }
  return out;
}

namespace {
double fft_frequency(std::size_t k, std::size_t n, double spacing) {
  auto s = static_cast<std::ptrdiff_t>(k);
  if (s >= static_cast<std::ptrdiff_t>(n / 2)) s -= static_cast<std::ptrdiff_t>(n);
  return 2.0 * std::numbers::pi * static_cast<double>(s) / (static_cast<double>(n) * spacing);
}
}  // namespace

PhaseGrid::PhaseGrid(std::size_t nx, std::size_t np, const Bounds& bounds)
    : nx_(nx),
      np_(np),
      bounds_(bounds),
      dx_((bounds.x_max - bounds.x_min) / static_cast<double>(nx)),
      dp_((bounds.p_max - bounds.p_min) / static_cast<double>(np)) {}

double PhaseGrid::lambda(std::size_t i) const { return fft_frequency(i, nx_, dx_); }
double PhaseGrid::theta(std::size_t k) const { return fft_frequency(k, np_, dp_); }

std::vector<double> PhaseGrid::xs() const {
  std::vector<double> out(nx_);
  for (std::size_t i = 0; i < nx_; ++i) out[i] = x(i);
  return out;
}

std::vector<double> PhaseGrid::ps() const {
  std::vector<double> out(np_);
  for (std::size_t k = 0; k < np_; ++k) out[k] = p(k);
  return out;
}

bool PhaseGrid::same_as(const PhaseGrid& other, double rel_tol) const {
  auto close = [rel_tol](double a, double b, double scale) { return std::abs(a - b) <= rel_tol * scale; };
  const double xs = std::max(1.0, x_length());
  const double ps = std::max(1.0, p_length());
  return nx_ == other.nx_ && np_ == other.np_ && close(bounds_.x_min, other.bounds_.x_min, xs) &&
         close(bounds_.x_max, other.bounds_.x_max, xs) && close(bounds_.p_min, other.bounds_.p_min, ps) &&
         close(bounds_.p_max, other.bounds_.p_max, ps);
}

PhaseGrid make_grid(std::size_t nx, std::size_t np, const Bounds& bounds) {
  if (!is_power_of_two(nx) || !is_power_of_two(np)) {
    std::ostringstream os;
    os << "grid sizes must be powers of two (nx=" << nx << ", np=" << np << ")";
    throw ConfigError(os.str());
  }
  if (!(bounds.x_max > bounds.x_min) || !(bounds.p_max > bounds.p_min)) {
    throw ConfigError("grid bounds must be ordered (min < max)");
  }
  if (!std::isfinite(bounds.x_min) || !std::isfinite(bounds.x_max) || !std::isfinite(bounds.p_min) ||
      !std::isfinite(bounds.p_max)) {
    throw ConfigError("grid bounds must be finite");
  }
  return PhaseGrid(nx, np, bounds);
}

PhaseGrid natural_grid(std::size_t nx, double x_min, double x_max, double hbar) {
  const double dx = (x_max - x_min) / static_cast<double>(nx);
  const double p_max = std::numbers::pi * hbar / dx;
  return make_grid(nx, nx, Bounds{x_min, x_max, -p_max, p_max});
}

SpinorField::SpinorField(const PhaseGrid& grid) : grid_(grid), data_(4 * grid.nx(), Complex{}) {}

double SpinorField::norm_squared() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return s * grid_.dx();
}

WignerMatrixField::WignerMatrixField(const PhaseGrid& grid)
    : grid_(grid), data_(16 * grid.nx() * grid.np(), Complex{}) {}

Complex WignerMatrixField::total_trace() const {
  Complex s{};
  const std::size_t n = blocks();
  for (std::size_t b = 0; b < n; ++b) {
    const Complex* m = data_.data() + 16 * b;
    s += m[0] + m[5] + m[10] + m[15];
  }
  return s * grid_.dx() * grid_.dp();
}

double WignerMatrixField::max_hermiticity_defect() const {
  double worst = 0.0;
  const std::size_t n = blocks();
  for (std::size_t b = 0; b < n; ++b) {
    const Complex* m = data_.data() + 16 * b;
    for (int r = 0; r < 4; ++r) {
      for (int c = r; c < 4; ++c) {
        worst = std::max(worst, std::abs(m[4 * r + c] - std::conj(m[4 * c + r])));
      }
    }
  }
  return worst;
}

double PhaseSpaceDensity::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.dx() * grid.dp();
}

}  // namespace spinkvn
