#pragma once

// Electromagnetic four-potential in one spatial dimension.
//
// Components are covariant, A_nu(x) for nu = 0..3; the spatial contravariant
// components are A^k = -A_k. Only the x^1 dependence is modelled.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinkvn/grid.hpp"

namespace spinkvn {

enum class PotentialKind { free, scalar_linear, scalar_quadratic, tabulated };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& s);

/// c0 + c1 x + c2 x^2
struct Quadratic {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double value(double x) const { return c0 + x * (c1 + x * c2); }
  double slope(double x) const { return c1 + 2.0 * c2 * x; }
  bool is_zero() const { return c0 == 0.0 && c1 == 0.0 && c2 == 0.0; }
  friend bool operator==(const Quadratic&, const Quadratic&) = default;
};

using Covector = std::array<double, 4>;

class Potential {
 public:
  Potential() = default;

  static Potential free() { return {}; }
  /// A_0 = offset + slope x
  static Potential scalar_linear(double offset, double slope);
  /// A_0 = a0 + a1 x + a2 x^2
  static Potential scalar_quadratic(double a0, double a1, double a2);
  /// Uniform electric force F along +x: A_0 = -F x / (c e).
  static Potential uniform_force(double force, const Constants& k);
  /// Quadratic polynomial per covariant component. The kind is scalar_linear
  /// or scalar_quadratic by the highest degree present (free if all zero).
  static Potential polynomial(const std::array<Quadratic, 4>& components);
  /// Samples A_nu(x_min + j dx), periodic in j, linearly interpolated.
  /// Derivative samples are optional; without them gradient() throws.
  static Potential tabulated(double x_min, double dx, std::vector<Covector> values,
                             std::optional<std::vector<Covector>> derivatives = std::nullopt);

  PotentialKind kind() const { return kind_; }

  Covector covariant(double x) const;
  /// d/dx^1 A_nu. Throws ConfigError for tabulated data without derivatives.
  Covector gradient(double x) const;

  bool has_gradient() const { return kind_ != PotentialKind::tabulated || derivative_table_.has_value(); }
  /// True when every component is independent of x (no force, no field step).
  bool is_uniform() const;

  const std::array<Quadratic, 4>& components() const { return poly_; }
  double table_x_min() const { return table_x_min_; }
  double table_dx() const { return table_dx_; }
  const std::vector<Covector>& table() const { return table_; }
  const std::optional<std::vector<Covector>>& derivative_table() const { return derivative_table_; }

 private:
  Covector interpolate(const std::vector<Covector>& samples, double x) const;

  PotentialKind kind_ = PotentialKind::free;
  std::array<Quadratic, 4> poly_{};
  double table_x_min_ = 0.0;
  double table_dx_ = 1.0;
  std::vector<Covector> table_;
  std::optional<std::vector<Covector>> derivative_table_;
};

/// (p - eA)^k for k = 1..3 with transverse canonical momenta zero.
std::array<double, 3> kinetic_momentum(double p, double x, const Potential& pot, const Constants& k);

/// K = sqrt((m c^2)^2 + c^2 (p - eA)^k (p - eA)^k), p the physical momentum.
double kinetic_energy(double p, double x, const Potential& pot, const Constants& k);

}  // namespace spinkvn
