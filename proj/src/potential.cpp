#include "spinkvn/potential.hpp"

#include <cmath>

#include "spinkvn/errors.hpp"

namespace spinkvn {

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::free:
      return "free";
    case PotentialKind::scalar_linear:
      return "scalar-linear";
    case PotentialKind::scalar_quadratic:
      return "scalar-quadratic";
    case PotentialKind::tabulated:
      return "tabulated";
  }
  return "free";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "free") return PotentialKind::free;
  if (s == "scalar-linear") return PotentialKind::scalar_linear;
  if (s == "scalar-quadratic") return PotentialKind::scalar_quadratic;
  if (s == "tabulated") return PotentialKind::tabulated;
  throw ConfigError("unknown potential kind: " + s);
}

Potential Potential::scalar_linear(double offset, double slope) {
  Potential pot;
  pot.kind_ = PotentialKind::scalar_linear;
  pot.poly_[0] = {offset, slope, 0.0};
  return pot;
}

Potential Potential::scalar_quadratic(double a0, double a1, double a2) {
  Potential pot;
  pot.kind_ = PotentialKind::scalar_quadratic;
  pot.poly_[0] = {a0, a1, a2};
  return pot;
}

Potential Potential::uniform_force(double force, const Constants& k) {
  return scalar_linear(0.0, -force / (k.c * k.e));
}

Potential Potential::polynomial(const std::array<Quadratic, 4>& components) {
  Potential pot;
  pot.poly_ = components;
  bool any = false;
  bool quadratic = false;
  for (const auto& q : components) {
    any = any || !q.is_zero();
    quadratic = quadratic || q.c2 != 0.0;
  }
  pot.kind_ = !any ? PotentialKind::free : (quadratic ? PotentialKind::scalar_quadratic : PotentialKind::scalar_linear);
  return pot;
}

Potential Potential::tabulated(double x_min, double dx, std::vector<Covector> values,
                               std::optional<std::vector<Covector>> derivatives) {
  if (values.empty()) throw ConfigError("tabulated potential needs at least one sample");
  if (!(dx > 0.0)) throw ConfigError("tabulated potential spacing must be positive");
  if (derivatives && derivatives->size() != values.size()) {
    throw ConfigError("tabulated potential derivative table size mismatch");
  }
  Potential pot;
  pot.kind_ = PotentialKind::tabulated;
  pot.table_x_min_ = x_min;
  pot.table_dx_ = dx;
  pot.table_ = std::move(values);
  pot.derivative_table_ = std::move(derivatives);
  return pot;
}

Covector Potential::interpolate(const std::vector<Covector>& samples, double x) const {
  const auto n = static_cast<double>(samples.size());
  double s = (x - table_x_min_) / table_dx_;
  s -= n * std::floor(s / n);
  const auto j0 = static_cast<std::size_t>(std::floor(s)) % samples.size();
  const std::size_t j1 = (j0 + 1) % samples.size();
  const double w = s - std::floor(s);
  Covector out{};
  for (std::size_t nu = 0; nu < 4; ++nu) out[nu] = (1.0 - w) * samples[j0][nu] + w * samples[j1][nu];
  return out;
}

Covector Potential::covariant(double x) const {
  if (kind_ == PotentialKind::tabulated) return interpolate(table_, x);
  Covector out{};
  for (std::size_t nu = 0; nu < 4; ++nu) out[nu] = poly_[nu].value(x);
  return out;
}

Covector Potential::gradient(double x) const {
  if (kind_ == PotentialKind::tabulated) {
    if (!derivative_table_) throw ConfigError("tabulated potential has no derivative data");
    return interpolate(*derivative_table_, x);
  }
  Covector out{};
  for (std::size_t nu = 0; nu < 4; ++nu) out[nu] = poly_[nu].slope(x);
  return out;
}

bool Potential::is_uniform() const {
  if (kind_ == PotentialKind::tabulated) {
    const Covector& first = table_.front();
    for (const auto& row : table_) {
      if (row != first) return false;
    }
    return true;
  }
  for (const auto& q : poly_) {
    if (q.c1 != 0.0 || q.c2 != 0.0) return false;
  }
  return true;
}

std::array<double, 3> kinetic_momentum(double p, double x, const Potential& pot, const Constants& k) {
  const Covector a = pot.covariant(x);
  // p^1 = p, p^2 = p^3 = 0; A^k = -A_k
  return {p + k.e * a[1], k.e * a[2], k.e * a[3]};
}

double kinetic_energy(double p, double x, const Potential& pot, const Constants& k) {
  const auto pi = kinetic_momentum(p, x, pot, k);
  const double mc2 = k.m * k.c * k.c;
  return std::sqrt(mc2 * mc2 + k.c * k.c * (pi[0] * pi[0] + pi[1] * pi[1] + pi[2] * pi[2]));
}

}  // namespace spinkvn
