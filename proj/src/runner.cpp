#include "spinkvn/runner.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "spinkvn/ensemble.hpp"
#include "spinkvn/errors.hpp"
#include "spinkvn/io.hpp"
#include "spinkvn/phase_space.hpp"
#include "spinkvn/wigner.hpp"

#ifndef SPINKVN_VERSION
#define SPINKVN_VERSION "0.0.0+unknown"
#endif

namespace spinkvn {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() { return std::string("spinkvn ") + SPINKVN_VERSION; }

std::string to_string(Solver s) {
  switch (s) {
    case Solver::dirac:
      return "dirac";
    case Solver::kvn:
      return "kvn";
    case Solver::spohn:
      return "spohn";
    case Solver::ensemble:
      return "ensemble";
  }
  return "?";
}

Solver solver_from_string(const std::string& s) {
  if (s == "dirac") return Solver::dirac;
  if (s == "kvn") return Solver::kvn;
  if (s == "spohn") return Solver::spohn;
  if (s == "ensemble") return Solver::ensemble;
  throw ConfigError("unknown solver '" + s + "' (expected dirac, kvn, spohn or ensemble)");
}

PhaseGrid RunConfig::spinor_grid() const { return natural_grid(nx, x_min, x_max, constants.hbar); }

PhaseGrid RunConfig::phase_grid() const {
  const double dx = (x_max - x_min) / static_cast<double>(nx);
  const double edge = std::numbers::pi * constants.hbar / dx;
  return make_grid(nx, np, Bounds{x_min, x_max, p_min.value_or(-edge), p_max.value_or(edge)});
}

bool same_potential(const Potential& a, const Potential& b) {
  return a.kind() == b.kind() && a.components() == b.components() && a.table_x_min() == b.table_x_min() &&
         a.table_dx() == b.table_dx() && a.table() == b.table() && a.derivative_table() == b.derivative_table();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.solver == b.solver && a.nx == b.nx && a.np == b.np && a.x_min == b.x_min && a.x_max == b.x_max &&
         a.p_min == b.p_min && a.p_max == b.p_max && a.constants == b.constants &&
         same_potential(a.potential, b.potential) && a.packet.x0 == b.packet.x0 && a.packet.p0 == b.packet.p0 &&
         a.packet.sigma == b.packet.sigma && a.packet.direction == b.packet.direction && a.project == b.project &&
         a.dt == b.dt && a.n_steps == b.n_steps && a.frame_stride == b.frame_stride &&
         a.output_dir == b.output_dir && a.seed == b.seed && a.particles == b.particles;
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json covectors_to_json(const std::vector<Covector>& rows) {
  json out = json::array();
  for (const Covector& r : rows) out.push_back(r);
  return out;
}

std::vector<Covector> covectors_from_json(const json& j) {
  std::vector<Covector> out;
  for (const auto& r : j) out.push_back(r.get<Covector>());
  return out;
}

}  // namespace

json potential_to_json(const Potential& p) {
  json j;
  j["kind"] = to_string(p.kind());
  switch (p.kind()) {
    case PotentialKind::free:
      break;
    case PotentialKind::scalar_linear:
    case PotentialKind::scalar_quadratic: {
      json comps = json::array();
      for (const Quadratic& q : p.components()) comps.push_back({q.c0, q.c1, q.c2});
      j["components"] = comps;
      break;
    }
    case PotentialKind::tabulated:
      j["x_min"] = p.table_x_min();
      j["dx"] = p.table_dx();
      j["values"] = covectors_to_json(p.table());
      if (p.derivative_table()) j["derivatives"] = covectors_to_json(*p.derivative_table());
      break;
  }
  return j;
}

Potential potential_from_json(const json& j, const Constants& k) {
  check_keys(j, {"kind", "components", "offset", "slope", "a0", "a1", "a2", "force", "x_min", "dx", "values",
                 "derivatives"},
             "potential");
  const PotentialKind kind = potential_kind_from_string(j.value("kind", std::string("free")));
  Potential out;
  switch (kind) {
    case PotentialKind::free:
      return Potential::free();
    case PotentialKind::scalar_linear:
    case PotentialKind::scalar_quadratic:
      if (j.contains("components")) {
        const json& c = j.at("components");
        if (!c.is_array() || c.size() != 4) throw ConfigError("potential components must list 4 quadratics");
        std::array<Quadratic, 4> comps{};
        for (std::size_t nu = 0; nu < 4; ++nu) {
          const auto v = c[nu].get<std::vector<double>>();
          if (v.size() != 3) throw ConfigError("each potential component is [c0, c1, c2]");
          comps[nu] = {v[0], v[1], v[2]};
        }
        out = Potential::polynomial(comps);
      } else if (j.contains("force")) {
        out = Potential::uniform_force(j.at("force").get<double>(), k);
      } else if (kind == PotentialKind::scalar_linear) {
        out = Potential::scalar_linear(j.value("offset", 0.0), j.value("slope", 0.0));
      } else {
        out = Potential::scalar_quadratic(j.value("a0", 0.0), j.value("a1", 0.0), j.value("a2", 0.0));
      }
      if (out.kind() != kind && out.kind() != PotentialKind::free) {
        throw ConfigError("potential coefficients do not match kind '" + to_string(kind) + "'");
      }
      return out;
    case PotentialKind::tabulated: {
      if (!j.contains("values")) throw ConfigError("tabulated potential needs 'values'");
      std::optional<std::vector<Covector>> deriv;
      if (j.contains("derivatives")) deriv = covectors_from_json(j.at("derivatives"));
      return Potential::tabulated(j.value("x_min", 0.0), j.value("dx", 1.0), covectors_from_json(j.at("values")),
                                  deriv);
    }
  }
  return out;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["solver"] = to_string(c.solver);
  json g = {{"nx", c.nx}, {"np", c.np}, {"x_min", c.x_min}, {"x_max", c.x_max}};
  g["p_min"] = c.p_min ? json(*c.p_min) : json(nullptr);
  g["p_max"] = c.p_max ? json(*c.p_max) : json(nullptr);
  j["grid"] = g;
  j["constants"] = {{"c", c.constants.c}, {"hbar", c.constants.hbar}, {"m", c.constants.m}, {"e", c.constants.e}};
  j["potential"] = potential_to_json(c.potential);
  json spinor = json::array();
  for (int a = 0; a < 4; ++a) spinor.push_back({c.packet.direction[a].real(), c.packet.direction[a].imag()});
  j["initial"] = {{"x0", c.packet.x0}, {"p0", c.packet.p0},    {"sigma", c.packet.sigma},
                  {"spinor", spinor},  {"project", c.project}};
  j["dt"] = c.dt;
  j["n_steps"] = c.n_steps;
  j["frame_stride"] = c.frame_stride;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["ensemble"] = {{"particles", c.particles}};
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    check_keys(j, {"solver", "grid", "constants", "potential", "initial", "dt", "n_steps", "frame_stride",
                   "output_dir", "seed", "ensemble"},
               "config");
    if (j.contains("solver")) c.solver = solver_from_string(j.at("solver").get<std::string>());
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      check_keys(g, {"nx", "np", "x_min", "x_max", "p_min", "p_max"}, "grid");
      read_opt(g, "nx", c.nx);
      read_opt(g, "np", c.np);
      read_opt(g, "x_min", c.x_min);
      read_opt(g, "x_max", c.x_max);
      if (g.contains("p_min") && !g.at("p_min").is_null()) c.p_min = g.at("p_min").get<double>();
      if (g.contains("p_max") && !g.at("p_max").is_null()) c.p_max = g.at("p_max").get<double>();
    }
    if (j.contains("constants")) {
      const json& k = j.at("constants");
      check_keys(k, {"c", "hbar", "m", "e"}, "constants");
      read_opt(k, "c", c.constants.c);
      read_opt(k, "hbar", c.constants.hbar);
      read_opt(k, "m", c.constants.m);
      read_opt(k, "e", c.constants.e);
    }
    if (j.contains("potential")) c.potential = potential_from_json(j.at("potential"), c.constants);
    if (j.contains("initial")) {
      const json& s = j.at("initial");
      check_keys(s, {"x0", "p0", "sigma", "spinor", "project"}, "initial");
      read_opt(s, "x0", c.packet.x0);
      read_opt(s, "p0", c.packet.p0);
      read_opt(s, "sigma", c.packet.sigma);
      read_opt(s, "project", c.project);
      if (s.contains("spinor")) {
        const json& w = s.at("spinor");
        if (!w.is_array() || w.size() != 4) throw ConfigError("initial spinor must have 4 components");
        for (int a = 0; a < 4; ++a) {
          const json& z = w[static_cast<std::size_t>(a)];
          c.packet.direction[a] = z.is_array() ? Complex(z.at(0).get<double>(), z.at(1).get<double>())
                                               : Complex(z.get<double>(), 0.0);
        }
      }
    }
    read_opt(j, "dt", c.dt);
    read_opt(j, "n_steps", c.n_steps);
    read_opt(j, "frame_stride", c.frame_stride);
    read_opt(j, "output_dir", c.output_dir);
    read_opt(j, "seed", c.seed);
    if (j.contains("ensemble")) {
      check_keys(j.at("ensemble"), {"particles"}, "ensemble");
      read_opt(j.at("ensemble"), "particles", c.particles);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  try {
    return config_from_json(json::parse(is));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

namespace {

KvnParams kvn_params(const RunConfig& c) {
  KvnParams p;
  p.constants = c.constants;
  p.dt = c.dt;
  p.potential = c.potential;
  p.mode = c.solver == Solver::spohn ? EvolutionMode::spohn : EvolutionMode::kvn;
  return p;
}

DiracParams dirac_params(const RunConfig& c) {
  DiracParams p;
  p.constants = c.constants;
  p.dt = c.dt;
  p.potential = c.potential;
  return p;
}

}  // namespace

void validate(const RunConfig& c) {
  const Constants& k = c.constants;
  if (!(k.c > 0.0 && k.hbar > 0.0 && k.e > 0.0)) throw ConfigError("c, hbar and e must be positive");
  if (!(k.m > 0.0)) throw ConfigError("m must be positive (the projector denominator K vanishes for m = 0)");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("dt must be positive");
  if (c.frame_stride == 0) throw ConfigError("frame_stride must be positive");
  if (!(c.packet.sigma > 0.0)) throw ConfigError("initial sigma must be positive");
  if (!(c.packet.direction.norm() > 0.0)) throw ConfigError("initial spinor must be nonzero");
  if (c.output_dir.empty()) throw ConfigError("output_dir must be set");
  if (c.solver == Solver::ensemble && c.particles == 0) throw ConfigError("ensemble solver needs particles > 0");
  const PhaseGrid sg = c.spinor_grid();
  const PhaseGrid pg = c.phase_grid();
  check_wigner_grid(sg, pg, k.hbar);
  if (c.potential.kind() == PotentialKind::tabulated && !c.potential.has_gradient() &&
      c.solver != Solver::dirac) {
    throw ConfigError("tabulated potential has no derivative data");
  }
  switch (c.solver) {
    case Solver::dirac:
      DiracPropagator(sg, dirac_params(c));
      break;
    case Solver::kvn:
    case Solver::spohn:
      PhaseSpacePropagator(pg, kvn_params(c));
      break;
    case Solver::ensemble:
      break;
  }
}

namespace {

SpinorField initial_spinor(const RunConfig& c) {
  SpinorField psi = gaussian_packet(c.spinor_grid(), c.packet, c.constants.hbar);
  if (c.solver == Solver::dirac && c.project) {
    psi = filter_positive_energy(psi, c.constants);
    const double n = std::sqrt(psi.norm_squared());
    if (!(n > 0.0)) throw PreconditionError("initial state has no positive-energy content");
    for (Complex& z : psi.data()) z /= n;
  }
  return psi;
}

std::string frame_name(const char* kind, std::size_t step) {
  std::ostringstream os;
  os << kind << '_' << std::setw(6) << std::setfill('0') << step;
  return os.str();
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& columns) : os_(path) {
    if (!os_) throw std::runtime_error("cannot write " + path.string());
    os_ << std::setprecision(17);
    for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << '\n';
  }
  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << values[i];
    os_ << '\n';
    os_.flush();
  }

 private:
  std::ofstream os_;
};

// `skip` names a column that may legitimately be NaN.
void require_finite(const std::vector<double>& values, double time, std::size_t skip = std::string::npos) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != skip && !std::isfinite(values[i])) {
      std::ostringstream os;
      os << "non-finite observable at t = " << time;
      throw IntegrityError(os.str());
    }
  }
}

void require_finite_field(std::span<const Complex> data, double time) {
  for (const Complex& z : data) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      std::ostringstream os;
      os << "non-finite field value at t = " << time;
      throw IntegrityError(os.str());
    }
  }
}

// Share of |W| (or |psi|^2) in the outermost grid cells.
double boundary_share(const PhaseSpaceDensity& d) {
  const PhaseGrid& g = d.grid;
  double edge = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    for (std::size_t q = 0; q < g.np(); ++q) {
      const double v = std::abs(d.at(i, q));
      total += v;
      if (i == 0 || i + 1 == g.nx() || q == 0 || q + 1 == g.np()) edge += v;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

double boundary_share(const SpinorField& psi) {
  const std::size_t n = psi.grid().nx();
  const double total = psi.norm_squared() / psi.grid().dx();
  return total > 0.0 ? (psi.at(0).squaredNorm() + psi.at(n - 1).squaredNorm()) / total : 0.0;
}

struct RunContext {
  const RunConfig& config;
  fs::path dir;
  json meta;
  bool warned = false;

  void boundary_check(double share, double time) {
    if (share > 1e-6 && !warned) {
      warned = true;
      std::cerr << "warning: boundary cells hold a fraction " << share << " of the total at t = " << time
                << "; the periodic box may be too small\n";
    }
  }

  void write_meta() const {
    std::ofstream os(dir / "meta.json");
    os << meta.dump(2) << '\n';
  }
};

void write_particles(std::ofstream& os, const EnsembleState& s) {
  for (std::size_t i = 0; i < s.particles.size(); ++i) {
    os << s.time << ',' << i << ',' << s.particles[i].x << ',' << s.particles[i].p << '\n';
  }
}

void run_phase_space(RunContext& ctx, std::vector<std::string> columns) {
  const RunConfig& c = ctx.config;
  const Constants& k = c.constants;
  const WignerMatrixField w0 = initial_wigner(c);
  const bool overlay = c.particles > 0;
  if (overlay) columns.insert(columns.end(), {"ensemble_mean_x", "ensemble_mean_p"});
  ctx.meta["columns"] = columns;
  CsvWriter csv(ctx.dir / "observables.csv", columns);

  EnsembleState ens;
  std::size_t ens_step = 0;
  std::ofstream particles;
  if (overlay) {
    ens = sample_from_wigner(wigner_representation(w0), c.particles, c.seed, k, c.potential);
    particles.open(ctx.dir / "particles.csv");
    particles << std::setprecision(17) << "time,index,x,p\n";
  }

  const KvnParams params = kvn_params(c);
  propagate_phase_space(w0, params, c.n_steps, c.frame_stride,
                        [&](std::size_t step, double time, const WignerMatrixField& w) {
                          require_finite_field(w.data(), time);
                          const PhaseSpaceDensity repr = wigner_representation(w);
                          ctx.boundary_check(boundary_share(repr), time);
                          const PhaseSpaceObservables obs = phase_space_observables(w, c.potential, k, time);
                          std::vector<double> row{time, obs.mean_x, obs.mean_p, obs.trace,
                                                  obs.antiparticle_fraction};
                          json frame = {{"step", step}, {"time", time}};
                          const std::string wn = frame_name("wigner", step);
                          const std::string rn = frame_name("repr", step);
                          write_wigner(ctx.dir / "frames" / wn, w, step, time);
                          write_representation(ctx.dir / "frames" / rn, repr, step, time);
                          frame["wigner"] = "frames/" + wn + ".bin";
                          frame["representation"] = "frames/" + rn + ".bin";
                          if (overlay) {
                            for (; ens_step < step; ++ens_step) rk4_step(ens, c.dt);
                            ens.time = time;
                            const EnsembleMoments m = ensemble_moments(ens);
                            row.insert(row.end(), {m.mean_x, m.mean_p});
                            write_particles(particles, ens);
                          }
                          require_finite(row, time);
                          csv.row(row);
                          ctx.meta["frames"].push_back(frame);
                        });
}

void run_dirac(RunContext& ctx, std::vector<std::string> columns) {
  const RunConfig& c = ctx.config;
  const Constants& k = c.constants;
  const SpinorField psi0 = initial_spinor(c);
  const PhaseGrid pg = c.phase_grid();
  columns.push_back("mean_velocity");
  ctx.meta["columns"] = columns;
  CsvWriter csv(ctx.dir / "observables.csv", columns);
  propagate_dirac(psi0, dirac_params(c), c.n_steps, c.frame_stride,
                  [&](std::size_t step, double time, const SpinorField& psi) {
                    require_finite_field(psi.data(), time);
                    ctx.boundary_check(boundary_share(psi), time);
                    const DiracObservables obs = dirac_observables(psi, k, time);
                    const WignerMatrixField w = wigner_transform(psi, pg, k.hbar);
                    const PhaseSpaceDensity repr = wigner_representation(w);
                    const double frac = antiparticle_fraction(w, c.potential, k);
                    const std::vector<double> row{time, obs.mean_x, obs.mean_p, obs.norm, frac, obs.mean_velocity};
                    require_finite(row, time);
                    const std::string sn = frame_name("spinor", step);
                    const std::string wn = frame_name("wigner", step);
                    const std::string rn = frame_name("repr", step);
                    write_spinor(ctx.dir / "frames" / sn, psi, step, time);
                    write_wigner(ctx.dir / "frames" / wn, w, step, time);
                    write_representation(ctx.dir / "frames" / rn, repr, step, time);
                    csv.row(row);
                    ctx.meta["frames"].push_back({{"step", step},
                                                  {"time", time},
                                                  {"spinor", "frames/" + sn + ".bin"},
                                                  {"wigner", "frames/" + wn + ".bin"},
                                                  {"representation", "frames/" + rn + ".bin"}});
                  });
}

void run_ensemble(RunContext& ctx, std::vector<std::string> columns) {
  const RunConfig& c = ctx.config;
  const Constants& k = c.constants;
  const WignerMatrixField w0 = initial_wigner(c);
  const EnsembleState s0 = sample_from_wigner(wigner_representation(w0), c.particles, c.seed, k, c.potential);
  columns.push_back("mean_energy");
  ctx.meta["columns"] = columns;
  CsvWriter csv(ctx.dir / "observables.csv", columns);
  std::ofstream particles(ctx.dir / "particles.csv");
  particles << std::setprecision(17) << "time,index,x,p\n";
  integrate_ensemble(s0, c.dt, c.n_steps, c.frame_stride, [&](std::size_t step, const EnsembleState& s) {
    const EnsembleMoments m = ensemble_moments(s);
    double energy = 0.0;
    for (const Particle& q : s.particles) energy += particle_energy(q, s.potential, k);
    energy /= static_cast<double>(s.particles.size());
    // classical points carry no antiparticle content
    const std::vector<double> row{s.time, m.mean_x, m.mean_p, 1.0, std::nan(""), energy};
    require_finite(row, s.time, 4);
    csv.row(row);
    write_particles(particles, s);
    ctx.meta["frames"].push_back({{"step", step}, {"time", s.time}});
  });
}

}  // namespace

WignerMatrixField initial_wigner(const RunConfig& c) {
  const SpinorField psi = gaussian_packet(c.spinor_grid(), c.packet, c.constants.hbar);
  WignerMatrixField w = wigner_transform(psi, c.phase_grid(), c.constants.hbar);
  if (c.project || c.solver == Solver::spohn) w = project_state(w, c.potential, c.constants);
  return w;
}

RunSummary run(const RunConfig& c) {
  validate(c);
  RunContext ctx{c, fs::path(c.output_dir), json::object()};
  fs::create_directories(ctx.dir / "frames");
  ctx.meta["config"] = config_to_json(c);
  ctx.meta["units"] = {{"system", "dimensionless internal units"},
                       {"c", c.constants.c},
                       {"hbar", c.constants.hbar},
                       {"m", c.constants.m},
                       {"e", c.constants.e},
                       {"momentum_axis", "physical momentum p = p^1"}};
  ctx.meta["version"] = version_string();
  ctx.meta["grid"] = grid_to_json(c.phase_grid());
  ctx.meta["spinor_grid"] = grid_to_json(c.spinor_grid());
  ctx.meta["deterministic"] = true;
  ctx.meta["status"] = "running";
  ctx.meta["frames"] = json::array();
  ctx.write_meta();

  const std::vector<std::string> columns{"time", "mean_x", "mean_p", "norm_or_trace", "antiparticle_fraction"};
  try {
    switch (c.solver) {
      case Solver::dirac:
        run_dirac(ctx, columns);
        break;
      case Solver::kvn:
      case Solver::spohn:
        run_phase_space(ctx, columns);
        break;
      case Solver::ensemble:
        run_ensemble(ctx, columns);
        break;
    }
  } catch (const IntegrityError& e) {
    ctx.meta["status"] = "integrity_failure";
    ctx.meta["error"] = e.what();
    ctx.meta["partial"] = true;
    ctx.write_meta();
    throw;
  }
  ctx.meta["status"] = "complete";
  ctx.write_meta();
  return {ctx.dir, ctx.meta["frames"].size(), "complete"};
}

std::vector<double> ObservableTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& r : rows) out.push_back(r.at(i));
      return out;
    }
  }
  throw PreconditionError("observables have no column '" + name + "'");
}

ObservableTable read_observables(const fs::path& csv) {
  std::ifstream is(csv);
  if (!is) throw PreconditionError("missing " + csv.string());
  ObservableTable t;
  std::string line;
  if (!std::getline(is, line)) throw PreconditionError(csv.string() + " is empty");
  {
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) t.columns.push_back(cell);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != t.columns.size()) throw PreconditionError("ragged row in " + csv.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

json load_meta(const fs::path& dir) {
  std::ifstream is(dir / "meta.json");
  if (!is) throw PreconditionError("not a run directory: " + dir.string());
  return json::parse(is);
}

}  // namespace

json compare_runs(const fs::path& a, const fs::path& b) {
  const json ma = load_meta(a);
  const json mb = load_meta(b);
  if (!grid_from_json(ma.at("grid")).same_as(grid_from_json(mb.at("grid")))) {
    throw PreconditionError("runs use different phase-space grids");
  }
  const json& fa = ma.at("frames");
  const json& fb = mb.at("frames");
  if (fa.size() != fb.size()) throw PreconditionError("runs have different frame counts");
  const ObservableTable oa = read_observables(a / "observables.csv");
  const ObservableTable ob = read_observables(b / "observables.csv");
  if (oa.rows.size() != fa.size() || ob.rows.size() != fb.size()) {
    throw PreconditionError("observables and frame lists disagree");
  }
  const auto xa = oa.column("mean_x");
  const auto xb = ob.column("mean_x");
  const auto pa = oa.column("mean_p");
  const auto pb = ob.column("mean_p");
  const auto ca = oa.column("antiparticle_fraction");
  const auto cb = ob.column("antiparticle_fraction");

  json report;
  report["run_a"] = a.string();
  report["run_b"] = b.string();
  report["frames"] = json::array();
  double max_l1 = 0.0;
  double max_dx = 0.0;
  for (std::size_t f = 0; f < fa.size(); ++f) {
    const double ta = fa[f].at("time").get<double>();
    const double tb = fb[f].at("time").get<double>();
    if (std::abs(ta - tb) > 1e-12 * std::max(1.0, std::abs(ta))) {
      throw PreconditionError("runs have different frame times");
    }
    json row = {{"time", ta}, {"delta_mean_x", xa[f] - xb[f]}, {"delta_mean_p", pa[f] - pb[f]},
                {"antiparticle_fraction_a", ca[f]}, {"antiparticle_fraction_b", cb[f]}};
    if (fa[f].contains("representation") && fb[f].contains("representation")) {
      const PhaseSpaceDensity da = read_representation(a / fa[f].at("representation").get<std::string>());
      const PhaseSpaceDensity db = read_representation(b / fb[f].at("representation").get<std::string>());
      double l1 = 0.0;
      for (std::size_t i = 0; i < da.values.size(); ++i) l1 += std::abs(da.values[i] - db.values[i]);
      l1 *= da.grid.dx() * da.grid.dp();
      row["l1"] = l1;
      max_l1 = std::max(max_l1, l1);
    } else {
      row["l1"] = nullptr;
    }
    max_dx = std::max(max_dx, std::abs(xa[f] - xb[f]));
    report["frames"].push_back(row);
  }
  report["max_l1"] = max_l1;
  report["max_abs_delta_mean_x"] = max_dx;
  return report;
}

}  // namespace spinkvn
