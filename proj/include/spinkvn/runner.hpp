#pragma once

// Run configuration and orchestration. A run directory holds
//
//   meta.json          config (verbatim), units, version, status, frame list
//   observables.csv    time,mean_x,mean_p,norm_or_trace,antiparticle_fraction[,extras]
//   frames/            field dumps (see io.hpp), one set per output frame
//   particles.csv      time,index,x,p (only when an ensemble is carried)
//
// Momentum columns hold the physical momentum p = p^1.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinkvn/dirac.hpp"
#include "spinkvn/grid.hpp"
#include "spinkvn/potential.hpp"

namespace spinkvn {

enum class Solver { dirac, kvn, spohn, ensemble };

std::string to_string(Solver s);
Solver solver_from_string(const std::string& s);

struct RunConfig {
  Solver solver = Solver::spohn;
  std::size_t nx = 256;
  std::size_t np = 256;
  double x_min = -16.0;
  double x_max = 16.0;
  // Momentum range of the Wigner grid; unset means [-pi hbar/dx, pi hbar/dx).
  std::optional<double> p_min;
  std::optional<double> p_max;
  Constants constants;
  Potential potential;
  GaussianPacket packet;
  bool project = true;  // apply P+ to the initial Wigner field (forced for spohn)
  double dt = 1e-3;
  std::size_t n_steps = 4000;
  std::size_t frame_stride = 100;
  std::string output_dir = "run";
  std::uint64_t seed = 0;
  std::size_t particles = 2000;  // ensemble overlay size, 0 disables it for kvn/spohn

  PhaseGrid spinor_grid() const;
  PhaseGrid phase_grid() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);
bool same_potential(const Potential& a, const Potential& b);

nlohmann::json potential_to_json(const Potential& p);
/// Accepts the canonical form plus the shortcuts {offset, slope} for
/// scalar-linear, {a0, a1, a2} for scalar-quadratic and {force} for a
/// uniform force along +x.
Potential potential_from_json(const nlohmann::json& j, const Constants& k);

nlohmann::json config_to_json(const RunConfig& c);
/// Missing keys take the defaults above. Throws ConfigError on bad values
/// or unknown keys.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Checks every solver guard without computing anything; throws ConfigError.
void validate(const RunConfig& c);

struct RunSummary {
  std::filesystem::path dir;
  std::size_t frames = 0;
  std::string status;
};

/// Executes the configured run into c.output_dir. Throws ConfigError or
/// PreconditionError before any output for invalid configs; IntegrityError
/// mid-run after flagging meta.json with status "integrity_failure".
RunSummary run(const RunConfig& c);

/// Builds the initial Wigner field of a config (projected when requested).
WignerMatrixField initial_wigner(const RunConfig& c);

struct ObservableTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<double> column(const std::string& name) const;
};

ObservableTable read_observables(const std::filesystem::path& csv);

/// Per-frame L1 distance of the Wigner representations, centroid
/// differences and both antiparticle-fraction series. Throws
/// PreconditionError for incompatible grids or frame times.
nlohmann::json compare_runs(const std::filesystem::path& a, const std::filesystem::path& b);

std::string version_string();

}  // namespace spinkvn
