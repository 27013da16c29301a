// Command-line front end: simulate, project, wigner, sample, compare.
//
// Exit codes: 0 success, 2 invalid configuration or input (one JSON line on
// stderr), 3 numerical integrity failure mid-run.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinkvn/ensemble.hpp"
#include "spinkvn/errors.hpp"
#include "spinkvn/io.hpp"
#include "spinkvn/runner.hpp"
#include "spinkvn/wigner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spinkvn;

namespace {

int fail(int code, const std::string& kind, const std::string& reason) {
  std::cerr << json{{"error", kind}, {"reason", reason}, {"exit_code", code}}.dump() << '\n';
  return code;
}

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> frames;
};

RunConfig resolve(const Common& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.frames) c.frame_stride = *o.frames;
  return c;
}

void add_common(CLI::App* app, Common& o) {
  app->add_option("--config", o.config, "run configuration (JSON)");
  app->add_option("--out", o.out, "output directory or file");
  app->add_option("--seed", o.seed, "random seed for ensemble sampling");
  app->add_option("--frames", o.frames, "write a frame every N steps");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac, classical Koopman-von Neumann and projected phase-space simulations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  Common opts;
  std::string solver;
  auto* simulate = app.add_subcommand("simulate", "run a solver and write a run directory");
  simulate->add_option("solver", solver, "dirac | kvn | spohn | ensemble")->required();
  add_common(simulate, opts);

  std::string input;
  auto* project = app.add_subcommand("project", "apply P+ pointwise to a Wigner dump");
  project->add_option("input", input, "Wigner dump (.bin or .json)")->required();
  add_common(project, opts);

  auto* wigner = app.add_subcommand("wigner", "Wigner transform of a spinor dump");
  wigner->add_option("input", input, "spinor dump (.bin or .json)")->required();
  add_common(wigner, opts);

  std::size_t count = 0;
  auto* sample = app.add_subcommand("sample", "sample an ensemble from a Wigner or representation dump");
  sample->add_option("input", input, "Wigner or representation dump")->required();
  sample->add_option("-n,--count", count, "number of particles (default: config ensemble.particles)");
  add_common(sample, opts);

  std::string run_a;
  std::string run_b;
  auto* compare = app.add_subcommand("compare", "compare two run directories");
  compare->add_option("run_a", run_a)->required();
  compare->add_option("run_b", run_b)->required();
  compare->add_option("--out", opts.out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage", e.what());
  }

  try {
    if (*simulate) {
      RunConfig c = resolve(opts);
      c.solver = solver_from_string(solver);
      const RunSummary s = run(c);
      std::cout << json{{"status", s.status}, {"dir", s.dir.string()}, {"frames", s.frames}}.dump() << '\n';
    } else if (*project) {
      const RunConfig c = resolve(opts);
      DumpInfo info;
      const WignerMatrixField w = read_wigner(input, &info);
      const fs::path out = opts.out.empty() ? fs::path(input).replace_extension().string() + "_projected" : opts.out;
      write_wigner(out, project_state(w, c.potential, c.constants), info.step, info.time);
      std::cout << json{{"output", out.string() + ".bin"}}.dump() << '\n';
    } else if (*wigner) {
      RunConfig c = resolve(opts);
      DumpInfo info;
      const SpinorField psi = read_spinor(input, &info);
      c.nx = info.grid.nx();
      c.x_min = info.grid.bounds().x_min;
      c.x_max = info.grid.bounds().x_max;
      if (opts.config.empty()) c.np = c.nx;
      const WignerMatrixField w = wigner_transform(psi, c.phase_grid(), c.constants.hbar);
      const fs::path out = opts.out.empty() ? fs::path(input).replace_extension().string() + "_wigner" : opts.out;
      write_wigner(out, w, info.step, info.time);
      std::cout << json{{"output", out.string() + ".bin"}}.dump() << '\n';
    } else if (*sample) {
      const RunConfig c = resolve(opts);
      const DumpInfo info = read_dump_info(input);
      const PhaseSpaceDensity d =
          info.kind == "wigner" ? wigner_representation(read_wigner(input)) : read_representation(input);
      const EnsembleState s =
          sample_from_wigner(d, count ? count : c.particles, c.seed, c.constants, c.potential);
      const fs::path out = opts.out.empty() ? fs::path("particles.csv") : fs::path(opts.out);
      std::ofstream os(out);
      os << std::setprecision(17) << "time,index,x,p\n";
      for (std::size_t i = 0; i < s.particles.size(); ++i) {
        os << info.time << ',' << i << ',' << s.particles[i].x << ',' << s.particles[i].p << '\n';
      }
      std::cout << json{{"output", out.string()}, {"particles", s.particles.size()}}.dump() << '\n';
    } else if (*compare) {
      const json report = compare_runs(run_a, run_b);
      if (opts.out.empty()) {
        std::cout << report.dump(2) << '\n';
      } else {
        std::ofstream(opts.out) << report.dump(2) << '\n';
      }
    }
  } catch (const ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const PreconditionError& e) {
    return fail(2, "precondition", e.what());
  } catch (const DomainError& e) {
    return fail(2, "domain", e.what());
  } catch (const IntegrityError& e) {
    return fail(3, "integrity", e.what());
  }
  return 0;
}
