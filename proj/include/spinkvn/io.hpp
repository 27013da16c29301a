#pragma once

// Field dumps: little-endian float64, complex values interleaved (re, im).
// Wigner fields are ordered [x][p][row][col], spinor fields [x][component],
// scalar representations [x][p] (real). Each dump `name.bin` has a JSON
// sidecar `name.json` with kind, sizes, physical bounds, step and time.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "spinkvn/grid.hpp"

namespace spinkvn {

struct DumpInfo {
  std::string kind;  // "wigner", "spinor" or "representation"
  PhaseGrid grid{2, 2, Bounds{}};
  std::size_t step = 0;
  double time = 0.0;
};

nlohmann::json grid_to_json(const PhaseGrid& g);
PhaseGrid grid_from_json(const nlohmann::json& j);

/// Writes `base.bin` and `base.json`.
void write_wigner(const std::filesystem::path& base, const WignerMatrixField& w, std::size_t step, double time);
void write_spinor(const std::filesystem::path& base, const SpinorField& psi, std::size_t step, double time);
void write_representation(const std::filesystem::path& base, const PhaseSpaceDensity& d, std::size_t step,
                          double time);

/// `path` may name either the .bin or the .json file. Throws ConfigError on
/// missing files, a kind mismatch or a size mismatch.
DumpInfo read_dump_info(const std::filesystem::path& path);
WignerMatrixField read_wigner(const std::filesystem::path& path, DumpInfo* info = nullptr);
SpinorField read_spinor(const std::filesystem::path& path, DumpInfo* info = nullptr);
PhaseSpaceDensity read_representation(const std::filesystem::path& path, DumpInfo* info = nullptr);

}  // namespace spinkvn
