#include "spinkvn/io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "spinkvn/errors.hpp"

namespace spinkvn {

static_assert(std::endian::native == std::endian::little, "dump format assumes a little-endian host");

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path with_ext(const fs::path& p, const char* ext) {
  fs::path out = p;
  if (out.extension() == ".bin" || out.extension() == ".json") out.replace_extension();
  out += ext;
  return out;
}

void write_sidecar(const fs::path& base, const std::string& kind, const PhaseGrid& g, std::size_t step,
                   double time, const std::string& layout, std::size_t count) {
  json j;
  j["kind"] = kind;
  j["grid"] = grid_to_json(g);
  j["step"] = step;
  j["time"] = time;
  j["layout"] = layout;
  j["dtype"] = "<f8";
  j["values"] = count;
  j["data"] = with_ext(base, ".bin").filename().string();
  std::ofstream os(with_ext(base, ".json"));
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("cannot write " + with_ext(base, ".json").string());
}

void write_doubles(const fs::path& base, const double* data, std::size_t count) {
  fs::create_directories(fs::absolute(base).parent_path());
  std::ofstream os(with_ext(base, ".bin"), std::ios::binary);
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (!os) throw std::runtime_error("cannot write " + with_ext(base, ".bin").string());
}

void read_doubles(const fs::path& path, double* data, std::size_t count) {
  const fs::path bin = with_ext(path, ".bin");
  std::error_code ec;
  const auto size = fs::file_size(bin, ec);
  if (ec) throw ConfigError("missing dump " + bin.string());
  if (size != count * sizeof(double)) {
    std::ostringstream os;
    os << bin.string() << " holds " << size << " bytes, expected " << count * sizeof(double);
    throw ConfigError(os.str());
  }
  std::ifstream is(bin, std::ios::binary);
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (!is) throw ConfigError("cannot read " + bin.string());
}

DumpInfo expect_kind(const fs::path& path, const std::string& kind) {
  DumpInfo info = read_dump_info(path);
  if (info.kind != kind) throw ConfigError(path.string() + " is a " + info.kind + " dump, expected " + kind);
  return info;
}

}  // namespace

json grid_to_json(const PhaseGrid& g) {
  const Bounds& b = g.bounds();
  return {{"nx", g.nx()}, {"np", g.np()}, {"x_min", b.x_min}, {"x_max", b.x_max}, {"p_min", b.p_min},
          {"p_max", b.p_max}};
}

PhaseGrid grid_from_json(const json& j) {
  try {
    return make_grid(j.at("nx").get<std::size_t>(), j.at("np").get<std::size_t>(),
                     Bounds{j.at("x_min").get<double>(), j.at("x_max").get<double>(), j.at("p_min").get<double>(),
                            j.at("p_max").get<double>()});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad grid description: ") + e.what());
  }
}

void write_wigner(const fs::path& base, const WignerMatrixField& w, std::size_t step, double time) {
  const auto d = w.data();
  write_doubles(base, reinterpret_cast<const double*>(d.data()), 2 * d.size());
  write_sidecar(base, "wigner", w.grid(), step, time, "[x][p][row][col] complex (re,im)", 2 * d.size());
}

void write_spinor(const fs::path& base, const SpinorField& psi, std::size_t step, double time) {
  const auto d = psi.data();
  write_doubles(base, reinterpret_cast<const double*>(d.data()), 2 * d.size());
  write_sidecar(base, "spinor", psi.grid(), step, time, "[x][component] complex (re,im)", 2 * d.size());
}

void write_representation(const fs::path& base, const PhaseSpaceDensity& d, std::size_t step, double time) {
  write_doubles(base, d.values.data(), d.values.size());
  write_sidecar(base, "representation", d.grid, step, time, "[x][p] real", d.values.size());
}

DumpInfo read_dump_info(const fs::path& path) {
  const fs::path meta = with_ext(path, ".json");
  std::ifstream is(meta);
  if (!is) throw ConfigError("missing dump metadata " + meta.string());
  try {
    const json j = json::parse(is);
    DumpInfo info;
    info.kind = j.at("kind").get<std::string>();
    info.grid = grid_from_json(j.at("grid"));
    info.step = j.at("step").get<std::size_t>();
    info.time = j.at("time").get<double>();
    return info;
  } catch (const json::exception& e) {
    throw ConfigError("bad dump metadata " + meta.string() + ": " + e.what());
  }
}

WignerMatrixField read_wigner(const fs::path& path, DumpInfo* info) {
  const DumpInfo di = expect_kind(path, "wigner");
  WignerMatrixField w(di.grid);
  read_doubles(path, reinterpret_cast<double*>(w.data().data()), 2 * w.data().size());
  if (info) *info = di;
  return w;
}

SpinorField read_spinor(const fs::path& path, DumpInfo* info) {
  const DumpInfo di = expect_kind(path, "spinor");
  SpinorField psi(di.grid);
  read_doubles(path, reinterpret_cast<double*>(psi.data().data()), 2 * psi.data().size());
  if (info) *info = di;
  return psi;
}

PhaseSpaceDensity read_representation(const fs::path& path, DumpInfo* info) {
  const DumpInfo di = expect_kind(path, "representation");
  PhaseSpaceDensity d(di.grid);
  read_doubles(path, d.values.data(), d.values.size());
  if (info) *info = di;
  return d;
}

}  // namespace spinkvn
