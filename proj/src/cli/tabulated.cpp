#include "closure/cli/tabulated.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "closure/cli/config.hpp"
#include "closure/error.hpp"

namespace closure {

namespace {

constexpr char kMagic[8] = {'C', 'L', 'F', 'I', 'E', 'L', 'D', '1'};

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

template <class T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorKind::Io, "truncated field file " + path.string());
  return to_little(v);
}

std::filesystem::path sidecar(const std::filesystem::path& path) { return path.string() + ".meta"; }

std::string dims_text(const std::array<std::size_t, 3>& d) {
  return "[" + std::to_string(d[0]) + ", " + std::to_string(d[1]) + ", " + std::to_string(d[2]) + "]";
}

void write_file(const std::filesystem::path& path, const GridChart& chart, std::uint32_t components,
                const std::function<std::span<const double>(int)>& plane, double time) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, components);
    put<std::uint32_t>(out, 0);
    for (std::size_t d : chart.dims) put<std::uint64_t>(out, d);
    for (std::uint32_t c = 0; c < components; ++c)
      for (double v : plane(static_cast<int>(c))) put<double>(out, v);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
  }
  std::ofstream meta(sidecar(path), std::ios::trunc);
  if (!meta) throw Error(ErrorKind::Io, "cannot write " + sidecar(path).string());
  char tbuf[64];
  const auto res = std::to_chars(tbuf, tbuf + sizeof tbuf, time);
  meta << "[field]\n"
       << "file = \"" << path.filename().string() << "\"\n"
       << "components = " << components << "\n"
       << "dims = " << dims_text(chart.dims) << "\n"
       << "layout = \"row-major, z fastest, little-endian float64, one plane per component\"\n"
       << "order = " << (components == 6 ? "[\"11\", \"12\", \"13\", \"22\", \"23\", \"33\"]" : "[\"scalar\"]") << "\n"
       << "time = " << std::string(tbuf, res.ptr) << "\n";
}

ConfigSection read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(sidecar(path));
  if (!in) throw Error(ErrorKind::Io, "missing sidecar " + sidecar(path).string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Config cfg = parse_config(buf.str());
  const auto it = cfg.find("field");
  if (it == cfg.end()) throw Error(ErrorKind::Schema, sidecar(path).string() + ": missing [field] section");
  return it->second;
}

double sidecar_number(const ConfigSection& s, const std::string& key, const std::filesystem::path& path) {
  const auto it = s.find(key);
  if (it == s.end() || it->second.type != ConfigValue::Type::Number)
    throw Error(ErrorKind::Schema, sidecar(path).string() + ": field." + key + " missing or not a number");
  return it->second.number;
}

std::vector<double> read_file(const std::filesystem::path& path, const GridChart& chart, std::uint32_t components) {
  const ConfigSection meta = read_sidecar(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw Error(ErrorKind::Io, path.string() + " is not a field file");
  const auto comps = get<std::uint32_t>(in, path);
  (void)get<std::uint32_t>(in, path);
  std::array<std::size_t, 3> dims{};
  for (auto& d : dims) d = static_cast<std::size_t>(get<std::uint64_t>(in, path));

  if (comps != components)
    throw Error(ErrorKind::Shape, path.string() + ": expected " + std::to_string(components) + " components, file has " +
                                      std::to_string(comps));
  if (sidecar_number(meta, "components", path) != comps)
    throw Error(ErrorKind::Shape, path.string() + ": sidecar component count disagrees with the header");
  const auto md = meta.find("dims");
  if (md == meta.end() || md->second.items.size() != 3)
    throw Error(ErrorKind::Schema, sidecar(path).string() + ": field.dims must list three sizes");
  for (int a = 0; a < 3; ++a)
    if (md->second.items[a].number != static_cast<double>(dims[a]))
      throw Error(ErrorKind::Shape, path.string() + ": sidecar dims disagree with the header");
  if (dims != chart.dims)
    throw Error(ErrorKind::Shape, path.string() + ": dims " + dims_text(dims) + " do not match the analysis grid " +
                                      dims_text(chart.dims));

  std::vector<double> data(components * chart.size());
  for (double& v : data) v = get<double>(in, path);
  in.peek();
  if (!in.eof()) throw Error(ErrorKind::Shape, path.string() + ": trailing data after the declared samples");
  return data;
}

}  // namespace

void write_scalar_field(const std::filesystem::path& path, const ScalarField& f, double time) {
  write_file(path, f.chart(), 1, [&](int) { return f.values(); }, time);
}

void write_tensor_field(const std::filesystem::path& path, const SymTensorField& f, double time) {
  write_file(path, f.chart(), 6, [&](int c) { return f.plane(c); }, time);
}

ScalarField read_scalar_field(const std::filesystem::path& path, const GridChart& chart) {
  return ScalarField(chart, read_file(path, chart, 1));
}

SymTensorField read_tensor_field(const std::filesystem::path& path, const GridChart& chart) {
  std::vector<double> data = read_file(path, chart, 6);
  SymTensorField::Planes planes;
  const std::size_t n = chart.size();
  for (int c = 0; c < 6; ++c) planes[c].assign(data.begin() + c * n, data.begin() + (c + 1) * n);
  return SymTensorField(chart, std::move(planes));
}

double read_field_time(const std::filesystem::path& path) { return sidecar_number(read_sidecar(path), "time", path); }

}  // namespace closure
