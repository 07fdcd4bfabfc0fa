#include "nlse/io.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

#include <fmt/format.h>

namespace nlse {
namespace {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

constexpr char kMagic[5] = {'N', 'L', 'S', 'F', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw std::runtime_error("truncated snapshot " + path.string());
  return v;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void write_snapshot(const std::filesystem::path& path, const FieldGrid& field, double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::int32_t>(out, field.dimension);
  for (int n : field.points) put<std::int32_t>(out, n);
  for (double l : field.box) put<double>(out, l);
  put<double>(out, t);
  for (const auto& v : field.samples) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

FieldGrid read_snapshot(const std::filesystem::path& path, double* t) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("no such file: " + path.string());
  char magic[5];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not an NLSF1 snapshot: " + path.string());
  FieldGrid g;
  g.dimension = get<std::int32_t>(in, path);
  if (g.dimension != 1 && g.dimension != 2) throw std::runtime_error("bad snapshot dimension in " + path.string());
  for (int a = 0; a < g.dimension; ++a) g.points.push_back(get<std::int32_t>(in, path));
  for (int a = 0; a < g.dimension; ++a) g.box.push_back(get<double>(in, path));
  const double time = get<double>(in, path);
  if (t != nullptr) *t = time;
  std::size_t n = 1;
  for (int p : g.points) {
    if (p < 2 || p > (1 << 24)) throw std::runtime_error("bad snapshot shape in " + path.string());
    n *= static_cast<std::size_t>(p);
  }
  g.samples.resize(n);
  for (auto& v : g.samples) {
    const double re = get<double>(in, path);
    const double im = get<double>(in, path);
    v = {re, im};
  }
  g.validate();
  return g;
}

std::string csv_header(int dimension, bool complex_energy) {
  std::string h = "t,norm,energy,momentum_x";
  if (dimension == 2) h += ",momentum_y";
  h += ",width_x";
  if (dimension == 2) h += ",width_y";
  h += ",peak";
  if (complex_energy) h += ",energy_im";
  return h;
}

std::string csv_row(const ObservableRecord& r, bool complex_energy) {
  std::string row = num(r.t) + "," + num(r.norm) + "," + num(r.energy.real());
  for (double p : r.momentum) row += "," + num(p);
  for (double w : r.width) row += "," + num(w);
  row += "," + num(r.peak);
  if (complex_energy) row += "," + num(r.energy.imag());
  return row;
}

DirectorySink::DirectorySink(const std::filesystem::path& dir, int dimension, bool complex_energy)
    : dir_(dir), complex_energy_(complex_energy) {
  std::filesystem::create_directories(dir_ / "snapshots");
  csv_.open(dir_ / "observables.csv");
  if (!csv_) throw std::runtime_error("cannot write " + (dir_ / "observables.csv").string());
  csv_ << csv_header(dimension, complex_energy_) << "\n";
}

void DirectorySink::on_observables(const ObservableRecord& record) {
  csv_ << csv_row(record, complex_energy_) << "\n";
  csv_.flush();
}

void DirectorySink::on_snapshot(std::size_t index, const FieldGrid& field, double t) {
  write_snapshot(dir_ / "snapshots" / fmt::format("snap_{}.nlsf", index), field, t);
}

}  // namespace nlse
