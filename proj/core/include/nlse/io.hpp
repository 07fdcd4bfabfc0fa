#pragma once

// Snapshot files, observable CSV logs and run manifests.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "nlse/solver.hpp"

namespace nlse {

/// Binary snapshot: "NLSF1", int32 D, int32 points per axis, double box per
/// axis, double time, then interleaved re/im doubles. Little-endian.
void write_snapshot(const std::filesystem::path& path, const FieldGrid& field, double t);
FieldGrid read_snapshot(const std::filesystem::path& path, double* t = nullptr);

/// "t,norm,energy,momentum_x[,momentum_y],width_x[,width_y],peak[,energy_im]".
std::string csv_header(int dimension, bool complex_energy);
std::string csv_row(const ObservableRecord& r, bool complex_energy);

/// Writes observables.csv and snapshots/snap_<index>.nlsf under a directory.
class DirectorySink : public RunSink {
public:
  DirectorySink(const std::filesystem::path& dir, int dimension, bool complex_energy);
  void on_observables(const ObservableRecord& record) override;
  void on_snapshot(std::size_t index, const FieldGrid& field, double t) override;

private:
  std::filesystem::path dir_;
  std::ofstream csv_;
  bool complex_energy_;
};

}  // namespace nlse
