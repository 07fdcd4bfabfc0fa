#pragma once

// The derivation reproduction table behind `nlse verify`: every corpus
// Lagrangian is re-derived and compared with a hand-entered published form.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlse {

class CorpusMissing : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class RowStatus { Exact, MatchesWithErratum, Fail };

std::string to_string(RowStatus s);

struct ReproductionRow {
  std::string equation;  // "Eq17"
  std::string source;    // corpus file name
  RowStatus status = RowStatus::Fail;
  std::string note;      // "D=1 only", "erratum: constant-term sign"
  std::string detail;    // summary of the comparison or the failure
};

struct ReproductionTable {
  std::vector<ReproductionRow> rows;
  double seconds = 0;

  bool ok() const;
  /// Fixed-width text table, one row per line after a header.
  std::string format() const;
};

/// Throws CorpusMissing when the directory is absent or holds no .lag file.
ReproductionTable run_reproduction(const std::filesystem::path& corpus_dir);

}  // namespace nlse
