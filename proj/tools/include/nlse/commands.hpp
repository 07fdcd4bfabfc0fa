#pragma once

// Subcommands of the `nlse` executable, callable in-process.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace nlse::cli {

enum ExitCode : int { Ok = 0, VerifyFailure = 1, UsageError = 2, RuntimeAbort = 3 };

/// NLSE_CORPUS if set, else the corpus directory of the source tree.
std::filesystem::path default_corpus();

int cmd_derive(const std::filesystem::path& file, int dimension, std::ostream& out, std::ostream& err);

int cmd_dimension(const std::filesystem::path& file, const std::string& coupling, double mass_kg, double length_m,
                  int spatial_dim, std::ostream& out, std::ostream& err);

int cmd_evolve(const std::filesystem::path& jobspec, std::ostream& out, std::ostream& err);

int cmd_verify(const std::filesystem::path& corpus, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlse::cli
