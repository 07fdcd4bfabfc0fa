#include "nlse/reproduction.hpp"

#include <chrono>

#include <fmt/format.h>

#include "nlse/dimension.hpp"
#include "nlse/dsl.hpp"
#include "nlse/variational.hpp"

namespace nlse {
namespace fs = std::filesystem;

namespace {

enum class Check { Equation, ConjugateEquation, Dimension };

struct RowSpec {
  const char* equation;
  const char* file;
  Check check;
  int dimension;
  const char* reference;  // right-hand side, or the coupling name for Dimension rows
  const char* note;
  Rational hbar_exp = 0, mass_exp = 0, c_exp = 0;
  const char* dimension_text = "";
};

constexpr const char* kKinetic = "-(hbar^2/(2*m))*lap(psi) + V*psi";

const std::vector<RowSpec>& rows() {
  static const std::vector<RowSpec> table = {
      {"Eq10", "linear.lag", Check::ConjugateEquation, 3, "-(hbar^2/(2*m))*lap(psi^*) + V*psi^*", ""},
      {"Eq11", "linear.lag", Check::Equation, 3, "", ""},
      {"Eq17", "gradient_density.lag", Check::Equation, 3,
       "- a^* * dot(grad(psi^*), grad(psi))*psi + a^* * dot(grad(psi^* * psi), grad(psi))"
       " + a^* * (psi^* * psi)*lap(psi)",
       ""},
      {"Eq23", "gradient_quartic.lag", Check::Equation, 1,
       "+ 4*b^* * lap(psi)*dot(grad(psi), grad(psi^*)) + 2*b^* * dot(grad(psi), grad(psi))*lap(psi^*)",
       "D=1 only"},
      {"Eq29", "log_power_m3.lag", Check::Equation, 3, "- c^* * 3*psi/(psi^* * psi)", ""},
      {"Eq35", "root_n3.lag", Check::Equation, 3, "- (1/3)*d^* * (psi^* * psi)^(-2/3)*psi", ""},
      {"Eq41", "power_m4.lag", Check::Equation, 3, "- e^* * 4*(psi^* * psi)^3*psi", ""},
      {"Eq46", "log_density.lag", Check::Equation, 3, "- f^* * ln(psi^* * psi)*psi + f^* * psi", ""},
      {"Eq51", "phase_log.lag", Check::Equation, 3, "- g^* * conj(ln(psi/psi^*))*psi - g^* * psi", ""},
      {"Eq55", "gp_m2.lag", Check::Equation, 3, "- 2*e^* * (psi^* * psi)*psi", ""},
      {"Eq59", "quintic_m3.lag", Check::Equation, 3, "- 3*e^* * (psi^* * psi)^2*psi", ""},
      {"Eq57", "gp_m2.lag", Check::Dimension, 3, "e", "", 3, -2, -1, "[E][L]^3"},
      {"Eq61", "quintic_m3.lag", Check::Dimension, 3, "e", "", 6, -5, -4, "[E][L]^6"},
  };
  return table;
}

std::string erratum_note(const std::string& id) {
  if (id == "log-constant-sign") return "erratum: constant-term sign";
  return "erratum: " + id;
}

Expr reference_expr(const std::string& text, Check check) {
  const std::string full = check == Check::Equation ? std::string(kKinetic) + (text.empty() ? "" : " " + text) : text;
  auto r = parse(full);
  if (!r.ok()) throw std::logic_error("reference does not parse: " + r.format_diagnostics());
  return *r.expr;
}

ReproductionRow run_row(const RowSpec& spec, const fs::path& dir) {
  ReproductionRow row{spec.equation, spec.file, RowStatus::Fail, spec.note, ""};
  const fs::path path = dir / spec.file;
  if (!fs::is_regular_file(path)) {
    row.detail = "no such file";
    return row;
  }
  const ParseResult parsed = parse_file(path.string());
  if (!parsed.ok()) {
    row.detail = parsed.format_diagnostics(spec.file);
    while (!row.detail.empty() && row.detail.back() == '\n') row.detail.pop_back();
    return row;
  }
  try {
    const EvolutionEquation eq = derive_equation(*parsed.expr, spec.dimension);
    if (spec.check == Check::Dimension) {
      const DimensionVector d = coupling_dimension(eq.added_term, spec.reference, spec.dimension);
      const HbarMcExpansion x = express_in_hbar_m_c(d);
      row.detail = fmt::format("{} = {}", d.str(), x.str());
      if (x.dimensionless_residual && x.hbar_exp == spec.hbar_exp && x.mass_exp == spec.mass_exp &&
          x.c_exp == spec.c_exp && d.str() == spec.dimension_text)
        row.status = RowStatus::Exact;
      return row;
    }
    EvolutionEquation checked = eq;
    if (spec.check == Check::ConjugateEquation) checked.raw_form = conjugate(eq.raw_form);
    const VerificationReport report =
        verify_against_reference(checked, reference_expr(spec.reference, spec.check), spec.equation);
    row.detail = report.summary();
    if (report.exact()) {
      row.status = RowStatus::Exact;
    } else if (report.matches_with_errata()) {
      row.status = RowStatus::MatchesWithErratum;
      row.note = erratum_note(*report.discrepancies.front().erratum);
    }
  } catch (const std::exception& e) {
    row.detail = e.what();
  }
  return row;
}

}  // namespace

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Exact: return "exact";
    case RowStatus::MatchesWithErratum: return "matches-with-registered-erratum";
    case RowStatus::Fail: return "fail";
  }
  return "?";
}

bool ReproductionTable::ok() const {
  for (const auto& r : rows)
    if (r.status == RowStatus::Fail) return false;
  return !rows.empty();
}

std::string ReproductionTable::format() const {
  std::string out = fmt::format("{:<6} {:<22} {:<32} {}\n", "eq", "source", "status", "note");
  for (const auto& r : rows) {
    out += fmt::format("{:<6} {:<22} {:<32} {}\n", r.equation, r.source, to_string(r.status), r.note);
    if (r.status == RowStatus::Fail) out += fmt::format("       {}\n", r.detail);
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.status == RowStatus::Fail;
  out += fmt::format("{} rows, {} failed, {:.3f} s\n", rows.size(), failed, seconds);
  return out;
}

ReproductionTable run_reproduction(const fs::path& corpus_dir) {
  bool any = false;
  std::error_code ec;
  if (fs::is_directory(corpus_dir, ec)) {
    for (const auto& entry : fs::directory_iterator(corpus_dir, ec))
      if (entry.path().extension() == ".lag") any = true;
  }
  if (!any) throw CorpusMissing(fmt::format("corpus missing: no .lag files in '{}'", corpus_dir.string()));

  const auto start = std::chrono::steady_clock::now();
  ReproductionTable table;
  for (const auto& spec : rows()) table.rows.push_back(run_row(spec, corpus_dir));
  table.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

}  // namespace nlse
