#pragma once

#include "qsw/galois_form.hpp"

#include <set>
#include <string>

namespace qsw::catalog {

using galois_form::QuasiSplitDatum;

/// The six verification suites the runner knows about.
const std::set<std::string>& known_suites();

/// One catalog line-group: a named quasi-split datum plus the suites to run.
struct CatalogEntry {
  std::string name;
  QuasiSplitDatum datum;
  std::set<std::string> suites;  // defaults to all known suites

  std::string descriptor_line() const;
};

/// Parse the line-oriented catalog format.  Grammar (one token group per
/// line, '#' starts a comment):
///   entry <name>
///     series <A|B|C|D|E|F|G>
///     rank <int>
///     sigma <i0> ... <i_{rank-1}>      (optional; identity when absent)
///     res_degree <int>                 (optional; default 1)
///     q <int>                          (optional; default 5)
///     genus <int>                      (optional; default 0)
///     numerator <c0> ... <c_{2g}>      (rationals; required when genus > 0)
///     suites <name>[,<name>...]        (optional; default: all suites)
///   end
/// Errors carry "source:line: field: message" diagnostics; an automorphism
/// that fails to preserve the Cartan matrix is rejected naming the violated
/// index pair.
std::vector<CatalogEntry> parse_catalog_text(const std::string& text,
                                             const std::string& source_name);
std::vector<CatalogEntry> parse_catalog_file(const std::string& path);

/// Suite execution options (defaults match the documented tolerances).
struct RunOptions {
  std::set<std::string> suites;  // empty: run each entry's own suite list
  std::string entry_filter;      // empty: all entries
  double s = 2.0;                // evaluation point for numeric checks
  int depth = 0;                 // lattice-model depth; 0 = per-kind default
  long q_override = 0;           // 0 = use the entry's q
  int truncation_degree = 12;    // Euler product truncation
  double tol_oracle_sl2 = 1e-6;
  double tol_oracle_su3 = 1e-4;
  double tol_global = 1e-8;
};

/// One oracle comparison: numeric lattice-model integral vs closed form.
struct OracleRow {
  std::string kind;  // "SL2" or "SU3"
  long q = 0;
  double s = 0;
  int depth = 0;
  double numeric = 0;
  double closed_form = 0;
  double abs_error = 0;

  std::string csv() const;
};
std::string oracle_csv_header();

struct SuiteReport {
  std::string suite;
  bool pass = false;
  std::string text;  // indented detail lines, deterministic
};

struct EntryReport {
  std::string name;
  std::string descriptor;
  std::vector<SuiteReport> suites;
  std::vector<OracleRow> oracle_rows;
  bool pass = false;

  std::string to_text() const;
};

/// Run the requested suites for one entry.
EntryReport run_entry(const CatalogEntry& entry, const RunOptions& options);

/// Run a whole catalog (entries sorted by name); exit_ok = every suite of
/// every selected entry passed.
struct CatalogReport {
  std::vector<EntryReport> entries;
  bool exit_ok = false;
};
CatalogReport run_catalog(const std::vector<CatalogEntry>& entries, const RunOptions& options);

}  // namespace qsw::catalog
