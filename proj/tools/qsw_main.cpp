// Command-line runner for the verification catalog.
//
//   qsw run [catalog] [--entry NAME] [--suites a,b,...] [--s S] [--depth D]
//           [--q Q] [--truncation-degree N] [--out-dir DIR]
//
// Prints one summary line per entry/suite, writes per-entry reports and an
// oracle CSV when --out-dir is given, and exits 0 exactly when every
// requested suite of every selected entry passed.

#include "qsw/catalog.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Exact intertwining-operator verification runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run catalog suites");
  std::string catalog_path = "data/catalog.txt";
  std::string suites_arg, entry, out_dir;
  qsw::catalog::RunOptions opt;
  run->add_option("catalog", catalog_path, "catalog descriptor file")
      ->capture_default_str();
  run->add_option("--entry", entry, "run a single entry by name");
  run->add_option("--suites", suites_arg,
                  "comma-separated subset of: local,global,poles,chain,oracle,convexity");
  run->add_option("--s", opt.s, "evaluation point for numeric checks")->capture_default_str();
  run->add_option("--depth", opt.depth, "lattice-model depth (0 = per-kind default)")
      ->capture_default_str();
  run->add_option("--q", opt.q_override, "override the constant field size (prime power)");
  run->add_option("--truncation-degree", opt.truncation_degree,
                  "Euler product truncation degree")
      ->capture_default_str();
  run->add_option("--tol-oracle-sl2", opt.tol_oracle_sl2, "SL2 oracle tolerance")
      ->capture_default_str();
  run->add_option("--tol-oracle-su3", opt.tol_oracle_su3, "SU3 oracle tolerance")
      ->capture_default_str();
  run->add_option("--tol-global", opt.tol_global, "Euler truncation tolerance")
      ->capture_default_str();
  run->add_option("--out-dir", out_dir, "write per-entry reports and oracle.csv here");

  CLI11_PARSE(app, argc, argv);

  opt.entry_filter = entry;
  if (!suites_arg.empty()) {
    std::istringstream parts(suites_arg);
    std::string one;
    while (std::getline(parts, one, ',')) {
      if (one.empty()) continue;
      if (!qsw::catalog::known_suites().count(one)) {
        std::cerr << "unknown suite '" << one << "'\n";
        return 2;
      }
      opt.suites.insert(one);
    }
  }

  std::vector<qsw::catalog::CatalogEntry> entries;
  try {
    entries = qsw::catalog::parse_catalog_file(catalog_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  qsw::catalog::CatalogReport report;
  try {
    report = qsw::catalog::run_catalog(entries, opt);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 2;
  }
  if (report.entries.empty()) {
    std::cerr << "no entries selected\n";
    return 2;
  }

  for (const auto& er : report.entries) {
    std::cout << er.name << ": " << (er.pass ? "PASS" : "FAIL");
    for (const auto& s : er.suites) std::cout << "  " << s.suite << (s.pass ? "+" : "-");
    std::cout << "\n";
  }
  std::cout << (report.exit_ok ? "all entries pass" : "FAILURES PRESENT") << "\n";

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream csv(std::filesystem::path(out_dir) / "oracle.csv");
    csv << "entry," << qsw::catalog::oracle_csv_header() << "\n";
    for (const auto& er : report.entries) {
      std::ofstream rep(std::filesystem::path(out_dir) / (er.name + ".report.txt"));
      rep << er.to_text();
      for (const auto& row : er.oracle_rows) csv << er.name << "," << row.csv() << "\n";
    }
    std::cout << "reports written to " << out_dir << "\n";
  }
  return report.exit_ok ? 0 : 1;
}
