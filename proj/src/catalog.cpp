#include "qsw/catalog.hpp"

#include "qsw/intertwine.hpp"
#include "qsw/localfield.hpp"
#include "qsw/tamagawa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsw::catalog {

using galois_form::RankOneClass;
using galois_form::TwistContext;
using intertwine::FactorProduct;
using ratfun::Zeta;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& src, int line, const std::string& field,
                       const std::string& msg) {
  std::ostringstream os;
  os << src << ":" << line << ": " << field << ": " << msg;
  throw std::runtime_error(os.str());
}

std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream is(body);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

long parse_long(const std::string& src, int line, const std::string& field,
                const std::string& tok) {
  try {
    size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(src, line, field, "expected an integer, got '" + tok + "'");
  }
}

Rational parse_rational(const std::string& src, int line, const std::string& field,
                        const std::string& tok) {
  auto slash = tok.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(tok));
    Int n(tok.substr(0, slash));
    Int d(tok.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(n, d);
  } catch (const std::exception&) {
    fail(src, line, field, "expected a rational a or a/b, got '" + tok + "'");
  }
}

FactorProduct rank_one_closed_local(const RankOneClass& ro) {
  FactorProduct fp = FactorProduct::one();
  if (ro.kind == RankOneClass::Kind::SL2) {
    fp.mul_atom(Zeta::one(), Rational(-1), Rational(1), +1);
    fp.mul_atom(Zeta::one(), Rational(0), Rational(1), -1);
  } else {
    fp.mul_atom(Zeta::one(), Rational(-2), Rational(2), +1);
    fp.mul_atom(Zeta::minus_one(), Rational(-1), Rational(2), +1);
    fp.mul_atom(Zeta::one(), Rational(0), Rational(2), -1);
    fp.mul_atom(Zeta::minus_one(), Rational(0), Rational(2), -1);
  }
  return fp.substitute_power(ro.field_degree);
}

RatVec ones_vec(int r) { return RatVec(r, Rational(1)); }

SuiteReport run_local_suite(const TwistContext& ctx) {
  SuiteReport rep{"local", true, ""};
  std::ostringstream os;
  for (int a = 0; a < ctx.rel_rank; ++a) {
    const auto& ro = ctx.rank_one[a];
    FactorProduct closed = rank_one_closed_local(ro);
    FactorProduct computed = intertwine::local_factor(
        ctx, rootsys::weyl_simple(ctx.rel, a), ones_vec(ctx.rel_rank), 1);
    bool ok = computed == closed;
    rep.pass = rep.pass && ok;
    os << "  simple " << a << " ("
       << (ro.kind == RankOneClass::Kind::SL2 ? "SL2" : "SU3") << " over degree "
       << ro.field_degree << "): " << (ok ? "exact closed form" : "MISMATCH") << "\n";
    if (!ok) os << "    computed: " << computed.to_string() << "\n    expected: "
                << closed.to_string() << "\n";
  }
  rep.text = os.str();
  return rep;
}

SuiteReport run_global_suite(const TwistContext& ctx, const RunOptions& opt) {
  SuiteReport rep{"global", true, ""};
  std::ostringstream os;
  auto w0 = rootsys::longest_element(ctx.rel);
  RatVec z = ones_vec(ctx.rel_rank);
  FactorProduct whole = intertwine::global_intertwiner(ctx, w0, z);
  os << "  longest-element operator: " << whole.to_string() << "\n";

  if (ctx.datum.genus == 0) {
    double truncated = intertwine::euler_truncated(ctx, w0, z, opt.s, opt.truncation_degree);
    double closed = whole.evaluate(opt.s, static_cast<double>(ctx.datum.q)).real();
    double err = std::abs(truncated - closed);
    bool ok = err < opt.tol_global;
    rep.pass = rep.pass && ok;
    os << "  euler truncation (degree " << opt.truncation_degree << ", s = " << fmt_double(opt.s)
       << "): |" << fmt_double(truncated) << " - " << fmt_double(closed)
       << "| = " << fmt_double(err) << (ok ? " within " : " EXCEEDS ")
       << fmt_double(opt.tol_global) << "\n";
  } else {
    os << "  euler truncation: skipped (genus > 0)\n";
  }

  auto word = rootsys::reduced_word(ctx.rel, w0);
  if (word.size() >= 2) {
    size_t t = word.size() / 2;
    auto w1 = rootsys::weyl_from_word(ctx.rel, {word.begin(), word.begin() + t});
    auto w2 = rootsys::weyl_from_word(ctx.rel, {word.begin() + t, word.end()});
    FactorProduct prod = intertwine::global_intertwiner(ctx, w1, ctx.z_action(w2, z));
    prod.multiply(intertwine::global_intertwiner(ctx, w2, z));
    bool ok = prod == whole;
    rep.pass = rep.pass && ok;
    os << "  cocycle split at position " << t << ": " << (ok ? "exact" : "MISMATCH") << "\n";
  }

  if (ctx.datum.res_degree > 1) {
    auto base_datum = ctx.datum;
    base_datum.res_degree = 1;
    auto base = TwistContext::build(base_datum);
    if (base.rel_rank == ctx.rel_rank) {
      FactorProduct sub = intertwine::global_intertwiner(
                              base, rootsys::longest_element(base.rel), ones_vec(base.rel_rank))
                              .substitute_power(ctx.datum.res_degree);
      bool ok = sub == whole;
      rep.pass = rep.pass && ok;
      os << "  restriction substitution (q,u)->(q^" << ctx.datum.res_degree << ",u^"
         << ctx.datum.res_degree << "): " << (ok ? "exact" : "MISMATCH") << "\n";
    }
  }
  rep.text = os.str();
  return rep;
}

SuiteReport run_poles_suite(const TwistContext& ctx) {
  SuiteReport rep{"poles", true, ""};
  std::ostringstream os;
  auto pr = intertwine::pole_report(ctx);
  bool total_ok = pr.total_order == -pr.relative_rank;
  rep.pass = rep.pass && total_ok;
  os << "  order at s = 1 on the principal ray: " << pr.total_order << " (relative rank "
     << pr.relative_rank << ")" << (total_ok ? "" : " MISMATCH") << "\n";
  for (size_t a = 0; a < pr.simple_pole_orders.size(); ++a) {
    bool ok = pr.simple_pole_orders[a] == 1;
    rep.pass = rep.pass && ok;
    os << "  wall z_" << (a + 1) << " = 1: pole order " << pr.simple_pole_orders[a]
       << (ok ? "" : " (expected 1)") << "\n";
  }
  for (long o : pr.other_orders) rep.pass = rep.pass && o == 0;
  os << "  off-wall orbit factors regular at s = 1: "
     << (std::all_of(pr.other_orders.begin(), pr.other_orders.end(),
                     [](long o) { return o == 0; })
             ? "yes"
             : "NO")
     << "\n";
  if (pr.interval_checked) {
    rep.pass = rep.pass && pr.regular_right_of_one;
    os << "  no zero or pole for s in (1, 5/4]: " << (pr.regular_right_of_one ? "yes" : "NO")
       << "\n";
  } else {
    os << "  interval regularity: not checked (genus > 0)\n";
  }
  rep.text = os.str();
  return rep;
}

SuiteReport run_chain_suite(const TwistContext& ctx) {
  SuiteReport rep{"chain", true, ""};
  auto pr = intertwine::pole_report(ctx);
  auto chain = tamagawa::tau_chain(ctx.datum, -pr.total_order);
  rep.pass = chain.certified;
  std::ostringstream os;
  std::istringstream body(chain.to_text());
  std::string line;
  while (std::getline(body, line)) os << "  " << line << "\n";
  rep.text = os.str();
  return rep;
}

SuiteReport run_oracle_suite(const TwistContext& ctx, const RunOptions& opt,
                             std::vector<OracleRow>& rows) {
  SuiteReport rep{"oracle", true, ""};
  std::ostringstream os;
  long q = ctx.datum.q;
  std::set<int> sl2_degrees{1};
  std::set<int> su3_degrees;
  for (const auto& ro : ctx.rank_one) {
    if (ro.kind == RankOneClass::Kind::SL2)
      sl2_degrees.insert(ro.field_degree);
    else
      su3_degrees.insert(ro.field_degree);
  }
  auto emit = [&](const std::string& kind, long qe, int depth, double numeric, double closed,
                  double tol) {
    OracleRow row{kind, qe, opt.s, depth, numeric, closed, std::abs(numeric - closed)};
    rows.push_back(row);
    bool ok = row.abs_error < tol;
    rep.pass = rep.pass && ok;
    os << "  " << kind << " q = " << qe << " depth " << depth << ": |"
       << fmt_double(numeric) << " - " << fmt_double(closed) << "| = "
       << fmt_double(row.abs_error) << (ok ? " within " : " EXCEEDS ") << fmt_double(tol)
       << "\n";
  };
  for (int fd : sl2_degrees) {
    Int qe_big = ipow(Int(q), static_cast<unsigned>(fd));
    if (qe_big > 1000) {
      os << "  SL2 q = q^" << fd << ": skipped (residue field too large)\n";
      continue;
    }
    long qe = to_long(qe_big);
    int depth = opt.depth > 0 ? opt.depth : 20;
    double numeric = shell_integral(LocalKind::SL2, static_cast<int>(qe), opt.s, depth);
    double qs = std::pow(static_cast<double>(qe), -opt.s);
    double closed = (1.0 - qs / qe) / (1.0 - qs);
    emit("SL2", qe, depth, numeric, closed, opt.tol_oracle_sl2);
  }
  for (int fd : su3_degrees) {
    Int qe_big = ipow(Int(q), static_cast<unsigned>(fd));
    if (qe_big > 27 || qe_big % 2 == 0) {
      os << "  SU3 q = q^" << fd << ": skipped (outside lattice-model range)\n";
      continue;
    }
    long qe = to_long(qe_big);
    int depth = opt.depth > 0 ? std::min(opt.depth, 10) : 8;
    double numeric = shell_integral(LocalKind::SU3, static_cast<int>(qe), opt.s, depth);
    double y = std::pow(static_cast<double>(qe), -2.0 * opt.s);
    double qd = static_cast<double>(qe);
    double closed = ((1.0 - y / (qd * qd)) * (1.0 + y / qd)) / ((1.0 - y) * (1.0 + y));
    emit("SU3", qe, depth, numeric, closed, opt.tol_oracle_su3);
  }
  rep.text = os.str();
  return rep;
}

SuiteReport run_convexity_suite(const TwistContext& ctx) {
  SuiteReport rep{"convexity", true, ""};
  std::ostringstream os;
  int r = ctx.rel_rank;
  for (int mask = 0; mask < (1 << r); ++mask) {
    RatVec v(r);
    bool is_rho = true;
    std::ostringstream tag;
    for (int i = 0; i < r; ++i) {
      v[i] = (mask >> i) & 1 ? Rational(1) : Rational(1, 2);
      if (v[i] != 1) is_rho = false;
      tag << (i ? "," : "") << (((mask >> i) & 1) ? "1" : "1/2");
    }
    bool inside = intertwine::convex_hull_member(ctx, v);
    rep.pass = rep.pass && inside;
    os << "  box vertex (" << tag.str() << "): " << (inside ? "in hull" : "OUTSIDE HULL");
    if (!is_rho) {
      bool strict = intertwine::hecke_strictly_less(ctx, v);
      rep.pass = rep.pass && strict;
      os << ", majorant strictly below the endpoint: " << (strict ? "yes" : "NO");
    }
    os << "\n";
  }
  RatVec mid(r, Rational(3, 4));
  bool inside = intertwine::convex_hull_member(ctx, mid);
  bool strict = intertwine::hecke_strictly_less(ctx, mid);
  rep.pass = rep.pass && inside && strict;
  os << "  interior point (3/4,...): " << (inside ? "in hull" : "OUTSIDE HULL")
     << ", majorant strictly below: " << (strict ? "yes" : "NO") << "\n";
  rep.text = os.str();
  return rep;
}

}  // namespace

const std::set<std::string>& known_suites() {
  static const std::set<std::string> s{"local", "global", "poles", "chain", "oracle",
                                       "convexity"};
  return s;
}

std::string CatalogEntry::descriptor_line() const {
  std::ostringstream os;
  os << "series=" << static_cast<char>(datum.series) << " rank=" << datum.rank;
  if (!datum.sigma.empty()) {
    os << " sigma=";
    for (size_t i = 0; i < datum.sigma.size(); ++i) os << (i ? "," : "") << datum.sigma[i];
  }
  os << " res_degree=" << datum.res_degree << " q=" << datum.q << " genus=" << datum.genus;
  if (!datum.zeta_numerator.empty()) {
    os << " numerator=";
    for (size_t i = 0; i < datum.zeta_numerator.size(); ++i)
      os << (i ? "," : "") << datum.zeta_numerator[i];
  }
  return os.str();
}

std::vector<CatalogEntry> parse_catalog_text(const std::string& text,
                                             const std::string& source_name) {
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  bool in_entry = false;
  int entry_line = 0;
  CatalogEntry cur;
  bool have_series = false, have_rank = false;
  std::set<std::string> names;
  std::vector<CatalogEntry> out;

  while (std::getline(is, raw)) {
    ++lineno;
    auto tok = tokenize(raw);
    if (tok.empty()) continue;
    const std::string& key = tok[0];

    if (key == "entry") {
      if (in_entry) fail(source_name, lineno, "entry", "nested entry (missing 'end'?)");
      if (tok.size() != 2) fail(source_name, lineno, "entry", "expected exactly one name");
      if (!names.insert(tok[1]).second)
        fail(source_name, lineno, "entry", "duplicate entry name '" + tok[1] + "'");
      cur = CatalogEntry{};
      cur.name = tok[1];
      cur.datum.q = 5;
      in_entry = true;
      entry_line = lineno;
      have_series = have_rank = false;
      continue;
    }
    if (!in_entry) fail(source_name, lineno, key, "directive outside an entry block");

    if (key == "series") {
      if (tok.size() != 2 || tok[1].size() != 1)
        fail(source_name, lineno, "series", "expected a single letter A-G");
      try {
        cur.datum.series = rootsys::series_from_char(tok[1][0]);
      } catch (const std::exception& e) {
        fail(source_name, lineno, "series", e.what());
      }
      have_series = true;
    } else if (key == "rank") {
      if (tok.size() != 2) fail(source_name, lineno, "rank", "expected one integer");
      long v = parse_long(source_name, lineno, "rank", tok[1]);
      if (v < 1 || v > 8) fail(source_name, lineno, "rank", "rank out of range 1..8");
      cur.datum.rank = static_cast<int>(v);
      have_rank = true;
    } else if (key == "sigma") {
      if (!have_rank) fail(source_name, lineno, "sigma", "rank must be declared before sigma");
      if (static_cast<int>(tok.size()) != cur.datum.rank + 1)
        fail(source_name, lineno, "sigma",
             "expected " + std::to_string(cur.datum.rank) + " images, got " +
                 std::to_string(tok.size() - 1));
      cur.datum.sigma.clear();
      for (size_t i = 1; i < tok.size(); ++i) {
        long v = parse_long(source_name, lineno, "sigma", tok[i]);
        if (v < 0 || v >= cur.datum.rank)
          fail(source_name, lineno, "sigma", "image out of range: " + tok[i]);
        cur.datum.sigma.push_back(static_cast<int>(v));
      }
    } else if (key == "res_degree") {
      if (tok.size() != 2) fail(source_name, lineno, "res_degree", "expected one integer");
      cur.datum.res_degree =
          static_cast<int>(parse_long(source_name, lineno, "res_degree", tok[1]));
    } else if (key == "q") {
      if (tok.size() != 2) fail(source_name, lineno, "q", "expected one integer");
      cur.datum.q = parse_long(source_name, lineno, "q", tok[1]);
    } else if (key == "genus") {
      if (tok.size() != 2) fail(source_name, lineno, "genus", "expected one integer");
      cur.datum.genus = static_cast<int>(parse_long(source_name, lineno, "genus", tok[1]));
    } else if (key == "numerator") {
      cur.datum.zeta_numerator.clear();
      for (size_t i = 1; i < tok.size(); ++i)
        cur.datum.zeta_numerator.push_back(
            parse_rational(source_name, lineno, "numerator", tok[i]));
    } else if (key == "suites") {
      cur.suites.clear();
      for (size_t i = 1; i < tok.size(); ++i) {
        std::istringstream parts(tok[i]);
        std::string one;
        while (std::getline(parts, one, ',')) {
          if (one.empty()) continue;
          if (!known_suites().count(one))
            fail(source_name, lineno, "suites", "unknown suite '" + one + "'");
          cur.suites.insert(one);
        }
      }
      if (cur.suites.empty()) fail(source_name, lineno, "suites", "no suite names given");
    } else if (key == "end") {
      if (!have_series || !have_rank)
        fail(source_name, lineno, "end", "entry '" + cur.name + "' missing series or rank");
      if (!cur.datum.sigma.empty()) {
        // Automorphism must preserve the Cartan matrix; name the first
        // violated pair.
        auto c = rootsys::cartan_matrix(cur.datum.series, cur.datum.rank);
        std::vector<char> seen(cur.datum.rank, 0);
        for (int v : cur.datum.sigma) seen[v] = 1;
        for (int i = 0; i < cur.datum.rank; ++i)
          if (!seen[i]) fail(source_name, lineno, "sigma", "not a permutation (misses " +
                                                               std::to_string(i) + ")");
        for (int i = 0; i < cur.datum.rank; ++i) {
          for (int j = 0; j < cur.datum.rank; ++j) {
            if (c[cur.datum.sigma[i]][cur.datum.sigma[j]] != c[i][j])
              fail(source_name, lineno, "sigma",
                   "entry '" + cur.name +
                       "': automorphism does not preserve the Cartan matrix at pair (" +
                       std::to_string(i) + "," + std::to_string(j) + ")");
          }
        }
      }
      if (cur.suites.empty()) cur.suites = known_suites();
      try {
        cur.datum.validate();
      } catch (const std::exception& e) {
        fail(source_name, entry_line, "entry '" + cur.name + "'", e.what());
      }
      out.push_back(cur);
      in_entry = false;
    } else {
      fail(source_name, lineno, key, "unknown directive");
    }
  }
  if (in_entry)
    fail(source_name, lineno, "end", "unterminated entry '" + cur.name + "' at end of file");
  return out;
}

std::vector<CatalogEntry> parse_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open catalog file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_catalog_text(buf.str(), path);
}

std::string oracle_csv_header() { return "kind,q,s,depth,numeric,closed_form,abs_error"; }

std::string OracleRow::csv() const {
  std::ostringstream os;
  os << kind << "," << q << "," << fmt_double(s) << "," << depth << "," << fmt_double(numeric)
     << "," << fmt_double(closed_form) << "," << fmt_double(abs_error);
  return os.str();
}

EntryReport run_entry(const CatalogEntry& entry, const RunOptions& options) {
  EntryReport rep;
  rep.name = entry.name;
  auto datum = entry.datum;
  if (options.q_override > 0) datum.q = options.q_override;
  CatalogEntry effective{entry.name, datum, entry.suites};
  rep.descriptor = effective.descriptor_line();
  datum.validate();
  auto ctx = TwistContext::build(datum);

  std::set<std::string> wanted = entry.suites;
  if (!options.suites.empty()) {
    std::set<std::string> both;
    for (const auto& s : options.suites)
      if (wanted.count(s)) both.insert(s);
    wanted = both;
  }

  rep.pass = true;
  for (const char* suite : {"local", "global", "poles", "chain", "oracle", "convexity"}) {
    if (!wanted.count(suite)) continue;
    SuiteReport sr;
    if (std::string(suite) == "local")
      sr = run_local_suite(ctx);
    else if (std::string(suite) == "global")
      sr = run_global_suite(ctx, options);
    else if (std::string(suite) == "poles")
      sr = run_poles_suite(ctx);
    else if (std::string(suite) == "chain")
      sr = run_chain_suite(ctx);
    else if (std::string(suite) == "oracle")
      sr = run_oracle_suite(ctx, options, rep.oracle_rows);
    else
      sr = run_convexity_suite(ctx);
    rep.pass = rep.pass && sr.pass;
    rep.suites.push_back(std::move(sr));
  }
  return rep;
}

std::string EntryReport::to_text() const {
  std::ostringstream os;
  os << "entry: " << name << "\n";
  os << "descriptor: " << descriptor << "\n";
  for (const auto& s : suites) {
    os << "suite " << s.suite << ": " << (s.pass ? "PASS" : "FAIL") << "\n";
    os << s.text;
  }
  os << "overall: " << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

CatalogReport run_catalog(const std::vector<CatalogEntry>& entries, const RunOptions& options) {
  CatalogReport rep;
  rep.exit_ok = true;
  std::vector<CatalogEntry> selected;
  for (const auto& e : entries)
    if (options.entry_filter.empty() || e.name == options.entry_filter) selected.push_back(e);
  std::sort(selected.begin(), selected.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
  for (const auto& e : selected) {
    rep.entries.push_back(run_entry(e, options));
    rep.exit_ok = rep.exit_ok && rep.entries.back().pass;
  }
  return rep;
}

}  // namespace qsw::catalog
