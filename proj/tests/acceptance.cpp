// Acceptance gate: ten pass/fail criteria covering the exact rank-one closed
// forms, the lattice-model oracles, pole bookkeeping across the catalog, the
// cocycle law, restriction substitution, Euler-product truncation, the
// spherical-majorant convexity bounds, brute-force point counts, and the
// Tamagawa cancellation chain.  Usage: acceptance <catalog-file>.  Exit code
// is the number of failed criteria.
#include "qsw/catalog.hpp"
#include "qsw/intertwine.hpp"
#include "qsw/localfield.hpp"
#include "qsw/tamagawa.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace qsw;
using galois_form::QuasiSplitDatum;
using galois_form::TwistContext;
using intertwine::FactorProduct;
using ratfun::Zeta;
using rootsys::Series;

namespace {

RatVec ones(int r) { return RatVec(r, Rational(1)); }

FactorProduct sl2_local_closed() {
  FactorProduct fp = FactorProduct::one();
  fp.mul_atom(Zeta::one(), Rational(-1), Rational(1), +1);
  fp.mul_atom(Zeta::one(), Rational(0), Rational(1), -1);
  return fp;
}

FactorProduct su3_local_closed() {
  FactorProduct fp = FactorProduct::one();
  fp.mul_atom(Zeta::one(), Rational(-2), Rational(2), +1);
  fp.mul_atom(Zeta::minus_one(), Rational(-1), Rational(2), +1);
  fp.mul_atom(Zeta::one(), Rational(0), Rational(2), -1);
  fp.mul_atom(Zeta::minus_one(), Rational(0), Rational(2), -1);
  return fp;
}

struct Gate {
  std::vector<catalog::CatalogEntry> entries;
  int failures = 0;
  int index = 0;

  void run(const std::string& label, double budget_s,
           const std::function<bool(std::ostream&)>& fn) {
    ++index;
    std::ostringstream detail;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail << "    exception: " << e.what() << "\n";
      ok = false;
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > budget_s) {
      detail << "    time budget exceeded: " << dt << " s > " << budget_s << " s\n";
      ok = false;
    }
    if (!ok) ++failures;
    std::printf("[%2d] %s  %-68s (%.3f s / budget %.0f s)\n", index, ok ? "PASS" : "FAIL",
                label.c_str(), dt, budget_s);
    if (!ok) std::cout << detail.str();
  }
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <catalog-file>\n";
    return 120;
  }
  Gate gate;
  try {
    gate.entries = catalog::parse_catalog_file(argv[1]);
  } catch (const std::exception& e) {
    std::cerr << "catalog parse failed: " << e.what() << "\n";
    return 120;
  }
  const auto& entries = gate.entries;
  std::cout << "acceptance gate: " << entries.size() << " catalog entries, 10 criteria\n";

  // 1. Rank-one local factors equal the closed forms as exact rational
  //    functions in (q, u).
  gate.run("rank-one local factors: exact closed forms", 1.0, [&](std::ostream& out) {
    auto a1 = TwistContext::build(QuasiSplitDatum{Series::A, 1, {}, 1, 5, 0, {}});
    auto a2t = TwistContext::build(QuasiSplitDatum{Series::A, 2, {1, 0}, 1, 5, 0, {}});
    FactorProduct got_sl2 =
        intertwine::local_factor(a1, rootsys::weyl_simple(a1.rel, 0), ones(1));
    FactorProduct got_su3 =
        intertwine::local_factor(a2t, rootsys::weyl_simple(a2t.rel, 0), ones(1));
    bool ok = true;
    if (!(got_sl2 == sl2_local_closed())) {
      out << "    split A1: " << got_sl2.to_string() << "\n";
      ok = false;
    }
    if (!(got_su3 == su3_local_closed())) {
      out << "    quasi-split 2A2: " << got_su3.to_string() << "\n";
      ok = false;
    }
    return ok;
  });

  // 2. Lattice-model shell integrals against the closed forms.
  gate.run("lattice-model oracles: SL2(q=3) within 1e-6, SU3(q=3) within 1e-4", 60.0,
           [&](std::ostream& out) {
             double sl2 = shell_integral(LocalKind::SL2, 3, 2.0, 20);
             double sl2_closed = 13.0 / 12.0;
             double e1 = std::abs(sl2 - sl2_closed);
             double su3 = shell_integral(LocalKind::SU3, 3, 2.0, 8);
             double y = std::pow(3.0, -4.0);
             double su3_closed = ((1.0 - y / 9.0) * (1.0 + y / 3.0)) / ((1.0 - y) * (1.0 + y));
             double e2 = std::abs(su3 - su3_closed);
             out << "    SL2: |" << sl2 << " - " << sl2_closed << "| = " << e1 << "\n";
             out << "    SU3: |" << su3 << " - " << su3_closed << "| = " << e2 << "\n";
             return e1 < 1e-6 && e2 < 1e-4;
           });

  // 3. Pole bookkeeping across the whole catalog: order -r at s = 1 on the
  //    principal ray and a simple pole on every wall z_a = 1.
  gate.run("catalog poles: order -rank at s=1, each wall exactly simple", 30.0,
           [&](std::ostream& out) {
             if (entries.size() < 14) {
               out << "    catalog too small: " << entries.size() << " entries\n";
               return false;
             }
             bool ok = true;
             for (const auto& e : entries) {
               auto ctx = TwistContext::build(e.datum);
               auto pr = intertwine::pole_report(ctx);
               bool entry_ok = pr.total_order == -pr.relative_rank;
               for (long o : pr.simple_pole_orders) entry_ok = entry_ok && o == 1;
               for (long o : pr.other_orders) entry_ok = entry_ok && o == 0;
               if (!entry_ok) {
                 out << "    " << e.name << ": total " << pr.total_order << ", rank "
                     << pr.relative_rank << "\n";
                 ok = false;
               }
             }
             return ok;
           });

  // 4. Exact cocycle multiplicativity along a reduced decomposition of every
  //    restricted Weyl element, at 5 random rational parameters.
  gate.run("cocycle law: every Weyl element, 5 random rational parameters", 30.0,
           [&](std::ostream& out) {
             std::mt19937 rng(20250825);
             std::uniform_int_distribution<int> pick(1, 9);
             bool ok = true;
             for (const auto& e : entries) {
               auto ctx = TwistContext::build(e.datum);
               if (ctx.rel_rank > 3) continue;
               auto wall = rootsys::enumerate_weyl(ctx.rel);
               for (int trial = 0; trial < 5; ++trial) {
                 RatVec z(ctx.rel_rank);
                 for (auto& c : z) c = Rational(pick(rng), pick(rng));
                 for (const auto& w : wall) {
                   auto word = rootsys::reduced_word(ctx.rel, w);
                   FactorProduct acc = FactorProduct::one();
                   RatVec zz = z;
                   for (size_t i = word.size(); i-- > 0;) {
                     auto s = rootsys::weyl_simple(ctx.rel, word[i]);
                     acc.multiply(intertwine::global_intertwiner(ctx, s, zz));
                     zz = ctx.z_action(s, zz);
                   }
                   if (!(acc == intertwine::global_intertwiner(ctx, w, z))) {
                     out << "    " << e.name << ": mismatch at word length " << word.size()
                         << "\n";
                     ok = false;
                   }
                 }
               }
             }
             return ok;
           });

  // 5. Restriction along a constant extension of degree n acts as the exact
  //    substitution (q, u) -> (q^n, u^n) on the rank-one global operator.
  gate.run("restriction of SL2: exact substitution (q,u) -> (q^n,u^n), n = 2, 3", 5.0,
           [&](std::ostream& out) {
             auto base = TwistContext::build(QuasiSplitDatum{Series::A, 1, {}, 1, 5, 0, {}});
             FactorProduct base_m = intertwine::global_intertwiner(
                 base, rootsys::longest_element(base.rel), ones(1));
             bool ok = true;
             for (int n : {2, 3}) {
               auto res = TwistContext::build(QuasiSplitDatum{Series::A, 1, {}, n, 5, 0, {}});
               FactorProduct res_m = intertwine::global_intertwiner(
                   res, rootsys::longest_element(res.rel), ones(res.rel_rank));
               if (!(res_m == base_m.substitute_power(n))) {
                 out << "    n = " << n << ": " << res_m.to_string() << " vs "
                     << base_m.substitute_power(n).to_string() << "\n";
                 ok = false;
               }
             }
             return ok;
           });

  // 6. Truncated Euler product (closed points of degree <= 12) against the
  //    closed form at s = 2 for every catalog entry.
  gate.run("Euler truncation at degree 12 vs closed form, every entry, 1e-8", 120.0,
           [&](std::ostream& out) {
             bool ok = true;
             for (const auto& e : entries) {
               auto ctx = TwistContext::build(e.datum);
               auto w0 = rootsys::longest_element(ctx.rel);
               RatVec z = ones(ctx.rel_rank);
               double tr = intertwine::euler_truncated(ctx, w0, z, 2.0, 12);
               double cf = intertwine::global_intertwiner(ctx, w0, z)
                               .evaluate(2.0, static_cast<double>(ctx.datum.q))
                               .real();
               double err = std::abs(tr - cf);
               if (!(err < 1e-8)) {
                 out << "    " << e.name << ": error " << err << "\n";
                 ok = false;
               }
             }
             return ok;
           });

  // 7. The parameter embedding sends (1,...,1) to rho exactly.
  gate.run("parameter embedding: xi(1,...,1) = rho exactly, every entry", 5.0,
           [&](std::ostream& out) {
             bool ok = true;
             for (const auto& e : entries) {
               auto ctx = TwistContext::build(e.datum);
               if (!(ctx.xi(ones(ctx.rel_rank)) == ctx.work.rho_fund())) {
                 out << "    " << e.name << ": xi(1,...,1) != rho\n";
                 ok = false;
               }
             }
             return ok;
           });

  // 8. Spherical majorant: strictly below the endpoint for 100 sampled
  //    parameters in the half-open box, and every box vertex lies in the
  //    Weyl-orbit hull (exact arithmetic throughout).
  gate.run("majorant strictly maximal at rho (100 samples) + hull vertices", 60.0,
           [&](std::ostream& out) {
             std::mt19937 rng(991);
             std::uniform_int_distribution<int> pick(1, 8);
             bool ok = true;
             for (const auto& e : entries) {
               auto ctx = TwistContext::build(e.datum);
               int r = ctx.rel_rank;
               if (r > 3) continue;
               for (int mask = 0; mask < (1 << r); ++mask) {
                 RatVec v(r);
                 for (int i = 0; i < r; ++i)
                   v[i] = (mask >> i) & 1 ? Rational(1) : Rational(1, 2);
                 if (!intertwine::convex_hull_member(ctx, v)) {
                   out << "    " << e.name << ": box vertex outside hull\n";
                   ok = false;
                 }
               }
               int done = 0;
               while (done < 100) {
                 RatVec sigma(r);
                 bool is_rho = true;
                 for (int i = 0; i < r; ++i) {
                   sigma[i] = Rational(8 + pick(rng), 16);
                   if (sigma[i] != 1) is_rho = false;
                 }
                 if (is_rho) continue;
                 ++done;
                 if (!intertwine::hecke_strictly_less(ctx, sigma)) {
                   out << "    " << e.name << ": majorant not strictly below at sample "
                       << done << "\n";
                   ok = false;
                   break;
                 }
               }
             }
             return ok;
           });

  // 9. Brute-force point counts of the rank-one groups.
  gate.run("point counts: |SL2(F_q)| = q(q^2-1), SU3 frames = q^3(q^2-1)(q^3+1)", 60.0,
           [&](std::ostream& out) {
             bool ok = true;
             for (int q : {3, 5}) {
               long long got = count_points(LocalKind::SL2, q);
               long long want = static_cast<long long>(q) * (q * q - 1);
               if (got != want) {
                 out << "    SL2 q=" << q << ": " << got << " != " << want << "\n";
                 ok = false;
               }
             }
             long long got = count_points(LocalKind::SU3, 3);
             long long want = 27LL * 8LL * 28LL;
             if (got != want) {
               out << "    SU3 q=3: " << got << " != " << want << "\n";
               ok = false;
             }
             return ok;
           });

  // 10. The cancellation chain certifies tau(G) = 1 for every entry with an
  //     all-zero exponent ledger and the single torus axiom.
  gate.run("Tamagawa chain: certified, zero ledger, one axiom, every entry", 5.0,
           [&](std::ostream& out) {
             bool ok = true;
             for (const auto& e : entries) {
               auto ctx = TwistContext::build(e.datum);
               auto pr = intertwine::pole_report(ctx);
               auto chain = tamagawa::tau_chain(e.datum, -pr.total_order);
               bool entry_ok = chain.certified && chain.tau_value == Rational(1) &&
                               chain.assumptions.size() == 1;
               for (int i = 0; i < 5; ++i) entry_ok = entry_ok && chain.ledger[i] == 0;
               entry_ok = entry_ok && chain.ledger[5] == 1;
               if (!entry_ok) {
                 out << "    " << e.name << ": not certified\n";
                 ok = false;
               }
             }
             return ok;
           });

  std::cout << "acceptance gate: " << (10 - gate.failures) << "/10 criteria pass\n";
  return gate.failures;
}
