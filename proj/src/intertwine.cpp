#include "qsw/intertwine.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qsw::intertwine {

using galois_form::RankOneClass;
using ratfun::Zeta;
using rootsys::RootSystem;

namespace {

RatVec unit_vec(int r, int a) {
  RatVec e(r, Rational(0));
  e[a] = 1;
  return e;
}

RatVec ones_vec(int r) { return RatVec(r, Rational(1)); }

/// Multiply fp by the global contribution of one orbit, with the pairing
/// value overridden by c: the ratio of twisted constant-extension zeta
/// values L(c s) / L(c s + 1), expanded in u = q^{-s}:
///   P_k(u^{kc}) (1 - eps q^{-k} u^{kc})  /  [ P_k(q^{-k} u^{kc}) (1 - eps q^k u^{kc}) ]
/// where P_k is the norm transform of the curve numerator (trivial in genus 0)
/// and the factors (1 - eps u^{kc}) shared by the two zeta values cancel.
void mul_orbit_global(FactorProduct& fp, const TwistContext& ctx, const DualOrbit& orb,
                      const Rational& c) {
  long k = orb.size;
  Zeta eps = orb.eps > 0 ? Zeta::one() : Zeta::minus_one();
  Rational b = Rational(k) * c;
  const auto& numer = ctx.datum.zeta_numerator;
  if (numer.size() > 1) {
    auto pk = ratfun::poly_norm_transform(numer, static_cast<int>(k), orb.eps);
    fp.mul_poly(pk, Rational(0), b, +1);
    fp.mul_poly(pk, Rational(-k), b, -1);
  }
  fp.mul_atom(eps, Rational(-k), b, +1);
  fp.mul_atom(eps, Rational(k), b, -1);
}

int mobius(int n) {
  int m = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    m = -m;
  }
  if (n > 1) m = -m;
  return m;
}

}  // namespace

WeylElement lift_relative_simple(const TwistContext& ctx, int a) {
  if (a < 0 || a >= ctx.rel_rank) throw std::out_of_range("lift_relative_simple: bad index");
  std::vector<int> mem = ctx.orbit_members.at(a);
  std::sort(mem.begin(), mem.end());
  std::vector<int> word;
  if (ctx.rank_one.at(a).kind == RankOneClass::Kind::SL2) {
    word = mem;
  } else {
    // Orbit is a disjoint union of adjacent pairs; each pair {i, j} spans a
    // rank-two subsystem whose longest element is s_i s_j s_i.
    std::vector<char> used(mem.size(), 0);
    for (size_t t = 0; t < mem.size(); ++t) {
      if (used[t]) continue;
      int i = mem[t];
      int partner = -1;
      for (size_t s = t + 1; s < mem.size(); ++s) {
        if (used[s] || ctx.work.cartan[i][mem[s]] == 0) continue;
        if (partner != -1) throw std::logic_error("lift_relative_simple: ambiguous pairing");
        partner = static_cast<int>(s);
      }
      if (partner == -1) throw std::logic_error("lift_relative_simple: unpaired member");
      used[t] = used[partner] = 1;
      word.push_back(i);
      word.push_back(mem[partner]);
      word.push_back(i);
    }
  }
  return rootsys::weyl_from_word(ctx.work, word);
}

WeylElement lift_relative(const TwistContext& ctx, const WeylElement& w_rel) {
  auto rword = rootsys::reduced_word(ctx.rel, w_rel);
  WeylElement out = rootsys::weyl_identity(ctx.work);
  for (int a : rword) out = rootsys::weyl_compose(ctx.work, out, lift_relative_simple(ctx, a));
  return out;
}

std::vector<DualOrbit> dual_orbits(const TwistContext& ctx, const WeylElement& w_rel,
                                   const RatVec& z, int frob_power) {
  if (frob_power < 1) throw std::invalid_argument("dual_orbits: frob_power must be positive");
  if (static_cast<int>(z.size()) != ctx.rel_rank)
    throw std::invalid_argument("dual_orbits: z has wrong length");
  auto lifted = lift_relative(ctx, w_rel);
  auto inv = rootsys::inversion_set(ctx.work, lifted);
  std::sort(inv.begin(), inv.end());
  std::set<int> inset(inv.begin(), inv.end());
  auto step = [&](int j) {
    int x = j;
    for (int t = 0; t < frob_power; ++t) x = ctx.phi_workpos[x];
    return x;
  };

  std::vector<DualOrbit> out;
  std::set<int> seen;
  for (int j : inv) {
    if (seen.count(j)) continue;
    DualOrbit orb;
    int x = j;
    int eps = +1;
    do {
      orb.members.push_back(x);
      seen.insert(x);
      int dx = ctx.dual_of_work[x];
      eps *= ctx.dual_signs.power_sign(dx, frob_power);
      int nx = step(x);
      if (ctx.dual_signs.power_image(dx, frob_power) != ctx.dual_of_work[nx])
        throw std::logic_error("dual_orbits: dual table inconsistent with phi power");
      if (!inset.count(nx))
        throw std::logic_error("dual_orbits: inversion set not Frobenius-stable");
      x = nx;
    } while (x != j);
    orb.size = static_cast<int>(orb.members.size());
    orb.eps = eps;
    orb.form.assign(ctx.rel_rank, 0);
    for (int a = 0; a < ctx.rel_rank; ++a) {
      Rational fa = ctx.pairing(unit_vec(ctx.rel_rank, a), j);
      if (!is_integer(fa)) throw std::logic_error("dual_orbits: non-integral pairing form");
      orb.form[a] = to_long(fa);
    }
    for (int m : orb.members) {
      for (int a = 0; a < ctx.rel_rank; ++a) {
        if (ctx.pairing(unit_vec(ctx.rel_rank, a), m) != Rational(orb.form[a]))
          throw std::logic_error("dual_orbits: pairing form not constant on orbit");
      }
    }
    orb.c = ctx.pairing(z, j);
    out.push_back(std::move(orb));
  }
  return out;
}

FactorProduct local_factor(const TwistContext& ctx, const WeylElement& w_rel, const RatVec& z,
                           int place_degree) {
  if (place_degree < 1) throw std::invalid_argument("local_factor: place_degree must be positive");
  long m = place_degree;
  FactorProduct fp = FactorProduct::one();
  for (const auto& orb : dual_orbits(ctx, w_rel, z, place_degree)) {
    long k = orb.size;
    Zeta eps = orb.eps > 0 ? Zeta::one() : Zeta::minus_one();
    Rational b = Rational(m) * Rational(k) * orb.c;
    fp.mul_atom(eps, Rational(-m * k), b, +1);
    fp.mul_atom(eps, Rational(0), b, -1);
  }
  return fp;
}

FactorProduct global_intertwiner(const TwistContext& ctx, const WeylElement& w_rel,
                                 const RatVec& z) {
  FactorProduct fp = FactorProduct::one();
  for (const auto& orb : dual_orbits(ctx, w_rel, z, 1)) mul_orbit_global(fp, ctx, orb, orb.c);
  return fp;
}

std::vector<std::pair<WeylElement, FactorProduct>> constant_term(const TwistContext& ctx,
                                                                 const RatVec& z) {
  std::vector<std::pair<WeylElement, FactorProduct>> out;
  for (const auto& w : rootsys::enumerate_weyl(ctx.rel))
    out.emplace_back(w, global_intertwiner(ctx, w, z));
  return out;
}

double euler_truncated(const TwistContext& ctx, const WeylElement& w_rel, const RatVec& z,
                       double s, int max_degree) {
  if (ctx.datum.genus != 0)
    throw std::invalid_argument("euler_truncated: only genus-0 data supported");
  if (max_degree < 1) throw std::invalid_argument("euler_truncated: bad truncation degree");
  long q = ctx.datum.q;
  double total = 1.0;
  for (int m = 1; m <= max_degree; ++m) {
    // Closed points of degree m on the projective line:
    // (1/m) sum_{d | m} mu(d) N_{m/d} with N_j = q^j + 1.
    Int acc = 0;
    for (int d = 1; d <= m; ++d) {
      if (m % d) continue;
      acc += Int(mobius(d)) * (ipow(Int(q), static_cast<unsigned>(m / d)) + 1);
    }
    if (acc % m != 0) throw std::logic_error("euler_truncated: point count not integral");
    double count = to_double(Rational(acc, m));
    double local = 1.0;
    for (const auto& orb : dual_orbits(ctx, w_rel, z, m)) {
      double k = orb.size;
      double c = to_double(orb.c);
      double e = static_cast<double>(orb.eps);
      double qm = static_cast<double>(m) * std::log(static_cast<double>(q));
      double denom = 1.0 - e * std::exp(-qm * (k * c * s));
      double numer = 1.0 - e * std::exp(-qm * (k + k * c * s));
      if (denom == 0.0) throw std::domain_error("euler_truncated: singular local factor");
      local *= numer / denom;
    }
    total *= std::pow(local, count);
  }
  return total;
}

PoleReport pole_report(const TwistContext& ctx) {
  PoleReport rep;
  rep.relative_rank = ctx.rel_rank;
  Rational q(ctx.datum.q);
  RatVec ones = ones_vec(ctx.rel_rank);
  WeylElement w0 = rootsys::longest_element(ctx.rel);

  FactorProduct m = global_intertwiner(ctx, w0, ones);
  rep.total_order = m.order_at_s1(q);

  rep.simple_pole_orders.assign(ctx.rel_rank, 0);
  for (const auto& orb : dual_orbits(ctx, w0, ones, 1)) {
    int simple = -1;
    long weight = 0;
    for (int a = 0; a < ctx.rel_rank; ++a) {
      if (orb.form[a] == 0) continue;
      weight += orb.form[a];
      simple = a;
    }
    bool is_simple_wall = (weight == 1);  // form == e_a exactly
    if (is_simple_wall) {
      // Order along the wall z_a = 1: restrict the factor to unit speed in
      // the wall coordinate (pairing value 1) and read the order at s = 1.
      FactorProduct unit = FactorProduct::one();
      mul_orbit_global(unit, ctx, orb, Rational(1));
      rep.simple_pole_orders[simple] += -unit.order_at_s1(q);
    } else {
      FactorProduct own = FactorProduct::one();
      mul_orbit_global(own, ctx, orb, orb.c);
      rep.other_orders.push_back(own.order_at_s1(q));
    }
  }

  if (ctx.datum.genus == 0) {
    rep.interval_checked = true;
    rep.regular_right_of_one = true;
    for (const auto& s0 : m.zero_pole_svalues()) {
      if (s0 > 1 && s0 <= Rational(5, 4)) rep.regular_right_of_one = false;
    }
  }
  return rep;
}

std::vector<Rational> hecke_exponents(const TwistContext& ctx, const RatVec& sigma_z) {
  if (static_cast<int>(sigma_z.size()) != ctx.rel_rank)
    throw std::invalid_argument("hecke_exponents: sigma has wrong length");
  RatVec rho_root = ctx.work.fund_to_root(ctx.xi(ones_vec(ctx.rel_rank)));
  std::vector<Rational> out;
  for (const auto& w : rootsys::enumerate_weyl(ctx.rel)) {
    RatVec moved = ctx.xi(ctx.z_action(w, sigma_z));
    out.push_back(ctx.work.form(rho_root, ctx.work.fund_to_root(moved)));
  }
  return out;
}

bool hecke_strictly_less(const TwistContext& ctx, const RatVec& sigma_z, int v0_degree) {
  if (v0_degree < 1) throw std::invalid_argument("hecke_strictly_less: bad place degree");
  long p = 0;
  int e = 0;
  if (!galois_form::is_prime_power(ctx.datum.q, &p, &e))
    throw std::invalid_argument("hecke_strictly_less: q is not a prime power");
  long scale = static_cast<long>(e) * v0_degree;
  auto scaled = [&](const RatVec& zv) {
    std::vector<Rational> exps;
    for (const auto& t : hecke_exponents(ctx, zv)) exps.push_back(Rational(-scale) * t);
    return exps;
  };
  return power_sum_compare(p, scaled(sigma_z), scaled(ones_vec(ctx.rel_rank))) < 0;
}

int power_sum_compare(long p, const std::vector<Rational>& ea, const std::vector<Rational>& eb) {
  if (p < 2) throw std::invalid_argument("power_sum_compare: p must be at least 2");
  Int dcm = 1;
  for (const auto& x : ea) dcm = boost::multiprecision::lcm(dcm, den(x));
  for (const auto& x : eb) dcm = boost::multiprecision::lcm(dcm, den(x));
  long d = to_long(dcm);

  std::vector<Int> na, nb;
  Int lo_exp = 0;
  bool first = true;
  auto scale_all = [&](const std::vector<Rational>& src, std::vector<Int>& dst) {
    for (const auto& x : src) {
      Rational t = x * d;
      dst.push_back(num(t));
      if (first || dst.back() < lo_exp) lo_exp = dst.back();
      first = false;
    }
  };
  scale_all(ea, na);
  scale_all(eb, nb);
  if (na.empty() && nb.empty()) return 0;

  // Difference as an integer polynomial in x = p^{1/d} (exponents shifted
  // to be nonnegative), folded through the minimal polynomial x^d - p.
  std::vector<Rational> coeff(static_cast<size_t>(d), Rational(0));
  auto fold = [&](const std::vector<Int>& exps, int sgn) {
    for (const auto& n : exps) {
      Int t = n - lo_exp;
      Int quo = t / d;
      Int rem_i = t % d;
      long rem = to_long(rem_i);
      coeff[static_cast<size_t>(rem)] +=
          Rational(sgn) * Rational(ipow(Int(p), static_cast<unsigned>(to_long(quo))));
    }
  };
  fold(na, +1);
  fold(nb, -1);

  bool all_zero = std::all_of(coeff.begin(), coeff.end(), [](const Rational& c) { return c == 0; });
  if (all_zero) return 0;
  if (d == 1) {
    Rational v = coeff[0];
    return v > 0 ? +1 : -1;
  }

  // Interval bisection on x0 = p^{1/d} in (1, p); the fold above guarantees
  // the polynomial is nonzero at x0, so the sign eventually resolves.
  Rational lo = 1, hi = p;
  for (int iter = 0; iter < 300; ++iter) {
    Rational fmin = 0, fmax = 0;
    Rational lp = 1, hp = 1;
    for (long r = 0; r < d; ++r) {
      const Rational& c = coeff[static_cast<size_t>(r)];
      if (c > 0) {
        fmin += c * lp;
        fmax += c * hp;
      } else if (c < 0) {
        fmin += c * hp;
        fmax += c * lp;
      }
      lp *= lo;
      hp *= hi;
    }
    if (fmin > 0) return +1;
    if (fmax < 0) return -1;
    Rational mid = (lo + hi) / 2;
    Rational mp = rpow(mid, d);
    if (mp == p) {
      // x0 happens to be rational: evaluate exactly.
      Rational v = 0, xp = 1;
      for (long r = 0; r < d; ++r) {
        v += coeff[static_cast<size_t>(r)] * xp;
        xp *= mid;
      }
      if (v == 0) return 0;
      return v > 0 ? +1 : -1;
    }
    if (mp < p)
      lo = mid;
    else
      hi = mid;
  }
  throw std::runtime_error("power_sum_compare: interval bisection did not resolve");
}

bool convex_hull_member(const TwistContext& ctx, const RatVec& sigma_z) {
  int r = ctx.rel_rank;
  if (static_cast<int>(sigma_z.size()) != r)
    throw std::invalid_argument("convex_hull_member: sigma has wrong length");

  std::set<RatVec> vertex_set;
  for (const auto& w : rootsys::enumerate_weyl(ctx.rel))
    vertex_set.insert(ctx.z_action(w, ones_vec(r)));
  std::vector<RatVec> verts(vertex_set.begin(), vertex_set.end());
  int n = static_cast<int>(verts.size());
  int mrows = r + 1;

  // Phase-one simplex feasibility for  sum t_i v_i = sigma, sum t_i = 1,
  // t >= 0: minimise the sum of one artificial variable per row.
  std::vector<std::vector<Rational>> tab(mrows, std::vector<Rational>(n + mrows + 1, Rational(0)));
  for (int i = 0; i < mrows; ++i) {
    for (int j = 0; j < n; ++j) tab[i][j] = (i < r) ? verts[j][i] : Rational(1);
    tab[i][n + mrows] = (i < r) ? sigma_z[i] : Rational(1);
    if (tab[i][n + mrows] < 0)
      for (auto& v : tab[i]) v = -v;
    tab[i][n + i] = 1;
  }
  std::vector<int> basis(mrows);
  for (int i = 0; i < mrows; ++i) basis[i] = n + i;

  // Objective row z_j - c_j for minimising the artificial sum (costs are 1
  // on the artificial columns, 0 elsewhere).
  std::vector<Rational> obj(n + mrows + 1, Rational(0));
  for (int i = 0; i < mrows; ++i)
    for (int j = 0; j <= n + mrows; ++j) obj[j] += tab[i][j];
  for (int i = 0; i < mrows; ++i) obj[n + i] -= 1;

  bool optimal = false;
  for (int guard = 0; guard < 100000 && !optimal; ++guard) {
    int enter = -1;
    for (int j = 0; j < n + mrows; ++j) {
      if (obj[j] > 0) {  // Bland's rule: first improving column
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      optimal = true;
      break;
    }
    int leave = -1;
    Rational best = 0;
    for (int i = 0; i < mrows; ++i) {
      if (tab[i][enter] <= 0) continue;
      Rational ratio = tab[i][n + mrows] / tab[i][enter];
      if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) throw std::logic_error("convex_hull_member: unbounded phase-one problem");
    Rational piv = tab[leave][enter];
    for (auto& v : tab[leave]) v /= piv;
    for (int i = 0; i < mrows; ++i) {
      if (i == leave || tab[i][enter] == 0) continue;
      Rational f = tab[i][enter];
      for (int j = 0; j <= n + mrows; ++j) tab[i][j] -= f * tab[leave][j];
    }
    Rational fo = obj[enter];
    if (fo != 0)
      for (int j = 0; j <= n + mrows; ++j) obj[j] -= fo * tab[leave][j];
    basis[leave] = enter;
  }
  if (!optimal) throw std::logic_error("convex_hull_member: simplex iteration limit");
  return obj[n + mrows] == 0;
}

}  // namespace qsw::intertwine
