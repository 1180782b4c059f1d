#include "qsw/galois_form.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace qsw::galois_form {

bool is_prime_power(long q, long* prime, int* exponent) {
  if (q < 2) return false;
  long p = 0;
  for (long d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;  // q itself prime
  long v = q;
  int e = 0;
  while (v % p == 0) {
    v /= p;
    ++e;
  }
  if (v != 1) return false;
  if (prime) *prime = p;
  if (exponent) *exponent = e;
  return true;
}

std::vector<int> QuasiSplitDatum::sigma_or_identity() const {
  if (!sigma.empty()) return sigma;
  std::vector<int> id(rank);
  for (int i = 0; i < rank; ++i) id[i] = i;
  return id;
}

void QuasiSplitDatum::validate() const {
  IntMat c = rootsys::cartan_matrix(series, rank);  // throws on bad series/rank
  RootSystem abs = RootSystem::build(c);
  chevalley::validate_diagram_automorphism(abs, sigma_or_identity());
  if (res_degree < 1) throw std::invalid_argument("res_degree must be >= 1");
  if (res_degree > 8) throw std::invalid_argument("res_degree larger than 8 is not supported");
  if (q < 3) throw std::invalid_argument("constant field must have at least 3 elements");
  if (!is_prime_power(q)) throw std::invalid_argument("q must be a prime power");
  if (genus < 0) throw std::invalid_argument("negative genus");
  if (genus == 0) {
    if (!(zeta_numerator.empty() || zeta_numerator == std::vector<Rational>{1}))
      throw std::invalid_argument("genus 0 requires a trivial zeta numerator");
    return;
  }
  const auto& p = zeta_numerator;
  if (p.size() != static_cast<size_t>(2 * genus + 1) || p.front() != 1)
    throw std::invalid_argument("zeta numerator must have degree 2*genus and constant term 1");
  // functional equation: c_{2g-i} = q^{g-i} c_i
  for (int i = 0; i <= 2 * genus; ++i) {
    Rational want = rpow(Rational(q), genus - i) * p[i];
    if (p[2 * genus - i] != want)
      throw std::invalid_argument("zeta numerator violates the functional equation");
  }
  if (ratfun::poly_eval(p, 1) <= 0)
    throw std::invalid_argument("zeta numerator must be positive at 1 (class number)");
  if (ratfun::poly_eval(p, Rational(1) / q) == 0)
    throw std::invalid_argument("zeta numerator vanishes at 1/q");
}

namespace {

IntMat block_cartan(const IntMat& c, int copies) {
  int r = static_cast<int>(c.size());
  IntMat out(r * copies, IntVec(r * copies, 0));
  for (int b = 0; b < copies; ++b)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) out[b * r + i][b * r + j] = c[i][j];
  return out;
}

IntMat transpose(const IntMat& c) {
  int n = static_cast<int>(c.size());
  IntMat t(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = c[j][i];
  return t;
}

}  // namespace

RatVec TwistContext::xi(const RatVec& z) const {
  if (static_cast<int>(z.size()) != rel_rank)
    throw std::invalid_argument("xi: expected one coordinate per restricted simple root");
  RatVec x(work.rank);
  for (int i = 0; i < work.rank; ++i) x[i] = z[simple_orbit[i]];
  return x;
}

Rational TwistContext::pairing(const RatVec& z, int j) const {
  Rational s = 0;
  const IntVec& cv = work.pos_coroot[j];
  for (int i = 0; i < work.rank; ++i)
    if (cv[i] != 0) s += z[simple_orbit[i]] * Rational(cv[i]);
  return s;
}

Rational TwistContext::class_pairing(const RatVec& z, const RelClass& cls) const {
  Rational first = pairing(z, cls.members.at(0));
  for (size_t t = 1; t < cls.members.size(); ++t)
    if (pairing(z, cls.members[t]) != first)
      throw std::logic_error("pairing is not constant on a restricted root class");
  return first;
}

RatVec TwistContext::z_action(const WeylElement& w, const RatVec& z) const {
  RatVec v = z;
  for (auto it = w.word.rbegin(); it != w.word.rend(); ++it) {
    int a = *it;
    Rational c = v[a];
    if (c == 0) continue;
    for (int k = 0; k < rel_rank; ++k) v[k] -= c * Rational(cartan_z[a][k]);
  }
  return v;
}

int TwistContext::phi_sign(int j) const { return dual_signs.sign_pos[dual_of_work[j]]; }

TwistContext TwistContext::build(const QuasiSplitDatum& qd) {
  qd.validate();
  TwistContext tc;
  tc.datum = qd;
  tc.abs = RootSystem::build(rootsys::cartan_matrix(qd.series, qd.rank));
  int r = qd.rank, n = qd.res_degree;
  std::vector<int> sigma0 = qd.sigma_or_identity();

  tc.work = (n == 1) ? tc.abs : RootSystem::build(block_cartan(tc.abs.cartan, n));
  tc.phi.resize(r * n);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < r; ++i)
      tc.phi[c * r + i] = (c + 1 < n) ? (c + 1) * r + i : sigma0[i];
  tc.phi_order = chevalley::automorphism_order(tc.phi);

  tc.work_dual = RootSystem::build(transpose(tc.work.cartan));
  tc.dual_signs = chevalley::pinned_signs(tc.work_dual, tc.phi);

  // Orbits of phi on the working simple roots.
  int wr = tc.work.rank;
  tc.simple_orbit.assign(wr, -1);
  for (int i = 0; i < wr; ++i) {
    if (tc.simple_orbit[i] >= 0) continue;
    int id = static_cast<int>(tc.orbit_members.size());
    tc.orbit_members.emplace_back();
    int j = i;
    while (tc.simple_orbit[j] < 0) {
      tc.simple_orbit[j] = id;
      tc.orbit_members[id].push_back(j);
      j = tc.phi[j];
    }
  }
  tc.rel_rank = static_cast<int>(tc.orbit_members.size());

  // phi on arbitrary working root vectors and on the positive root table.
  auto phi_vec = [&](const auto& x) {
    std::remove_cvref_t<decltype(x)> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[tc.phi[i]] = x[i];
    return y;
  };
  tc.phi_workpos.resize(tc.work.n_pos());
  for (int j = 0; j < tc.work.n_pos(); ++j) {
    auto [idx, neg] = tc.work.locate_root(phi_vec(tc.work.pos[j]));
    if (neg) throw std::logic_error("phi sent a positive root to a negative root");
    tc.phi_workpos[j] = idx;
  }

  // Coroots as positive roots of the dual system; phi commutes with duality.
  tc.dual_of_work.resize(tc.work.n_pos());
  for (int j = 0; j < tc.work.n_pos(); ++j) {
    auto [idx, neg] = tc.work_dual.locate_root(tc.work.pos_coroot[j]);
    if (neg) throw std::logic_error("coroot is not a positive dual root");
    tc.dual_of_work[j] = idx;
  }
  for (int j = 0; j < tc.work.n_pos(); ++j)
    if (tc.dual_of_work[tc.phi_workpos[j]] != tc.dual_signs.sigma_pos[tc.dual_of_work[j]])
      throw std::logic_error("phi action disagrees between the system and its dual");

  // Restricted root classes: group positive roots by orbit average.
  std::map<RatVec, std::vector<int>> by_proj;
  for (int j = 0; j < tc.work.n_pos(); ++j) {
    RatVec acc(wr, 0);
    IntVec cur = tc.work.pos[j];
    for (int t = 0; t < tc.phi_order; ++t) {
      for (int i = 0; i < wr; ++i) acc[i] += Rational(cur[i]);
      cur = phi_vec(cur);
    }
    for (auto& v : acc) v /= tc.phi_order;
    by_proj[acc].push_back(j);
  }

  // Restricted simple roots and their Cartan matrix.
  std::vector<RatVec> beta(tc.rel_rank);
  for (int a = 0; a < tc.rel_rank; ++a) {
    RatVec b(wr, 0);
    for (int i : tc.orbit_members[a]) b[i] = Rational(1, static_cast<long>(tc.orbit_members[a].size()));
    beta[a] = b;
  }
  tc.cartan_rel.assign(tc.rel_rank, IntVec(tc.rel_rank, 0));
  for (int a = 0; a < tc.rel_rank; ++a)
    for (int b = 0; b < tc.rel_rank; ++b) {
      Rational v = 2 * tc.work.form(beta[a], beta[b]) / tc.work.form(beta[b], beta[b]);
      if (!is_integer(v)) throw std::logic_error("restricted Cartan pairing is not integral");
      tc.cartan_rel[a][b] = to_long(v);
    }
  tc.rel = RootSystem::build(tc.cartan_rel);

  // z-coordinate reflection matrix: with j_k any simple in orbit k,
  //   cartan_z[a][k] = m_a <beta_a, alpha_{j_k}^vee>,  m_a = 2 / <beta_a, alpha_{j_a}^vee>.
  auto beta_pairing = [&](int a, int j) {
    Rational s = 0;
    for (int i = 0; i < wr; ++i)
      if (beta[a][i] != 0) s += beta[a][i] * Rational(tc.work.cartan[i][j]);
    return s;
  };
  tc.cartan_z.assign(tc.rel_rank, IntVec(tc.rel_rank, 0));
  for (int a = 0; a < tc.rel_rank; ++a) {
    Rational ma = 2 / beta_pairing(a, tc.orbit_members[a][0]);
    for (int k = 0; k < tc.rel_rank; ++k) {
      Rational first = beta_pairing(a, tc.orbit_members[k][0]);
      for (int j : tc.orbit_members[k])
        if (beta_pairing(a, j) != first)
          throw std::logic_error("projection pairing varies inside a simple orbit");
      Rational v = ma * first;
      if (!is_integer(v)) throw std::logic_error("z-reflection matrix is not integral");
      tc.cartan_z[a][k] = to_long(v);
    }
    if (tc.cartan_z[a][a] != 2) throw std::logic_error("z-reflection matrix diagonal is not 2");
  }

  // Match restricted roots with projection classes.
  std::map<RatVec, int> class_index;
  for (const auto& [proj, members] : by_proj) {
    RelClass cls;
    cls.proj = proj;
    cls.members = members;
    class_index[proj] = static_cast<int>(tc.classes.size());
    tc.classes.push_back(cls);
  }
  tc.class_of_indiv.assign(tc.rel.n_pos(), -1);
  tc.double_of_indiv.assign(tc.rel.n_pos(), -1);
  std::vector<char> matched(tc.classes.size(), 0);
  for (int m = 0; m < tc.rel.n_pos(); ++m) {
    RatVec amb(wr, 0);
    for (int a = 0; a < tc.rel_rank; ++a)
      for (int i = 0; i < wr; ++i) amb[i] += Rational(tc.rel.pos[m][a]) * beta[a][i];
    auto it = class_index.find(amb);
    if (it == class_index.end())
      throw std::logic_error("indivisible restricted root has no class of roots above it");
    tc.class_of_indiv[m] = it->second;
    tc.classes[it->second].indiv_index = m;
    tc.classes[it->second].level = 1;
    matched[it->second] = 1;
    RatVec dbl(wr);
    for (int i = 0; i < wr; ++i) dbl[i] = amb[i] * 2;
    auto it2 = class_index.find(dbl);
    if (it2 != class_index.end()) {
      tc.double_of_indiv[m] = it2->second;
      tc.classes[it2->second].indiv_index = m;
      tc.classes[it2->second].level = 2;
      matched[it2->second] = 1;
    }
  }
  for (size_t c = 0; c < tc.classes.size(); ++c)
    if (!matched[c])
      throw std::logic_error("projection class matches no restricted root");

  // Rank-one classification of the simple orbits.
  tc.rank_one.resize(tc.rel_rank);
  for (int a = 0; a < tc.rel_rank; ++a) {
    const auto& mem = tc.orbit_members[a];
    int adjacent = 0;
    for (size_t x = 0; x < mem.size(); ++x)
      for (size_t y = x + 1; y < mem.size(); ++y)
        if (tc.work.cartan[mem[x]][mem[y]] != 0) {
          if (tc.work.cartan[mem[x]][mem[y]] != -1 || tc.work.cartan[mem[y]][mem[x]] != -1)
            throw std::invalid_argument("unsupported adjacency inside a simple orbit");
          ++adjacent;
        }
    RankOneClass rc;
    if (adjacent == 0) {
      rc.kind = RankOneClass::Kind::SL2;
      rc.field_degree = static_cast<int>(mem.size());
    } else {
      // orbit must split into disjoint adjacent pairs
      if (adjacent * 2 != static_cast<int>(mem.size()))
        throw std::invalid_argument("orbit adjacency does not split into pairs");
      for (size_t x = 0; x < mem.size(); ++x) {
        int deg = 0;
        for (size_t y = 0; y < mem.size(); ++y)
          if (x != y && tc.work.cartan[mem[x]][mem[y]] != 0) ++deg;
        if (deg != 1) throw std::invalid_argument("orbit adjacency does not split into pairs");
      }
      rc.kind = RankOneClass::Kind::SU3;
      rc.field_degree = static_cast<int>(mem.size()) / 2;
    }
    tc.rank_one[a] = rc;
  }

  // Consistency: the restricted reflection computed on the ambient space
  // agrees with the Cartan-matrix action on z coordinates.
  for (int a = 0; a < tc.rel_rank; ++a) {
    for (int probe = 0; probe < 2; ++probe) {
      RatVec z(tc.rel_rank);
      for (int k = 0; k < tc.rel_rank; ++k)
        z[k] = probe == 0 ? Rational(k + 1) : Rational(1, k + 2);
      RatVec lam_root = tc.work.fund_to_root(tc.xi(z));
      Rational coef = 2 * tc.work.form(lam_root, beta[a]) / tc.work.form(beta[a], beta[a]);
      RatVec reflected = lam_root;
      for (int i = 0; i < wr; ++i) reflected[i] -= coef * beta[a][i];
      RatVec z2 = tc.z_action(rootsys::weyl_simple(tc.rel, a), z);
      RatVec lam2 = tc.work.fund_to_root(tc.xi(z2));
      if (reflected != lam2)
        throw std::logic_error("restricted reflection mismatch between ambient and z action");
    }
  }

  return tc;
}

}  // namespace qsw::galois_form
