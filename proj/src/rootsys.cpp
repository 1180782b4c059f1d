#include "qsw/rootsys.hpp"

#include <algorithm>
#include <numeric>

namespace qsw::rootsys {

Series series_from_char(char c) {
  switch (c) {
    case 'A': return Series::A;
    case 'B': return Series::B;
    case 'C': return Series::C;
    case 'D': return Series::D;
    case 'E': return Series::E;
    case 'F': return Series::F;
    case 'G': return Series::G;
    default: throw std::invalid_argument(std::string("unknown series '") + c + "'");
  }
}

namespace {

IntMat diag2(int n) {
  IntMat c(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) c[i][i] = 2;
  return c;
}

void edge(IntMat& c, int i, int j) { c[i][j] = -1; c[j][i] = -1; }

}  // namespace

IntMat cartan_matrix(Series s, int rank) {
  auto bad = [&](const char* why) {
    throw std::invalid_argument(std::string("series ") + static_cast<char>(s) + std::to_string(rank) + ": " + why);
  };
  switch (s) {
    case Series::A: {
      if (rank < 1) bad("rank must be >= 1");
      IntMat c = diag2(rank);
      for (int i = 0; i + 1 < rank; ++i) edge(c, i, i + 1);
      return c;
    }
    case Series::B:
    case Series::C: {
      if (rank < 2) bad("rank must be >= 2");
      IntMat c = diag2(rank);
      for (int i = 0; i + 1 < rank; ++i) edge(c, i, i + 1);
      // B: alpha_rank short, <alpha_{n-1}, alpha_n^vee> = -2; C is the transpose.
      if (s == Series::B) c[rank - 2][rank - 1] = -2;
      else c[rank - 1][rank - 2] = -2;
      return c;
    }
    case Series::D: {
      if (rank < 3) bad("rank must be >= 3");
      IntMat c = diag2(rank);
      for (int i = 0; i + 1 < rank - 2; ++i) edge(c, i, i + 1);
      edge(c, rank - 3, rank - 2);
      edge(c, rank - 3, rank - 1);
      return c;
    }
    case Series::E: {
      if (rank < 6 || rank > 8) bad("rank must be 6..8");
      IntMat c = diag2(rank);
      // Bourbaki: chain 1-3-4-5-6(-7(-8)), node 2 attached to node 4.
      edge(c, 0, 2);
      for (int i = 2; i + 1 < rank; ++i) edge(c, i, i + 1);
      edge(c, 1, 3);
      return c;
    }
    case Series::F: {
      if (rank != 4) bad("rank must be 4");
      IntMat c = diag2(4);
      edge(c, 0, 1);
      edge(c, 1, 2);
      edge(c, 2, 3);
      c[1][2] = -2;  // alpha_1, alpha_2 long; alpha_3, alpha_4 short
      return c;
    }
    case Series::G: {
      if (rank != 2) bad("rank must be 2");
      return {{2, -1}, {-3, 2}};  // alpha_1 short, alpha_2 long
    }
  }
  throw std::logic_error("unreachable");
}

CartanDatum CartanDatum::make(Series s, int rank) { return CartanDatum{s, rank, cartan_matrix(s, rank)}; }

void CartanDatum::validate() const {
  IntMat want = cartan_matrix(series, rank);
  if (cartan != want)
    throw std::invalid_argument(std::string("Cartan matrix does not match generated table for ") +
                                static_cast<char>(series) + std::to_string(rank));
}

namespace {

// Symmetrizing weights: d_i C_ij = d_j C_ji, integral, min 1 per component.
IntVec symmetrizer(const IntMat& c) {
  int n = static_cast<int>(c.size());
  std::vector<Rational> d(n, 0);
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = ncomp;
    d[s] = 1;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (i == j || c[i][j] == 0) continue;
        // C_ij d_j = C_ji d_i  =>  d_j = d_i C_ji / C_ij
        Rational want = d[i] * Rational(c[j][i]) / Rational(c[i][j]);
        if (comp[j] < 0) {
          comp[j] = ncomp;
          d[j] = want;
          stack.push_back(j);
        } else if (d[j] != want) {
          throw std::invalid_argument("Cartan matrix is not symmetrizable");
        }
      }
    }
    // normalize this component so min d = 1
    Rational mn = 0;
    for (int i = 0; i < n; ++i)
      if (comp[i] == ncomp && (mn == 0 || d[i] < mn)) mn = d[i];
    for (int i = 0; i < n; ++i)
      if (comp[i] == ncomp) d[i] /= mn;
    ++ncomp;
  }
  IntVec out(n);
  for (int i = 0; i < n; ++i) {
    if (!is_integer(d[i])) throw std::invalid_argument("non-integral symmetrizer");
    out[i] = to_long(d[i]);
  }
  return out;
}

RatMat invert(const IntMat& m) {
  int n = static_cast<int>(m.size());
  RatMat a(n, RatVec(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = m[i][j];
    a[i][n + i] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv < 0) throw std::invalid_argument("singular Cartan matrix");
    std::swap(a[col], a[piv]);
    Rational p = a[col][col];
    for (auto& v : a[col]) v /= p;
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (int j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  RatMat inv(n, RatVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

}  // namespace

RootSystem RootSystem::build(const IntMat& cartan) {
  int n = static_cast<int>(cartan.size());
  if (n == 0) throw std::invalid_argument("empty Cartan matrix");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(cartan[i].size()) != n) throw std::invalid_argument("non-square Cartan matrix");
    if (cartan[i][i] != 2) throw std::invalid_argument("diagonal entries must equal 2");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (cartan[i][j] > 0 || cartan[i][j] < -3)
        throw std::invalid_argument("off-diagonal entries must lie in {0,-1,-2,-3}");
      if ((cartan[i][j] == 0) != (cartan[j][i] == 0))
        throw std::invalid_argument("zero pattern must be symmetric");
    }
  }

  RootSystem rs;
  rs.cartan = cartan;
  rs.rank = n;
  rs.d = symmetrizer(cartan);
  rs.cartan_inv = invert(cartan);

  // Closure by root strings, breadth-first in height: alpha + alpha_i is a
  // root iff p - <alpha, alpha_i^vee> > 0 with p the largest k such that
  // alpha - k alpha_i is a root.
  std::map<IntVec, int> seen;
  std::vector<IntVec> roots;
  for (int i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    seen[e] = static_cast<int>(roots.size());
    roots.push_back(e);
  }
  size_t frontier_begin = 0;
  while (frontier_begin < roots.size()) {
    size_t frontier_end = roots.size();
    for (size_t r = frontier_begin; r < frontier_end; ++r) {
      for (int i = 0; i < n; ++i) {
        IntVec a = roots[r];
        long pairing = 0;
        for (int k = 0; k < n; ++k) pairing += a[k] * cartan[k][i];
        long p = 0;
        IntVec down = a;
        for (;;) {
          down[i] -= 1;
          bool zero = std::all_of(down.begin(), down.end(), [](long v) { return v == 0; });
          if (zero || !seen.count(down)) break;
          ++p;
        }
        if (p - pairing > 0) {
          IntVec up = a;
          up[i] += 1;
          if (!seen.count(up)) {
            seen[up] = static_cast<int>(roots.size());
            roots.push_back(up);
          }
        }
      }
    }
    frontier_begin = frontier_end;
    if (roots.size() > 100000) throw std::invalid_argument("Cartan matrix is not of finite type");
  }

  std::sort(roots.begin(), roots.end(), [](const IntVec& a, const IntVec& b) {
    long ha = std::accumulate(a.begin(), a.end(), 0L);
    long hb = std::accumulate(b.begin(), b.end(), 0L);
    if (ha != hb) return ha < hb;
    return a < b;
  });
  rs.pos = roots;
  rs.index.clear();
  for (int j = 0; j < static_cast<int>(roots.size()); ++j) rs.index[roots[j]] = j;

  for (const auto& a : rs.pos) {
    rs.ht.push_back(std::accumulate(a.begin(), a.end(), 0L));
    // (a,a)/2 = (1/2) sum_ij m_i m_j C_ij d_j
    long twice = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) twice += a[i] * a[j] * cartan[i][j] * rs.d[j];
    if (twice % 2 != 0) throw std::logic_error("odd squared length");
    long da = twice / 2;
    IntVec cv(n);
    long coh = 0;
    for (int i = 0; i < n; ++i) {
      long numr = a[i] * rs.d[i];
      if (numr % da != 0) throw std::logic_error("non-integral coroot");
      cv[i] = numr / da;
      coh += cv[i];
    }
    rs.pos_coroot.push_back(cv);
    rs.coht.push_back(coh);
  }
  return rs;
}

long RootSystem::pair_root_coroot(const IntVec& x, int j) const {
  long s = 0;
  for (int k = 0; k < rank; ++k) s += x[k] * cartan[k][j];
  return s;
}

IntVec RootSystem::reflect_root(int i, const IntVec& x) const {
  IntVec y = x;
  y[i] -= pair_root_coroot(x, i);
  return y;
}

std::pair<int, bool> RootSystem::locate_root(const IntVec& x) const {
  auto it = index.find(x);
  if (it != index.end()) return {it->second, false};
  IntVec m(x.size());
  for (size_t i = 0; i < x.size(); ++i) m[i] = -x[i];
  it = index.find(m);
  if (it != index.end()) return {it->second, true};
  throw std::invalid_argument("vector is not a root");
}

bool RootSystem::is_root(const IntVec& x) const {
  if (index.count(x)) return true;
  IntVec m(x.size());
  for (size_t i = 0; i < x.size(); ++i) m[i] = -x[i];
  return index.count(m) > 0;
}

Rational RootSystem::form(const RatVec& x, const RatVec& y) const {
  Rational s = 0;
  for (int i = 0; i < rank; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < rank; ++j) s += x[i] * y[j] * Rational(cartan[i][j] * d[j]);
  }
  return s;
}

RatVec RootSystem::fund_to_root(const RatVec& c) const {
  // lambda = sum_i c_i varpi_i = sum_k (sum_i c_i (C^{-1})_{ik}) alpha_k
  RatVec x(rank, 0);
  for (int k = 0; k < rank; ++k)
    for (int i = 0; i < rank; ++i) x[k] += c[i] * cartan_inv[i][k];
  return x;
}

RatVec RootSystem::root_to_fund(const RatVec& x) const {
  RatVec c(rank, 0);
  for (int j = 0; j < rank; ++j)
    for (int k = 0; k < rank; ++k) c[j] += x[k] * Rational(cartan[k][j]);
  return c;
}

RatVec RootSystem::rho_fund() const { return RatVec(rank, 1); }

Rational RootSystem::pair_weight_coroot(const RatVec& lam, const IntVec& coroot) const {
  Rational s = 0;
  for (int i = 0; i < rank; ++i) s += lam[i] * Rational(coroot[i]);
  return s;
}

IntVec RootSystem::highest_root() const {
  long best = -1;
  int at = -1;
  bool tie = false;
  for (int j = 0; j < n_pos(); ++j) {
    if (ht[j] > best) { best = ht[j]; at = j; tie = false; }
    else if (ht[j] == best) tie = true;
  }
  if (tie) throw std::invalid_argument("highest root is ambiguous (decomposable system)");
  return pos[at];
}

bool WeylElement::is_identity() const {
  for (size_t j = 0; j < img.size(); ++j)
    if (neg[j] || img[j] != static_cast<int>(j)) return false;
  return true;
}

WeylElement weyl_identity(const RootSystem& rs) {
  WeylElement w;
  w.img.resize(rs.n_pos());
  w.neg.assign(rs.n_pos(), 0);
  for (int j = 0; j < rs.n_pos(); ++j) w.img[j] = j;
  return w;
}

WeylElement weyl_simple(const RootSystem& rs, int i) {
  if (i < 0 || i >= rs.rank) throw std::invalid_argument("simple reflection index out of range");
  WeylElement w;
  w.word = {i};
  w.img.resize(rs.n_pos());
  w.neg.assign(rs.n_pos(), 0);
  for (int j = 0; j < rs.n_pos(); ++j) {
    auto [idx, negf] = rs.locate_root(rs.reflect_root(i, rs.pos[j]));
    w.img[j] = idx;
    w.neg[j] = negf ? 1 : 0;
  }
  return w;
}

WeylElement weyl_compose(const RootSystem& rs, const WeylElement& a, const WeylElement& b) {
  WeylElement w;
  w.img.resize(rs.n_pos());
  w.neg.assign(rs.n_pos(), 0);
  for (int j = 0; j < rs.n_pos(); ++j) {
    int mid = b.img[j];
    w.img[j] = a.img[mid];
    w.neg[j] = static_cast<char>(b.neg[j] ^ a.neg[mid]);
  }
  w.word = a.word;
  w.word.insert(w.word.end(), b.word.begin(), b.word.end());
  return w;
}

WeylElement weyl_from_word(const RootSystem& rs, const std::vector<int>& word) {
  WeylElement w = weyl_identity(rs);
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    w = weyl_compose(rs, weyl_simple(rs, *it), w);
  w.word = word;
  return w;
}

RatVec weyl_apply(const RootSystem& rs, const WeylElement& w, const RatVec& x) {
  // x in fundamental coordinates: s_i subtracts <x, alpha_i^vee> alpha_i,
  // i.e. x_j -= x_i C_ij.
  RatVec v = x;
  for (auto it = w.word.rbegin(); it != w.word.rend(); ++it) {
    int i = *it;
    Rational c = v[i];
    if (c == 0) continue;
    for (int j = 0; j < rs.rank; ++j) v[j] -= c * Rational(rs.cartan[i][j]);
  }
  return v;
}

std::vector<int> inversion_set(const RootSystem& rs, const WeylElement& w) {
  std::vector<int> inv;
  for (int j = 0; j < rs.n_pos(); ++j)
    if (w.neg[j]) inv.push_back(j);
  return inv;
}

long weyl_length(const RootSystem& rs, const WeylElement& w) {
  return static_cast<long>(inversion_set(rs, w).size());
}

WeylElement longest_element(const RootSystem& rs) {
  // Greedy descent of rho to the antidominant chamber; each step adds one
  // inversion, so the accumulated word is reduced.
  RatVec lam = rs.rho_fund();
  std::vector<int> word;
  for (;;) {
    int pick = -1;
    for (int i = 0; i < rs.rank; ++i)
      if (lam[i] > 0) { pick = i; break; }
    if (pick < 0) break;
    Rational c = lam[pick];
    for (int j = 0; j < rs.rank; ++j) lam[j] -= c * Rational(rs.cartan[pick][j]);
    word.push_back(pick);
  }
  std::reverse(word.begin(), word.end());
  WeylElement w0 = weyl_from_word(rs, word);
  if (weyl_length(rs, w0) != static_cast<long>(word.size()))
    throw std::logic_error("longest element word is not reduced");
  return w0;
}

std::vector<WeylElement> enumerate_weyl(const RootSystem& rs, size_t cap) {
  std::vector<WeylElement> gens;
  for (int i = 0; i < rs.rank; ++i) gens.push_back(weyl_simple(rs, i));
  std::map<std::pair<std::vector<int>, std::vector<char>>, size_t> seen;
  std::vector<WeylElement> out{weyl_identity(rs)};
  seen[{out[0].img, out[0].neg}] = 0;
  size_t head = 0;
  while (head < out.size()) {
    WeylElement cur = out[head++];
    for (int i = 0; i < rs.rank; ++i) {
      WeylElement nxt = weyl_compose(rs, gens[i], cur);
      nxt.word = cur.word;
      nxt.word.insert(nxt.word.begin(), i);
      auto key = std::make_pair(nxt.img, nxt.neg);
      if (seen.count(key)) continue;
      seen[key] = out.size();
      out.push_back(nxt);
      if (out.size() > cap) throw std::invalid_argument("Weyl group larger than cap");
    }
  }
  return out;
}

std::vector<int> reduced_word(const RootSystem& rs, const WeylElement& w) {
  // Strip right descents: if w(alpha_i) < 0 then l(w s_i) = l(w) - 1.
  std::vector<int> rev;
  WeylElement cur = w;
  for (;;) {
    int pick = -1;
    for (int i = 0; i < rs.rank; ++i) {
      IntVec e(rs.rank, 0);
      e[i] = 1;
      auto it = rs.index.find(e);
      if (cur.neg[it->second]) { pick = i; break; }
    }
    if (pick < 0) break;
    cur = weyl_compose(rs, cur, weyl_simple(rs, pick));
    rev.push_back(pick);
  }
  if (!cur.is_identity()) throw std::logic_error("descent stripping did not reach identity");
  std::reverse(rev.begin(), rev.end());
  return rev;
}

}  // namespace qsw::rootsys
