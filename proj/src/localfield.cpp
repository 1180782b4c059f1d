#include "qsw/localfield.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qsw {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("localfield: " + msg); }

bool is_prime_int(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void decompose_prime_power(int q, int* p, int* e) {
  if (q < 2) fail("q must be at least 2");
  for (int d = 2; d <= q; ++d) {
    if (q % d == 0) {
      int m = q, k = 0;
      while (m % d == 0) { m /= d; ++k; }
      if (m != 1 || !is_prime_int(d)) fail("q is not a prime power");
      *p = d;
      *e = k;
      return;
    }
  }
  fail("q is not a prime power");
}

// Dense polynomials over F_p, index = degree, used only to build field tables.
using Poly = std::vector<int>;

void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, int p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  poly_trim(r);
  return r;
}

// Remainder of a by monic b.
Poly poly_rem(Poly a, const Poly& b, int p) {
  poly_trim(a);
  while (a.size() >= b.size()) {
    int lead = a.back();
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = ((a[shift + i] - lead * b[i]) % p + p) % p;
    }
    poly_trim(a);
  }
  return a;
}

bool poly_is_irreducible(const Poly& f, int p) {
  int d = int(f.size()) - 1;
  if (d <= 0) return false;
  if (d == 1) return true;
  // Trial division by every monic polynomial of degree 1..d/2.
  for (int deg = 1; 2 * deg <= d; ++deg) {
    long long count = 1;
    for (int i = 0; i < deg; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      Poly g(deg + 1, 0);
      long long c = code;
      for (int i = 0; i < deg; ++i) { g[i] = int(c % p); c /= p; }
      g[deg] = 1;
      if (poly_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

int encode_poly(const Poly& a, int p) {
  int code = 0, mult = 1;
  for (int digit : a) { code += digit * mult; mult *= p; }
  return code;
}

Poly decode_poly(int code, int p, int d) {
  Poly a(d, 0);
  for (int i = 0; i < d; ++i) { a[i] = code % p; code /= p; }
  poly_trim(a);
  return a;
}

std::mt19937 make_rng(unsigned seed) { return std::mt19937(seed); }

}  // namespace

// ---------------------------------------------------------------------------
// Field
// ---------------------------------------------------------------------------

int Field::inv(int a) const {
  if (a == 0) fail("division by zero in finite field");
  return inv_t[a];
}

int Field::pow(int a, long long e) const {
  if (e < 0) return pow(inv(a), -e);
  int r = 1, b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

Field make_prime_power_field(int p, int d) {
  if (!is_prime_int(p)) fail("characteristic must be prime");
  if (d < 1 || d > 6) fail("extension degree out of range");
  long long qll = 1;
  for (int i = 0; i < d; ++i) qll *= p;
  if (qll > 1000) fail("field too large for table arithmetic");
  int q = int(qll);

  // Find a monic irreducible modulus of degree d.
  Poly modulus;
  for (int code = 0; code < q; ++code) {
    Poly f = decode_poly(code, p, d);
    f.resize(d + 1, 0);
    f[d] = 1;
    if (poly_is_irreducible(f, p)) { modulus = f; break; }
  }
  if (modulus.empty()) fail("no irreducible modulus found");

  Field F;
  F.p = p;
  F.q = q;
  F.add_t.resize(size_t(q) * q);
  F.mul_t.resize(size_t(q) * q);
  F.neg_t.resize(q);
  F.inv_t.assign(q, 0);
  F.conj_t.resize(q);
  F.frob_t.resize(q);

  std::vector<Poly> elems(q);
  for (int a = 0; a < q; ++a) elems[a] = decode_poly(a, p, d);
  for (int a = 0; a < q; ++a) {
    Poly na = elems[a];
    for (int& digit : na) digit = (p - digit) % p;
    poly_trim(na);
    F.neg_t[a] = encode_poly(na, p);
    F.conj_t[a] = a;
    for (int b = 0; b < q; ++b) {
      Poly s(std::max(elems[a].size(), elems[b].size()), 0);
      for (size_t i = 0; i < elems[a].size(); ++i) s[i] = elems[a][i];
      for (size_t i = 0; i < elems[b].size(); ++i) s[i] = (s[i] + elems[b][i]) % p;
      poly_trim(s);
      F.add_t[size_t(a) * q + b] = encode_poly(s, p);
      F.mul_t[size_t(a) * q + b] = encode_poly(poly_rem(poly_mul(elems[a], elems[b], p), modulus, p), p);
    }
  }
  for (int a = 1; a < q; ++a) {
    for (int b = 1; b < q; ++b)
      if (F.mul_t[size_t(a) * q + b] == 1) { F.inv_t[a] = b; break; }
    if (F.inv_t[a] == 0) fail("inverse search failed (modulus not irreducible?)");
  }
  for (int a = 0; a < q; ++a) F.frob_t[a] = F.pow(a, p);
  return F;
}

Field make_quadratic_extension(const Field& base) {
  int q0 = base.q;
  if (q0 % 2 == 0) fail("quadratic extension by sqrt requires odd base field");
  if (q0 > 31) fail("base field too large for quadratic-extension tables");
  // Find a non-square.
  std::vector<bool> is_square(q0, false);
  for (int a = 0; a < q0; ++a) is_square[base.mul(a, a)] = true;
  int eps = 0;
  for (int a = 1; a < q0; ++a)
    if (!is_square[a]) { eps = a; break; }
  if (eps == 0) fail("no non-square in base field");

  int Q = q0 * q0;
  Field E;
  E.p = base.p;
  E.q = Q;
  E.base_q = q0;
  E.eps = eps;
  E.add_t.resize(size_t(Q) * Q);
  E.mul_t.resize(size_t(Q) * Q);
  E.neg_t.resize(Q);
  E.inv_t.assign(Q, 0);
  E.conj_t.resize(Q);
  E.frob_t.resize(Q);

  auto enc = [&](int a, int b) { return a + q0 * b; };
  for (int x = 0; x < Q; ++x) {
    int a = x % q0, b = x / q0;
    E.neg_t[x] = enc(base.neg(a), base.neg(b));
    E.conj_t[x] = enc(a, base.neg(b));
    for (int y = 0; y < Q; ++y) {
      int c = y % q0, d = y / q0;
      E.add_t[size_t(x) * Q + y] = enc(base.add(a, c), base.add(b, d));
      int re = base.add(base.mul(a, c), base.mul(eps, base.mul(b, d)));
      int im = base.add(base.mul(a, d), base.mul(b, c));
      E.mul_t[size_t(x) * Q + y] = enc(re, im);
    }
  }
  for (int x = 1; x < Q; ++x) {
    int a = x % q0, b = x / q0;
    int norm = base.sub(base.mul(a, a), base.mul(eps, base.mul(b, b)));
    if (norm == 0) fail("degenerate norm (eps is a square?)");
    int ninv = base.inv_t[norm];
    E.inv_t[x] = enc(base.mul(a, ninv), base.mul(base.neg(b), ninv));
  }
  for (int x = 0; x < Q; ++x) E.frob_t[x] = E.pow(x, E.p);
  return E;
}

// ---------------------------------------------------------------------------
// LSeries
// ---------------------------------------------------------------------------

namespace {

void ls_normalize(LSeries& a) {
  if (a.val > a.prec) a.val = a.prec;
  if (size_t(a.prec - a.val) < a.c.size()) a.c.resize(a.prec - a.val);
  size_t lead = 0;
  while (lead < a.c.size() && a.c[lead] == 0) ++lead;
  if (lead > 0) {
    a.c.erase(a.c.begin(), a.c.begin() + lead);
    a.val += int(lead);
  }
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
  if (a.c.empty()) a.val = a.prec;
}

void check_same_field(const LSeries& a, const LSeries& b) {
  if (a.F != b.F) fail("mixed coefficient fields");
}

}  // namespace

int LSeries::valuation() const {
  if (is_zero()) fail("valuation undecidable: element is zero at working precision");
  return val;
}

int LSeries::coeff(int exp) const {
  if (exp >= prec) fail("coefficient beyond working precision");
  if (exp < val || exp >= val + int(c.size())) return 0;
  return c[exp - val];
}

std::string LSeries::to_string() const {
  std::ostringstream os;
  if (is_zero()) {
    os << "O(t^" << prec << ")";
    return os.str();
  }
  bool first = true;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!first) os << " + ";
    os << c[i] << "*t^" << (val + int(i));
    first = false;
  }
  os << " + O(t^" << prec << ")";
  return os.str();
}

LSeries ls_zero(const Field& F, int prec) {
  LSeries a;
  a.F = &F;
  a.val = prec;
  a.prec = prec;
  return a;
}

LSeries ls_const(const Field& F, int code, int prec) { return ls_term(F, code, 0, prec); }

LSeries ls_term(const Field& F, int code, int exp, int prec) {
  LSeries a;
  a.F = &F;
  a.val = exp;
  a.prec = prec;
  if (exp < prec) a.c.assign(1, code);
  ls_normalize(a);
  return a;
}

LSeries ls_make(const Field& F, int val, const std::vector<int>& digits, int prec) {
  LSeries a;
  a.F = &F;
  a.val = val;
  a.prec = prec;
  a.c = digits;
  if (val + int(a.c.size()) > prec) a.c.resize(std::max(0, prec - val));
  for (int d : a.c)
    if (d < 0 || d >= F.q) fail("coefficient code out of range");
  ls_normalize(a);
  return a;
}

LSeries ls_add(const LSeries& a, const LSeries& b) {
  check_same_field(a, b);
  const Field& F = *a.F;
  LSeries r;
  r.F = &F;
  r.prec = std::min(a.prec, b.prec);
  r.val = std::min({a.val, b.val, r.prec});
  r.c.assign(std::max(0, r.prec - r.val), 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    int exp = a.val + int(i);
    if (exp < r.prec) r.c[exp - r.val] = F.add(r.c[exp - r.val], a.c[i]);
  }
  for (size_t i = 0; i < b.c.size(); ++i) {
    int exp = b.val + int(i);
    if (exp < r.prec) r.c[exp - r.val] = F.add(r.c[exp - r.val], b.c[i]);
  }
  ls_normalize(r);
  return r;
}

LSeries ls_neg(const LSeries& a) {
  LSeries r = a;
  for (int& d : r.c) d = a.F->neg(d);
  return r;
}

LSeries ls_sub(const LSeries& a, const LSeries& b) { return ls_add(a, ls_neg(b)); }

LSeries ls_scale(int code, const LSeries& a) {
  LSeries r = a;
  for (int& d : r.c) d = a.F->mul(code, d);
  ls_normalize(r);
  return r;
}

LSeries ls_mul(const LSeries& a, const LSeries& b) {
  check_same_field(a, b);
  const Field& F = *a.F;
  int rp = std::min(a.val + b.prec, b.val + a.prec);
  if (a.is_zero() || b.is_zero()) return ls_zero(F, rp);
  LSeries r;
  r.F = &F;
  r.prec = rp;
  r.val = a.val + b.val;
  r.c.assign(std::max(0, r.prec - r.val), 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      int exp = a.val + int(i) + b.val + int(j);
      if (exp >= r.prec) break;
      r.c[exp - r.val] = F.add(r.c[exp - r.val], F.mul(a.c[i], b.c[j]));
    }
  }
  ls_normalize(r);
  return r;
}

LSeries ls_inv(const LSeries& a) {
  if (a.is_zero()) fail("cannot invert: element is zero at working precision");
  const Field& F = *a.F;
  int n = a.known_terms();
  auto digit = [&](int j) { return j < int(a.c.size()) ? a.c[j] : 0; };
  std::vector<int> y(n, 0);
  int c0inv = F.inv(a.c[0]);
  y[0] = c0inv;
  for (int m = 1; m < n; ++m) {
    int acc = 0;
    for (int j = 1; j <= m; ++j) acc = F.add(acc, F.mul(digit(j), y[m - j]));
    y[m] = F.mul(F.neg(c0inv), acc);
  }
  LSeries r;
  r.F = &F;
  r.val = -a.val;
  r.prec = r.val + n;
  r.c = std::move(y);
  ls_normalize(r);
  return r;
}

LSeries ls_conj(const LSeries& a) {
  LSeries r = a;
  for (int& d : r.c) d = a.F->conj(d);
  return r;
}

bool ls_equal(const LSeries& a, const LSeries& b) { return ls_sub(a, b).is_zero(); }

// ---------------------------------------------------------------------------
// Matrices, Iwasawa reduction
// ---------------------------------------------------------------------------

LMat lmat_identity(const Field& F, int n, int prec) {
  LMat m(n, std::vector<LSeries>(n, ls_zero(F, prec)));
  for (int i = 0; i < n; ++i) m[i][i] = ls_const(F, 1, prec);
  return m;
}

LMat lmat_mul(const LMat& a, const LMat& b) {
  int n = int(a.size());
  const Field& F = *a[0][0].F;
  LMat r(n, std::vector<LSeries>(n, ls_zero(F, INT_MAX / 4)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      LSeries acc = ls_mul(a[i][0], b[0][j]);
      for (int k = 1; k < n; ++k) acc = ls_add(acc, ls_mul(a[i][k], b[k][j]));
      r[i][j] = acc;
    }
  return r;
}

LMat lmat_conj_transpose(const LMat& a) {
  int n = int(a.size());
  LMat r(n, std::vector<LSeries>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i][j] = ls_conj(a[j][i]);
  return r;
}

bool lmat_equal(const LMat& a, const LMat& b) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j)
      if (!ls_equal(a[i][j], b[i][j])) return false;
  return true;
}

IwasawaResult iwasawa_reduce(const LMat& g0) {
  LMat g = g0;
  int n = int(g.size());
  const Field& F = *g[0][0].F;
  int kprec = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) kprec = std::max(kprec, g[i][j].prec + 2 * std::abs(g[i][j].val) + 4);
  LMat k = lmat_identity(F, n, kprec);

  for (int i = n - 1; i >= 1; --i) {
    // Pivot: the minimal-valuation entry of row i among columns 0..i.
    int piv = -1, pval = INT_MAX;
    for (int j = 0; j <= i; ++j) {
      if (g[i][j].is_zero()) continue;
      if (g[i][j].val < pval) { pval = g[i][j].val; piv = j; }
    }
    if (piv < 0) fail("Iwasawa reduction: row is zero at working precision");
    if (piv != i) {
      for (int r = 0; r < n; ++r) { std::swap(g[r][piv], g[r][i]); std::swap(k[r][piv], k[r][i]); }
    }
    LSeries pivot_inv = ls_inv(g[i][i]);
    for (int j = 0; j < i; ++j) {
      if (g[i][j].is_zero()) continue;
      LSeries f = ls_mul(g[i][j], pivot_inv);
      if (!f.is_zero() && f.val < 0) fail("Iwasawa reduction: non-integral elimination factor");
      for (int r = 0; r < n; ++r) {
        g[r][j] = ls_sub(g[r][j], ls_mul(f, g[r][i]));
        k[r][j] = ls_sub(k[r][j], ls_mul(f, k[r][i]));
      }
      if (!g[i][j].is_zero()) fail("Iwasawa reduction: elimination failed");
    }
  }
  IwasawaResult res;
  res.diag_val.resize(n);
  for (int i = 0; i < n; ++i) res.diag_val[i] = g[i][i].valuation();
  res.upper = std::move(g);
  res.k = std::move(k);
  return res;
}

LMat sl2_w0inv_n(const LSeries& x) {
  const Field& F = *x.F;
  int P = x.prec + 2 * std::max(0, -x.val) + 8;
  LSeries one = ls_const(F, 1, P), zero = ls_zero(F, P), mone = ls_const(F, F.neg(1), P);
  // w0 = [[0,1],[-1,0]], w0^{-1} = [[0,-1],[1,0]]; n(x) = [[1,x],[0,1]].
  LMat w0inv = {{zero, mone}, {one, zero}};
  LMat nx = {{one, x}, {zero, one}};
  return lmat_mul(w0inv, nx);
}

int iwasawa_valuation_sl2(const LSeries& x) {
  IwasawaResult r = iwasawa_reduce(sl2_w0inv_n(x));
  if (r.diag_val[0] + r.diag_val[1] != 0) fail("SL2 Iwasawa: determinant valuation nonzero");
  return r.diag_val[0];
}

LSeries su3_y_from(const LSeries& x, const LSeries& z) {
  const Field& E = *x.F;
  if (!E.has_conj()) fail("SU3 requires a quadratic-extension coefficient field");
  for (int d : z.c)
    if (d >= E.base_q) fail("z must have base-field coefficients");
  int inv2 = E.inv(E.add(1, 1));
  int sqrt_eps = E.base_q;  // the element (0, 1) = sqrt(eps)
  LSeries norm_half = ls_scale(E.neg(inv2), ls_mul(x, ls_conj(x)));
  return ls_add(norm_half, ls_scale(sqrt_eps, z));
}

LMat su3_w0inv_n(const LSeries& x, const LSeries& y) {
  const Field& E = *x.F;
  if (!E.has_conj()) fail("SU3 requires a quadratic-extension coefficient field");
  LSeries constraint = ls_add(ls_add(y, ls_conj(y)), ls_mul(x, ls_conj(x)));
  if (!constraint.is_zero()) fail("SU3 unipotent constraint violated: y + conj(y) + x*conj(x) != 0");
  int P = std::min(x.prec, y.prec) + 2 * std::max({0, -x.val, -y.val}) + 8;
  LSeries one = ls_const(E, 1, P), zero = ls_zero(E, P), mone = ls_const(E, E.neg(1), P);
  LMat n = {{one, x, y}, {zero, one, ls_neg(ls_conj(x))}, {zero, zero, one}};
  // w0 = antidiag(1,-1,1) is its own inverse and lies in SU3.
  LMat w0inv = {{zero, zero, one}, {zero, mone, zero}, {one, zero, zero}};
  return lmat_mul(w0inv, n);
}

bool su3_member(const LMat& g) {
  const Field& E = *g[0][0].F;
  int P = 0;
  for (auto& row : g)
    for (auto& e : row) P = std::max(P, e.prec + 2 * std::abs(e.val) + 4);
  LSeries one = ls_const(E, 1, P), zero = ls_zero(E, P);
  LMat J = {{zero, zero, one}, {zero, one, zero}, {one, zero, zero}};
  return lmat_equal(lmat_mul(lmat_conj_transpose(g), lmat_mul(J, g)), J);
}

int iwasawa_valuation_su3(const LSeries& x, const LSeries& y) {
  IwasawaResult r = iwasawa_reduce(su3_w0inv_n(x, y));
  if (r.diag_val[1] != 0 || r.diag_val[0] + r.diag_val[2] != 0)
    fail("SU3 Iwasawa: diagonal valuations violate the torus pattern (m, 0, -m)");
  return r.diag_val[0];
}

// ---------------------------------------------------------------------------
// Shell integrals
// ---------------------------------------------------------------------------

namespace {

// Random series with prescribed exact valuation (first digit nonzero), digits
// running from exponent val up to precision prec.
LSeries random_series_exact_val(const Field& F, int val, int prec, std::mt19937& rng) {
  std::uniform_int_distribution<int> digit(0, F.q - 1), lead(1, F.q - 1);
  std::vector<int> digits;
  for (int e = val; e < prec; ++e) digits.push_back(e == val ? lead(rng) : digit(rng));
  return ls_make(F, val, digits, prec);
}

// Random integral series (valuation >= 0, possibly zero).
LSeries random_integral_series(const Field& F, int prec, std::mt19937& rng) {
  std::uniform_int_distribution<int> digit(0, F.q - 1);
  std::vector<int> digits;
  for (int e = 0; e < prec; ++e) digits.push_back(digit(rng));
  return ls_make(F, 0, digits, prec);
}

// Random series over the base subfield codes (for the SU3 z-coordinate).
LSeries random_base_series(const Field& E, int val, int prec, bool exact_val, std::mt19937& rng) {
  std::uniform_int_distribution<int> digit(0, E.base_q - 1), lead(1, E.base_q - 1);
  std::vector<int> digits;
  for (int e = val; e < prec; ++e)
    digits.push_back(e == val && exact_val ? lead(rng) : digit(rng));
  return ls_make(E, val, digits, prec);
}

void mutate_tail_digit(LSeries& a, std::mt19937& rng, int digit_cap) {
  if (a.c.size() < 2) return;
  std::uniform_int_distribution<size_t> pos(1, a.c.size() - 1);
  std::uniform_int_distribution<int> digit(0, digit_cap - 1);
  size_t i = pos(rng);
  a.c[i] = digit(rng);
  ls_normalize(a);
}

double sl2_shell_integral(int p, int e, double s, int depth, const ShellParams& pr) {
  Field F = make_prime_power_field(p, e);
  double q = double(F.q);
  double total = 1.0;  // the integral-points shell, vol(N(O)) = 1, integrand 1
  std::mt19937 rng = make_rng(pr.seed);
  for (int j = 1; j <= depth; ++j) {
    int m_common = INT_MIN;
    int reps = std::max(2, pr.samples);
    for (int r = 0; r < reps; ++r) {
      LSeries x = random_series_exact_val(F, -j, pr.guard, rng);
      int m = iwasawa_valuation_sl2(x);
      if (m_common == INT_MIN) m_common = m;
      else if (m != m_common) fail("SL2 shell integrand not constant on a valuation shell");
      for (int t = 0; t < pr.tail_checks; ++t) {
        LSeries xt = x;
        mutate_tail_digit(xt, rng, F.q);
        if (!xt.is_zero() && xt.val == -j && iwasawa_valuation_sl2(xt) != m)
          fail("SL2 shell integrand changed under tail perturbation");
      }
    }
    double shell_vol = std::pow(q, j) - std::pow(q, j - 1);
    total += shell_vol * std::pow(q, -double(m_common) * (s + 1.0));
  }
  return total;
}

double su3_shell_integral(int p, int e, double s, int depth, const ShellParams& pr) {
  if (p == 2) fail("SU3 oracle requires odd residue characteristic");
  Field base = make_prime_power_field(p, e);
  Field E = make_quadratic_extension(base);
  double q = double(base.q), qE = q * q;
  double total = 0.0;
  std::mt19937 rng = make_rng(pr.seed);
  for (int i = 0; i <= depth; ++i) {
    for (int j = 0; j <= depth; ++j) {
      int m_common = INT_MIN;
      int reps = std::max(2, pr.samples);
      for (int r = 0; r < reps; ++r) {
        int P = pr.guard;
        LSeries x = (i == 0) ? random_integral_series(E, P, rng)
                             : random_series_exact_val(E, -i, P, rng);
        LSeries z = (j == 0) ? random_base_series(E, 0, P, false, rng)
                             : random_base_series(E, -j, P, true, rng);
        LSeries y = su3_y_from(x, z);
        int m = iwasawa_valuation_su3(x, y);
        if (m_common == INT_MIN) m_common = m;
        else if (m != m_common) fail("SU3 shell integrand not constant on a valuation shell");
        for (int t = 0; t < pr.tail_checks; ++t) {
          LSeries xt = x, zt = z;
          if (t % 2 == 0) mutate_tail_digit(xt, rng, E.q);
          else mutate_tail_digit(zt, rng, E.base_q);
          bool same_shell = (i == 0 ? (xt.is_zero() || xt.val >= 0) : (!xt.is_zero() && xt.val == -i)) &&
                            (j == 0 ? (zt.is_zero() || zt.val >= 0) : (!zt.is_zero() && zt.val == -j));
          if (!same_shell) continue;
          if (iwasawa_valuation_su3(xt, su3_y_from(xt, zt)) != m)
            fail("SU3 shell integrand changed under tail perturbation");
        }
      }
      double mu_x = (i == 0) ? 1.0 : std::pow(qE, i) - std::pow(qE, i - 1);
      double mu_z = (j == 0) ? 1.0 : std::pow(q, j) - std::pow(q, j - 1);
      total += mu_x * mu_z * std::pow(qE, -double(m_common) * (s + 1.0));
    }
  }
  return total;
}

}  // namespace

double shell_integral(LocalKind kind, int q, double s, int depth, const ShellParams& params) {
  if (depth < 0) fail("depth must be nonnegative");
  if (s <= 1.0) fail("nonconvergent parameters: require s > 1");
  if (depth == 0) return 1.0;
  int p = 0, e = 0;
  decompose_prime_power(q, &p, &e);
  ShellParams pr = params;
  pr.guard = std::max(pr.guard, 4);
  if (kind == LocalKind::SL2) return sl2_shell_integral(p, e, s, depth, pr);
  return su3_shell_integral(p, e, s, depth, pr);
}

// ---------------------------------------------------------------------------
// Point counts
// ---------------------------------------------------------------------------

namespace {

long long count_sl2(int q) {
  if (q > 13) fail("q too large for exhaustive SL2 enumeration");
  int p = 0, e = 0;
  decompose_prime_power(q, &p, &e);
  Field F = make_prime_power_field(p, e);
  long long count = 0;
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d)
          if (F.sub(F.mul(a, d), F.mul(b, c)) == 1) ++count;
  return count;
}

long long count_su3(int q) {
  int p = 0, e = 0;
  decompose_prime_power(q, &p, &e);
  if (p == 2) fail("SU3 count requires odd q");
  if (q > 5) fail("q too large for the SU3 frame enumeration");
  Field base = make_prime_power_field(p, e);
  Field E = make_quadratic_extension(base);
  int Q = E.q;

  // Vectors in E^3 coded as v0 + Q*v1 + Q^2*v2; Hermitian form
  // h(u,v) = conj(u0) v2 + conj(u1) v1 + conj(u2) v0 (antidiagonal Gram J).
  struct Vec { int v[3]; };
  std::vector<Vec> vecs;
  vecs.reserve(size_t(Q) * Q * Q);
  for (int a = 0; a < Q; ++a)
    for (int b = 0; b < Q; ++b)
      for (int c = 0; c < Q; ++c) vecs.push_back(Vec{{a, b, c}});
  auto herm = [&](const Vec& u, const Vec& v) {
    int acc = E.mul(E.conj(u.v[0]), v.v[2]);
    acc = E.add(acc, E.mul(E.conj(u.v[1]), v.v[1]));
    acc = E.add(acc, E.mul(E.conj(u.v[2]), v.v[0]));
    return acc;
  };
  std::vector<int> self(vecs.size());
  for (size_t i = 0; i < vecs.size(); ++i) self[i] = herm(vecs[i], vecs[i]);

  auto det3 = [&](const Vec& a, const Vec& b, const Vec& c) {
    int t0 = E.mul(a.v[0], E.sub(E.mul(b.v[1], c.v[2]), E.mul(b.v[2], c.v[1])));
    int t1 = E.mul(a.v[1], E.sub(E.mul(b.v[0], c.v[2]), E.mul(b.v[2], c.v[0])));
    int t2 = E.mul(a.v[2], E.sub(E.mul(b.v[0], c.v[1]), E.mul(b.v[1], c.v[0])));
    return E.add(E.sub(t0, t1), t2);
  };

  long long count = 0;
  for (size_t i1 = 0; i1 < vecs.size(); ++i1) {
    if (self[i1] != 0) continue;
    const Vec& c1 = vecs[i1];
    if (c1.v[0] == 0 && c1.v[1] == 0 && c1.v[2] == 0) continue;
    for (size_t i2 = 0; i2 < vecs.size(); ++i2) {
      if (self[i2] != 1) continue;
      const Vec& c2 = vecs[i2];
      if (herm(c1, c2) != 0) continue;
      // Solve the conj-linear conditions h(c1,c3) = 1, h(c2,c3) = 0: two
      // E-linear equations in c3; the solution set is an affine line.
      // Row k of the system is (conj(ck0), conj(ck1), conj(ck2)) * J.
      int M[2][3] = {{E.conj(c1.v[2]), E.conj(c1.v[1]), E.conj(c1.v[0])},
                     {E.conj(c2.v[2]), E.conj(c2.v[1]), E.conj(c2.v[0])}};
      int rhs[2] = {1, 0};
      // Gaussian elimination to row echelon with two pivots.
      int pc0 = -1;
      for (int col = 0; col < 3 && pc0 < 0; ++col) {
        if (M[0][col] != 0) pc0 = col;
        else if (M[1][col] != 0) {
          std::swap(M[0], M[1]);
          std::swap(rhs[0], rhs[1]);
          pc0 = col;
        }
      }
      if (pc0 < 0) continue;
      int f = E.mul(M[1][pc0], E.inv(M[0][pc0]));
      for (int col = 0; col < 3; ++col) M[1][col] = E.sub(M[1][col], E.mul(f, M[0][col]));
      rhs[1] = E.sub(rhs[1], E.mul(f, rhs[0]));
      int pc1 = -1;
      for (int col = pc0 + 1; col < 3; ++col)
        if (M[1][col] != 0) { pc1 = col; break; }
      if (pc1 < 0) continue;  // dependent rows: cannot happen for a frame
      int freec = 3 - pc0 - pc1;  // the remaining column index (0+1+2 = 3)
      for (int t = 0; t < Q; ++t) {
        Vec c3{{0, 0, 0}};
        c3.v[freec] = t;
        int num1 = E.sub(rhs[1], E.mul(M[1][freec], t));
        c3.v[pc1] = E.mul(num1, E.inv(M[1][pc1]));
        int num0 = E.sub(E.sub(rhs[0], E.mul(M[0][pc1], c3.v[pc1])), E.mul(M[0][freec], t));
        c3.v[pc0] = E.mul(num0, E.inv(M[0][pc0]));
        if (herm(c3, c3) != 0) continue;
        if (det3(c1, c2, c3) != 1) continue;
        ++count;
      }
    }
  }
  return count;
}

}  // namespace

long long count_points(LocalKind kind, int q) {
  if (kind == LocalKind::SL2) return count_sl2(q);
  return count_su3(q);
}

}  // namespace qsw
