#pragma once
// Equal-characteristic local fields in miniature: small finite fields with
// table-driven arithmetic, truncated Laurent series over them, a constructive
// Iwasawa (triangularization) reduction inside SL_n(O), valuation-shell
// enumeration of the rank-one local integrals, and brute-force point counts.
// Everything here is an independent numeric oracle: no result from the
// symbolic engine is assumed.

#include <cstdint>
#include <string>
#include <vector>

namespace qsw {

// ---------------------------------------------------------------------------
// Finite fields
// ---------------------------------------------------------------------------

// A finite field with q <= 1000 elements and full arithmetic tables.
// Elements are integer codes in [0, q); code 0 is the additive identity and
// code 1 the multiplicative identity.  For F_{p^d} built by
// make_prime_power_field the code is the base-p digit expansion of the
// residue polynomial.  For quadratic extensions built by
// make_quadratic_extension the code is a + base_q * b for the element
// a + b*sqrt(eps); the base field embeds as the codes below base_q.
struct Field {
  int p = 0;       // characteristic
  int q = 0;       // number of elements
  int base_q = 0;  // for quadratic extensions: size of the base field (else 0)
  int eps = 0;     // for quadratic extensions: the non-square used (else 0)
  std::vector<int> add_t, mul_t, neg_t, inv_t, conj_t, frob_t;

  int add(int a, int b) const { return add_t[a * q + b]; }
  int mul(int a, int b) const { return mul_t[a * q + b]; }
  int neg(int a) const { return neg_t[a]; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int inv(int a) const;  // throws on 0
  int conj(int a) const { return conj_t[a]; }  // identity unless quadratic ext
  int frob(int a) const { return frob_t[a]; }  // x -> x^p
  int pow(int a, long long e) const;
  bool has_conj() const { return base_q != 0; }
};

Field make_prime_power_field(int p, int d);
// Requires odd base field; returns F_{q^2} = F_q(sqrt(eps)) with conj the
// nontrivial automorphism over the base.
Field make_quadratic_extension(const Field& base);

// ---------------------------------------------------------------------------
// Truncated Laurent series
// ---------------------------------------------------------------------------

// Coefficients are stored for every exponent in [val, prec); exponents >= prec
// are unknown.  Invariant: either coeffs is empty (the element is zero modulo
// t^prec, and val == prec) or coeffs[0] != 0.
struct LSeries {
  const Field* F = nullptr;
  int val = 0;
  int prec = 0;
  std::vector<int> c;

  bool is_zero() const { return c.empty(); }
  int known_terms() const { return prec - val; }
  // Throws if the element is zero modulo t^prec (valuation undecidable).
  int valuation() const;
  int coeff(int exp) const;  // 0 outside the stored window; throws if exp >= prec
  std::string to_string() const;
};

LSeries ls_zero(const Field& F, int prec);
LSeries ls_const(const Field& F, int code, int prec);
// code * t^exp
LSeries ls_term(const Field& F, int code, int exp, int prec);
// digits[i] is the coefficient of t^{val+i}; trailing window is exact zeros.
LSeries ls_make(const Field& F, int val, const std::vector<int>& digits, int prec);

LSeries ls_add(const LSeries& a, const LSeries& b);
LSeries ls_sub(const LSeries& a, const LSeries& b);
LSeries ls_neg(const LSeries& a);
LSeries ls_mul(const LSeries& a, const LSeries& b);
LSeries ls_scale(int code, const LSeries& a);
// Multiplicative inverse; throws if the leading coefficient is undecidable.
LSeries ls_inv(const LSeries& a);
// Coefficient-wise conj (the field automorphism extended with t fixed).
LSeries ls_conj(const LSeries& a);
bool ls_equal(const LSeries& a, const LSeries& b);  // on the common known window

// ---------------------------------------------------------------------------
// Matrices and the Iwasawa reduction
// ---------------------------------------------------------------------------

using LMat = std::vector<std::vector<LSeries>>;

LMat lmat_identity(const Field& F, int n, int prec);
LMat lmat_mul(const LMat& a, const LMat& b);
LMat lmat_conj_transpose(const LMat& a);
bool lmat_equal(const LMat& a, const LMat& b);

struct IwasawaResult {
  std::vector<int> diag_val;  // valuations of the triangularized diagonal
  LMat upper;                 // g * k, upper triangular
  LMat k;                     // the accumulated integral column-operation matrix
};

// Right-multiplies g by integral unimodular column operations until it is
// upper triangular; returns the diagonal valuations and the witnesses.
// Throws if a pivot valuation is undecidable at the working precision.
IwasawaResult iwasawa_reduce(const LMat& g);

// A-part valuation m for w0^{-1} n(x) in SL2: f_s = q^{-m(s+1)}.
int iwasawa_valuation_sl2(const LSeries& x);

// SU3 with the antidiagonal Hermitian form J (ones on the antidiagonal):
// n(x,y) upper unipotent with second superdiagonal -conj(x) and corner y,
// subject to y + conj(y) + x*conj(x) = 0.  Returns the A-part valuation m
// of w0^{-1} n(x,y): f_s = (q^2)^{-m(s+1)}.  Throws if the unipotent
// constraint fails or precision is insufficient.
int iwasawa_valuation_su3(const LSeries& x, const LSeries& y);

// Builders exposed for tests.
LMat sl2_w0inv_n(const LSeries& x);
LMat su3_w0inv_n(const LSeries& x, const LSeries& y);
// y = -x*conj(x)/2 + z*sqrt(eps) with z a series over the base subfield
// (coefficients of z must be base-field codes).
LSeries su3_y_from(const LSeries& x, const LSeries& z);
// Checks conj(g)^T J g = J on the known window.
bool su3_member(const LMat& g);

// ---------------------------------------------------------------------------
// Shell integrals and point counts
// ---------------------------------------------------------------------------

enum class LocalKind { SL2, SU3 };

struct ShellParams {
  int samples = 10;      // representatives decomposed per valuation shell
  int tail_checks = 2;   // per-representative deep-tail perturbation checks
  unsigned seed = 20240915u;
  int guard = 6;         // extra precision digits beyond the shell depth
};

// Valuation-shell enumeration of the local intertwining integral applied to
// the spherical vector, with vol(O) = 1.  Shells are enumerated exhaustively
// by valuation; within each shell the integrand is evaluated at sampled
// representatives through the constructive Iwasawa reduction and required to
// be constant (any disagreement, including under tail perturbation, throws).
// depth 0 returns the integral-points contribution, exactly 1.
// SU3 requires odd q.
double shell_integral(LocalKind kind, int q, double s, int depth,
                      const ShellParams& params = ShellParams{});

// Exhaustive SL2(F_q) enumeration / column-frame SU3(F_q) enumeration.
long long count_points(LocalKind kind, int q);

}  // namespace qsw
