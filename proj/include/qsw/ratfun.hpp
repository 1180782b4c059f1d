#pragma once

#include "qsw/rational.hpp"

#include <complex>
#include <map>

namespace qsw::ratfun {

/// Exact root of unity e^{2 pi i j/m}, stored as the reduced fraction j/m in [0,1).
struct Zeta {
  long nm = 0;
  long dn = 1;

  Zeta() = default;
  Zeta(long j, long m);
  static Zeta one() { return Zeta(0, 1); }
  static Zeta minus_one() { return Zeta(1, 2); }

  bool is_one() const { return nm == 0; }
  bool is_real() const { return nm == 0 || 2 * nm == dn; }
  /// +1 or -1; throws when not real.
  int real_sign() const;
  Zeta inverse() const;
  Zeta mul(const Zeta& o) const;
  std::complex<double> value() const;

  auto operator<=>(const Zeta&) const = default;
};

/// One factor 1 - zeta q^a u^b with exact rational exponents, b >= 0.
struct AtomicFactor {
  Zeta zeta;
  Rational q_exp;  // a
  Rational u_exp;  // b

  bool operator<(const AtomicFactor& o) const;
  bool operator==(const AtomicFactor& o) const = default;
};

/// Polynomial factor P(q^a u^b) for user-supplied zeta numerators
/// (nonzero genus); coeffs[0] is the constant term and must equal 1.
struct PolyFactor {
  std::vector<Rational> coeffs;
  Rational q_exp;
  Rational u_exp;

  bool operator<(const PolyFactor& o) const;
  bool operator==(const PolyFactor& o) const = default;
};

/// Limit of (s-1)^r f at s=1 as rational_part * (log q)^{logq_exp}.
struct ExactLimit {
  Rational rational_part;
  long logq_exp = 0;

  double value(double q) const;
};

/// Product representation  scalar * phase * q^{mono_q} u^{mono_u}
///   * prod (1 - zeta q^a u^b)^e * prod P(q^a u^b)^e
/// with q kept symbolic; normalization keeps every atomic u-exponent >= 0,
/// flipping factors through 1 - z = -z (1 - 1/z) as needed.  Equality of
/// normalized representations is decidable memberwise.
struct FactorProduct {
  Rational scalar = 1;
  Zeta phase = Zeta::one();
  Rational mono_q = 0;
  Rational mono_u = 0;
  std::map<AtomicFactor, long> factors;
  std::map<PolyFactor, long> polys;

  static FactorProduct one();
  static FactorProduct atom(Zeta z, const Rational& a, const Rational& b, long e = 1);

  bool is_one() const;
  void mul_atom(Zeta z, Rational a, Rational b, long e);
  void mul_poly(const std::vector<Rational>& coeffs, const Rational& a, const Rational& b, long e);
  void multiply(const FactorProduct& o);
  FactorProduct inverse() const;
  FactorProduct power(long e) const;
  /// (q, u) -> (q^n, u^n); exact on the factored form.
  FactorProduct substitute_power(long n) const;

  bool operator==(const FactorProduct& o) const = default;

  std::complex<double> evaluate(double s, double q) const;
  /// Exact value at integer s (u = q^{-s}); requires every exponent
  /// combination integral and every zeta real.
  Rational evaluate_exact(const Rational& q, long s) const;

  /// Order of vanishing at s = 1 (negative = pole order).  For atomic
  /// factors the answer is independent of q; polynomial factors are
  /// evaluated exactly at u = 1/q.
  long order_at_s1(const Rational& q) const;
  /// Order at arbitrary rational s0 (atomic factors; polynomial factors
  /// require an integral exponent at s0).
  long order_at(const Rational& q, const Rational& s0) const;
  /// Values of s where some atomic factor vanishes (zeta = 1, s = a/b);
  /// requires polys to be absent.
  std::vector<Rational> zero_pole_svalues() const;
  /// lim_{s->1} (s-1)^r f; pre: order_at_s1(q) == -r.
  ExactLimit limit_at_s1(const Rational& q, long r) const;

  std::string to_string() const;
};

/// Zeta function of the constant-degree-n extension of a genus-g function
/// field with numerator polynomial P (default genus 0, P = 1):
///   P_n(u^n) / ((1 - u^n)(1 - q^n u^n))
/// where P_n is the degree-preserving norm transform of P (roots a -> a^n);
/// for n = 1 the numerator is inserted verbatim.
FactorProduct zeta_constant_extension(long q, int n, int genus = 0,
                                      const std::vector<Rational>& numerator = {});

/// Coefficients of prod_i (1 - eps a_i^k T) given P = prod_i (1 - a_i T),
/// eps in {+1,-1}; exact via Newton power sums.
std::vector<Rational> poly_norm_transform(const std::vector<Rational>& coeffs, int k, int eps);

/// Multiplicity of the root T0 in P (synthetic division).
int poly_root_multiplicity(const std::vector<Rational>& coeffs, const Rational& t0);
Rational poly_eval(const std::vector<Rational>& coeffs, const Rational& t0);

}  // namespace qsw::ratfun
