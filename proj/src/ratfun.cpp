#include "qsw/ratfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qsw::ratfun {

namespace {

long mod_positive(long x, long m) {
  long r = x % m;
  return r < 0 ? r + m : r;
}

Zeta zeta_pow(const Zeta& z, long e) {
  long nm = mod_positive(z.nm * e, z.dn);
  return Zeta(nm, z.dn);
}

std::string fmt_rational(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace

Zeta::Zeta(long j, long m) {
  if (m == 0) throw std::invalid_argument("zeta with zero denominator");
  if (m < 0) {
    m = -m;
    j = -j;
  }
  j = mod_positive(j, m);
  long g = std::gcd(j, m);
  if (g == 0) g = 1;
  nm = j / g;
  dn = m / g;
}

int Zeta::real_sign() const {
  if (nm == 0) return 1;
  if (2 * nm == dn) return -1;
  throw std::domain_error("root of unity is not real");
}

Zeta Zeta::inverse() const { return Zeta(dn - nm, dn); }

Zeta Zeta::mul(const Zeta& o) const { return Zeta(nm * o.dn + o.nm * dn, dn * o.dn); }

std::complex<double> Zeta::value() const {
  double t = 2.0 * M_PI * static_cast<double>(nm) / static_cast<double>(dn);
  return {std::cos(t), std::sin(t)};
}

bool AtomicFactor::operator<(const AtomicFactor& o) const {
  if (u_exp != o.u_exp) return u_exp < o.u_exp;
  if (q_exp != o.q_exp) return q_exp < o.q_exp;
  if (zeta.dn != o.zeta.dn) return zeta.dn < o.zeta.dn;
  return zeta.nm < o.zeta.nm;
}

bool PolyFactor::operator<(const PolyFactor& o) const {
  if (u_exp != o.u_exp) return u_exp < o.u_exp;
  if (q_exp != o.q_exp) return q_exp < o.q_exp;
  return coeffs < o.coeffs;
}

double ExactLimit::value(double q) const {
  return to_double(rational_part) * std::pow(std::log(q), static_cast<double>(logq_exp));
}

FactorProduct FactorProduct::one() { return FactorProduct{}; }

FactorProduct FactorProduct::atom(Zeta z, const Rational& a, const Rational& b, long e) {
  FactorProduct f;
  f.mul_atom(z, a, b, e);
  return f;
}

bool FactorProduct::is_one() const {
  return scalar == 1 && phase.is_one() && mono_q == 0 && mono_u == 0 && factors.empty() &&
         polys.empty();
}

void FactorProduct::mul_atom(Zeta z, Rational a, Rational b, long e) {
  if (e == 0) return;
  if (b == 0 && a == 0 && z.is_one())
    throw std::domain_error("vanishing atomic factor (1 - 1)");
  bool flip = (b < 0) || (b == 0 && a < 0) || (b == 0 && a == 0 && 2 * z.nm > z.dn);
  if (flip) {
    // 1 - z q^a u^b  =  (-z) q^a u^b (1 - z^{-1} q^{-a} u^{-b})
    phase = phase.mul(zeta_pow(z.mul(Zeta::minus_one()), e));
    mono_q += a * Rational(e);
    mono_u += b * Rational(e);
    z = z.inverse();
    a = -a;
    b = -b;
  }
  AtomicFactor key{z, a, b};
  long& slot = factors[key];
  slot += e;
  if (slot == 0) factors.erase(key);
  if (phase.is_real()) {
    scalar *= phase.real_sign();
    phase = Zeta::one();
  }
}

void FactorProduct::mul_poly(const std::vector<Rational>& coeffs, const Rational& a,
                             const Rational& b, long e) {
  if (e == 0) return;
  if (coeffs.empty() || coeffs.front() != 1)
    throw std::invalid_argument("polynomial factor must have constant term 1");
  if (coeffs.back() == 0) throw std::invalid_argument("polynomial factor with zero leading term");
  if (coeffs.size() == 1) return;  // constant 1
  PolyFactor key{coeffs, a, b};
  long& slot = polys[key];
  slot += e;
  if (slot == 0) polys.erase(key);
}

void FactorProduct::multiply(const FactorProduct& o) {
  if (o.scalar == 0) throw std::invalid_argument("zero scalar in factor product");
  scalar *= o.scalar;
  phase = phase.mul(o.phase);
  if (phase.is_real()) {
    scalar *= phase.real_sign();
    phase = Zeta::one();
  }
  mono_q += o.mono_q;
  mono_u += o.mono_u;
  for (const auto& [k, e] : o.factors) {
    long& slot = factors[k];
    slot += e;
    if (slot == 0) factors.erase(k);
  }
  for (const auto& [k, e] : o.polys) {
    long& slot = polys[k];
    slot += e;
    if (slot == 0) polys.erase(k);
  }
}

FactorProduct FactorProduct::inverse() const { return power(-1); }

FactorProduct FactorProduct::power(long e) const {
  FactorProduct r;
  if (e == 0) return r;
  r.scalar = rpow(scalar, e);
  r.phase = zeta_pow(phase, e);
  if (r.phase.is_real()) {
    r.scalar *= r.phase.real_sign();
    r.phase = Zeta::one();
  }
  r.mono_q = mono_q * Rational(e);
  r.mono_u = mono_u * Rational(e);
  for (const auto& [k, ex] : factors) r.factors[k] = ex * e;
  for (const auto& [k, ex] : polys) r.polys[k] = ex * e;
  return r;
}

FactorProduct FactorProduct::substitute_power(long n) const {
  if (n < 1) throw std::invalid_argument("substitute_power needs n >= 1");
  FactorProduct r;
  r.scalar = scalar;
  r.phase = phase;
  r.mono_q = mono_q * Rational(n);
  r.mono_u = mono_u * Rational(n);
  for (const auto& [k, e] : factors)
    r.factors[AtomicFactor{k.zeta, k.q_exp * Rational(n), k.u_exp * Rational(n)}] = e;
  for (const auto& [k, e] : polys)
    r.polys[PolyFactor{k.coeffs, k.q_exp * Rational(n), k.u_exp * Rational(n)}] = e;
  return r;
}

std::complex<double> FactorProduct::evaluate(double s, double q) const {
  std::complex<double> acc = to_double(scalar) * phase.value();
  acc *= std::pow(q, to_double(mono_q) - s * to_double(mono_u));
  for (const auto& [k, e] : factors) {
    std::complex<double> v =
        1.0 - k.zeta.value() * std::pow(q, to_double(k.q_exp) - s * to_double(k.u_exp));
    acc *= std::pow(v, static_cast<double>(e));
  }
  for (const auto& [k, e] : polys) {
    double t = std::pow(q, to_double(k.q_exp) - s * to_double(k.u_exp));
    std::complex<double> v = 0.0;
    for (auto it = k.coeffs.rbegin(); it != k.coeffs.rend(); ++it) v = v * t + to_double(*it);
    acc *= std::pow(v, static_cast<double>(e));
  }
  return acc;
}

namespace {

Rational exact_q_power(const Rational& q, const Rational& expo) {
  if (!is_integer(expo)) throw std::domain_error("non-integral exponent in exact evaluation");
  return rpow(q, to_long(expo));
}

}  // namespace

Rational FactorProduct::evaluate_exact(const Rational& q, long s) const {
  if (q <= 0) throw std::invalid_argument("q must be positive");
  Rational acc = scalar * phase.real_sign();
  acc *= exact_q_power(q, mono_q - Rational(s) * mono_u);
  for (const auto& [k, e] : factors) {
    Rational v = 1 - Rational(k.zeta.real_sign()) * exact_q_power(q, k.q_exp - Rational(s) * k.u_exp);
    if (v == 0) throw std::domain_error("exact evaluation at a zero/pole");
    acc *= rpow(v, e);
  }
  for (const auto& [k, e] : polys) {
    Rational t = exact_q_power(q, k.q_exp - Rational(s) * k.u_exp);
    Rational v = poly_eval(k.coeffs, t);
    if (v == 0) throw std::domain_error("exact evaluation at a zero/pole");
    acc *= rpow(v, e);
  }
  return acc;
}

long FactorProduct::order_at_s1(const Rational& q) const { return order_at(q, 1); }

long FactorProduct::order_at(const Rational& q, const Rational& s0) const {
  long ord = 0;
  for (const auto& [k, e] : factors)
    if (k.zeta.is_one() && k.q_exp == k.u_exp * s0) ord += e;
  for (const auto& [k, e] : polys) {
    Rational t0 = exact_q_power(q, k.q_exp - k.u_exp * s0);
    ord += e * poly_root_multiplicity(k.coeffs, t0);
  }
  return ord;
}

std::vector<Rational> FactorProduct::zero_pole_svalues() const {
  if (!polys.empty())
    throw std::logic_error("zero_pole_svalues with polynomial factors present");
  std::vector<Rational> out;
  for (const auto& [k, e] : factors) {
    (void)e;
    if (k.zeta.is_one() && k.u_exp != 0) out.push_back(k.q_exp / k.u_exp);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExactLimit FactorProduct::limit_at_s1(const Rational& q, long r) const {
  ExactLimit lim;
  lim.rational_part = scalar * phase.real_sign();
  lim.rational_part *= exact_q_power(q, mono_q - mono_u);
  for (const auto& [k, e] : factors) {
    if (k.zeta.is_one() && k.q_exp == k.u_exp) {
      // 1 - q^{b(1-s)} = b log(q) (s-1) (1 + O(s-1))
      lim.rational_part *= rpow(k.u_exp, e);
      lim.logq_exp += e;
    } else {
      Rational v =
          1 - Rational(k.zeta.real_sign()) * exact_q_power(q, k.q_exp - k.u_exp);
      lim.rational_part *= rpow(v, e);
    }
  }
  for (const auto& [k, e] : polys) {
    Rational t0 = exact_q_power(q, k.q_exp - k.u_exp);
    int mu = poly_root_multiplicity(k.coeffs, t0);
    if (mu == 0) {
      lim.rational_part *= rpow(poly_eval(k.coeffs, t0), e);
    } else {
      // P(T) = (T - t0)^mu Q(T), and T - t0 = -b t0 log(q)(s-1)(1 + O(s-1)).
      std::vector<Rational> quot = k.coeffs;
      for (int i = 0; i < mu; ++i) {
        // synthetic division by (T - t0), ascending coefficients
        std::vector<Rational> next(quot.size() - 1);
        Rational carry = 0;
        for (size_t j = quot.size(); j-- > 1;) {
          carry = carry * t0 + quot[j];
          next[j - 1] = carry;
        }
        quot = next;
      }
      Rational qv = poly_eval(quot, t0);
      lim.rational_part *= rpow(qv * rpow(-k.u_exp * t0, mu), e);
      lim.logq_exp += static_cast<long>(mu) * e;
    }
  }
  if (lim.logq_exp != -r)
    throw std::domain_error("limit_at_s1: order at s=1 does not match requested r");
  return lim;
}

std::string FactorProduct::to_string() const {
  std::ostringstream os;
  os << "(" << fmt_rational(scalar) << ")";
  if (!phase.is_one()) os << " zeta[" << phase.nm << "/" << phase.dn << "]";
  if (mono_q != 0) os << " q^(" << fmt_rational(mono_q) << ")";
  if (mono_u != 0) os << " u^(" << fmt_rational(mono_u) << ")";
  for (const auto& [k, e] : factors) {
    os << " (1 ";
    if (k.zeta.is_one())
      os << "- ";
    else if (k.zeta.is_real())
      os << "+ ";
    else
      os << "- zeta[" << k.zeta.nm << "/" << k.zeta.dn << "] ";
    bool printed = false;
    if (k.q_exp != 0) {
      os << "q^(" << fmt_rational(k.q_exp) << ")";
      printed = true;
    }
    if (k.u_exp != 0) {
      if (printed) os << " ";
      os << "u^(" << fmt_rational(k.u_exp) << ")";
      printed = true;
    }
    if (!printed) os << "1";
    os << ")";
    if (e != 1) os << "^" << e;
  }
  for (const auto& [k, e] : polys) {
    os << " P[";
    for (size_t j = 0; j < k.coeffs.size(); ++j) {
      if (j) os << ",";
      os << fmt_rational(k.coeffs[j]);
    }
    os << "](q^(" << fmt_rational(k.q_exp) << ") u^(" << fmt_rational(k.u_exp) << "))";
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

FactorProduct zeta_constant_extension(long q, int n, int genus,
                                      const std::vector<Rational>& numerator) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (n < 1) throw std::invalid_argument("extension degree must be >= 1");
  if (genus < 0) throw std::invalid_argument("negative genus");
  if (genus == 0) {
    if (!(numerator.empty() || numerator == std::vector<Rational>{1}))
      throw std::invalid_argument("genus 0 admits only the trivial numerator");
  } else {
    if (numerator.size() != static_cast<size_t>(2 * genus + 1) || numerator.front() != 1)
      throw std::invalid_argument("numerator must have degree 2*genus and constant term 1");
  }
  FactorProduct f;
  f.mul_atom(Zeta::one(), 0, n, -1);
  f.mul_atom(Zeta::one(), n, n, -1);
  if (genus > 0) {
    std::vector<Rational> pn = (n == 1) ? numerator : poly_norm_transform(numerator, n, 1);
    f.mul_poly(pn, 0, n, 1);
  }
  return f;
}

std::vector<Rational> poly_norm_transform(const std::vector<Rational>& coeffs, int k, int eps) {
  if (coeffs.empty() || coeffs.front() != 1)
    throw std::invalid_argument("norm transform needs constant term 1");
  if (coeffs.back() == 0) throw std::invalid_argument("norm transform needs nonzero leading term");
  if (k < 1 || (eps != 1 && eps != -1)) throw std::invalid_argument("bad norm transform parameters");
  const long d = static_cast<long>(coeffs.size()) - 1;
  if (d == 0) return coeffs;
  // Elementary symmetric functions of the inverse roots a_i: e_j = (-1)^j c_j.
  std::vector<Rational> e(static_cast<size_t>(d) + 1, 0);
  for (long j = 0; j <= d; ++j) e[j] = (j % 2 == 0 ? coeffs[j] : -coeffs[j]);
  // Power sums p_1 .. p_{k d} by Newton's identity.
  std::vector<Rational> p(static_cast<size_t>(k) * d + 1, 0);
  for (long m = 1; m <= k * d; ++m) {
    Rational acc = 0;
    for (long i = 1; i < m; ++i) {
      if (i <= d && e[i] != 0) {
        Rational term = e[i] * p[m - i];
        acc += (i % 2 == 1 ? term : -term);
      }
    }
    if (m <= d) acc += Rational((m % 2 == 1) ? m : -m) * e[m];
    p[m] = acc;
  }
  // Transformed power sums and back through Newton.
  std::vector<Rational> pt(static_cast<size_t>(d) + 1, 0);
  for (long m = 1; m <= d; ++m) {
    pt[m] = p[static_cast<size_t>(k) * m];
    if (eps == -1 && m % 2 == 1) pt[m] = -pt[m];
  }
  std::vector<Rational> et(static_cast<size_t>(d) + 1, 0);
  et[0] = 1;
  for (long m = 1; m <= d; ++m) {
    Rational acc = pt[m];
    for (long i = 1; i < m; ++i) {
      Rational term = et[i] * pt[m - i];
      acc -= (i % 2 == 1 ? term : -term);
    }
    et[m] = acc / Rational(m % 2 == 1 ? m : -m);
  }
  std::vector<Rational> out(static_cast<size_t>(d) + 1, 0);
  for (long j = 0; j <= d; ++j) out[j] = (j % 2 == 0 ? et[j] : -et[j]);
  return out;
}

Rational poly_eval(const std::vector<Rational>& coeffs, const Rational& t0) {
  Rational v = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t0 + *it;
  return v;
}

int poly_root_multiplicity(const std::vector<Rational>& coeffs, const Rational& t0) {
  std::vector<Rational> cur = coeffs;
  int mu = 0;
  while (cur.size() > 1 && poly_eval(cur, t0) == 0) {
    std::vector<Rational> next(cur.size() - 1);
    Rational carry = 0;
    for (size_t j = cur.size(); j-- > 1;) {
      carry = carry * t0 + cur[j];
      next[j - 1] = carry;
    }
    cur = next;
    ++mu;
  }
  return mu;
}

}  // namespace qsw::ratfun
