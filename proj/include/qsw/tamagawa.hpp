#pragma once

#include "qsw/galois_form.hpp"

#include <array>
#include <string>

namespace qsw::tamagawa {

using galois_form::QuasiSplitDatum;
using ratfun::FactorProduct;

/// Character-lattice data of the maximal torus of a quasi-split datum: the
/// torus is a product of norm-one-free induced tori, one per Galois orbit of
/// fundamental weights, living over constant extensions of these degrees.
struct TorusDatum {
  std::vector<int> orbit_degrees;  // sorted descending; one entry per orbit

  int relative_rank() const { return static_cast<int>(orbit_degrees.size()); }
};

TorusDatum torus_from_group(const QuasiSplitDatum& d);

/// Product of the constant-extension zeta functions of the orbit fields:
/// the L-function of the torus character lattice.  Pole order at s = 1 is
/// the relative rank.
FactorProduct artin_L(const TorusDatum& t, long q, int genus = 0,
                      const std::vector<Rational>& numerator = {});

/// Local convergence factor at a place of degree place_degree:
/// prod_i (1 - q_v^{-n_i/g_i})^{g_i} with g_i = gcd(n_i, place_degree),
/// q_v = q^place_degree; the inverse of the local L-value at s = 1.
Rational local_c_v(const TorusDatum& t, long q, int place_degree);

/// Numeric local L-factor at a degree-d place evaluated at real s.
double local_artin_value(const TorusDatum& t, long q, int place_degree, double s);

/// Number of closed points of the given degree on the projective line.
long closed_point_count(long q, int degree);

/// Formal product of the constants the cancellation chain manipulates:
/// a rational scalar times q^{q_exp} (log q)^{log_exp} RES^{res_exp}
/// VOL^{vol_exp} IDX^{idx_exp} TAU_A^{tau_a_exp}, where RES is the residue
/// at s = 1 of the torus L-function, VOL the volume of the norm-one adelic
/// class space of the torus, IDX the lattice index from the logarithm map,
/// and TAU_A the Tamagawa number of the torus.
struct SymbolicConstant {
  Rational scalar = 1;
  Rational q_exp = 0;
  long log_exp = 0;
  long res_exp = 0;
  long vol_exp = 0;
  long idx_exp = 0;
  long tau_a_exp = 0;

  static SymbolicConstant one() { return {}; }
  static SymbolicConstant q_power(const Rational& e);
  static SymbolicConstant log_power(long e);
  static SymbolicConstant res(long e = 1);
  static SymbolicConstant vol(long e = 1);
  static SymbolicConstant idx(long e = 1);
  static SymbolicConstant tau_a(long e = 1);

  SymbolicConstant mul(const SymbolicConstant& o) const;
  SymbolicConstant inverse() const;
  SymbolicConstant pow(long e) const;
  bool operator==(const SymbolicConstant& o) const = default;
  std::string to_string() const;
};

/// The measure constant relating the torus coordinate measure to the adelic
/// one: IDX / VOL (the (log q / 2 pi)^r coordinate factor is tracked in the
/// chain separately).
SymbolicConstant measure_constant_c(const TorusDatum& t);

struct ChainStep {
  std::string label;
  SymbolicConstant value;
};

/// Exponent ledger of a symbolic constant in the fixed atom order
/// (q, log q, RES, VOL, IDX, TAU_A).
using ExponentLedger = std::array<Rational, 6>;

/// Symbolic cancellation chain for the Tamagawa number of the group: starts
/// from the residue identity for the longest intertwining operator, removes
/// the measure constants, and reduces to the single axiom TAU_A = 1.
struct ChainReport {
  TorusDatum torus;
  long dim_a = 0;   // dimension of the maximal torus
  long dim_n = 0;   // dimension of the unipotent radical of the Borel
  long dim_g = 0;   // dim_a + 2 dim_n
  int genus = 0;
  int relative_rank = 0;
  long verified_pole_order = 0;
  std::vector<ChainStep> steps;
  SymbolicConstant final_constant;  // expected: the single atom TAU_A
  ExponentLedger ledger{};          // expected: (0, 0, 0, 0, 0, 1)
  std::vector<std::string> assumptions;
  Rational tau_value = 0;  // 1 once the axiom is applied
  bool certified = false;

  std::string to_text() const;
};

/// Run the chain.  verified_pole_order is the independently computed order
/// of the pole of the longest intertwining operator at s = 1 (a positive
/// integer); it must equal the relative rank or the chain refuses to start.
ChainReport tau_chain(const QuasiSplitDatum& d, long verified_pole_order);

}  // namespace qsw::tamagawa
