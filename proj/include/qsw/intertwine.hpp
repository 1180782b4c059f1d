#pragma once

#include "qsw/galois_form.hpp"

namespace qsw::intertwine {

using galois_form::TwistContext;
using ratfun::FactorProduct;
using rootsys::WeylElement;

/// Frobenius orbit of positive coroots sitting over the inversion set of a
/// restricted Weyl element.  `members` are work.pos indices in cycle order;
/// `eps` is the sign the pinned dual automorphism picks up once around the
/// cycle; `form[a]` is the pairing of the orbit with xi(e_a), so the orbit's
/// zero/pole locus in the z-parameters is governed by the affine forms
/// sum_a form[a] z_a = const; `c` is that pairing at the z supplied.
struct DualOrbit {
  std::vector<int> members;
  int size = 1;
  int eps = +1;
  IntVec form;
  Rational c = 0;
};

/// Lift of the restricted simple reflection b_a to the working Weyl group:
/// the longest element of the sub-system spanned by the simple roots in
/// orbit a (a product of commuting reflections for an orthogonal orbit,
/// s_i s_j s_i per adjacent pair otherwise).
WeylElement lift_relative_simple(const TwistContext& ctx, int a);

/// Lift along a reduced word of the restricted element; the inversion set of
/// the lift is the full preimage of the restricted inversion set.
WeylElement lift_relative(const TwistContext& ctx, const WeylElement& w_rel);

/// Orbits of phi^frob_power on the inversion coroots of the lift of w_rel,
/// with cycle signs and pairings evaluated at xi(z).  Deterministic order
/// (by smallest member index).
std::vector<DualOrbit> dual_orbits(const TwistContext& ctx, const WeylElement& w_rel,
                                   const RatVec& z, int frob_power = 1);

/// Local intertwining factor at a place of degree place_degree for the
/// unramified character with parameter lambda = s xi(z), as an exact
/// rational function of u = q^{-s}:
///   prod over phi^deg-orbits O of  (1 - eps_O q_v^{-|O| - <lambda, S_O>})
///                                / (1 - eps_O q_v^{-<lambda, S_O>})
/// with q_v = q^deg and S_O the sum of the coroots in O.  Throws when
/// lambda lies on a singular hyperplane for the factor.
FactorProduct local_factor(const TwistContext& ctx, const WeylElement& w_rel,
                           const RatVec& z, int place_degree = 1);

/// Product of the local factors over all places of the function field fixed
/// by the datum (constant field size q, genus, numerator): each orbit
/// contributes the ratio L(c s) / L(c s + 1) of twisted constant-extension
/// zeta functions, c = <xi(z), gamma_vee>.
FactorProduct global_intertwiner(const TwistContext& ctx, const WeylElement& w_rel,
                                 const RatVec& z);

/// All constant-term summands: one global intertwiner per restricted Weyl
/// element, in enumeration order.
std::vector<std::pair<WeylElement, FactorProduct>> constant_term(const TwistContext& ctx,
                                                                 const RatVec& z);

/// Numeric truncated Euler product of the local factors over closed points
/// of degree <= max_degree (genus 0 curves only).
double euler_truncated(const TwistContext& ctx, const WeylElement& w_rel, const RatVec& z,
                       double s, int max_degree);

/// Behaviour of M(w0, s xi(z)) around s = 1 and along the walls z_a = 1.
struct PoleReport {
  int relative_rank = 0;
  /// Order at s = 1 along the ray z = (1,...,1); a pole of order r reads -r.
  long total_order = 0;
  /// Pole order carried by the wall z_a = 1, per restricted simple root.
  std::vector<long> simple_pole_orders;
  /// Orders at s = 1 of the orbit factors not supported on a wall z_a = 1
  /// (all expected to be regular, i.e. 0).
  std::vector<long> other_orders;
  /// True when the ray factorisation has no zero or pole with s in (1, 5/4].
  bool regular_right_of_one = false;
  /// Interval regularity is only decided for genus-0 data.
  bool interval_checked = false;
};
PoleReport pole_report(const TwistContext& ctx);

/// Exponents <rho, w sigma> of the spherical majorant: one per restricted
/// Weyl element, rho = xi(1,...,1), sigma = xi(sigma_z), invariant form
/// normalised so short roots have squared length 2.
std::vector<Rational> hecke_exponents(const TwistContext& ctx, const RatVec& sigma_z);

/// Exact strict comparison  sum_w q0^{-<rho, w sigma>} < sum_w q0^{-<rho, w rho>}
/// with q0 = q^{v0_degree}.
bool hecke_strictly_less(const TwistContext& ctx, const RatVec& sigma_z, int v0_degree = 1);

/// Sign of sum_i p^{ea_i} - sum_j p^{eb_j} for a prime p and rational
/// exponents, decided exactly (minimal-polynomial reduction detects the
/// zero case; otherwise rational interval bisection).
int power_sum_compare(long p, const std::vector<Rational>& ea, const std::vector<Rational>& eb);

/// Exact membership of sigma (restricted fundamental coordinates) in the
/// convex hull of the Weyl orbit of (1,...,1), decided by a rational
/// phase-one simplex feasibility run.
bool convex_hull_member(const TwistContext& ctx, const RatVec& sigma_z);

}  // namespace qsw::intertwine
