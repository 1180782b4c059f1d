#pragma once

#include "qsw/chevalley.hpp"
#include "qsw/ratfun.hpp"
#include "qsw/rootsys.hpp"

namespace qsw::galois_form {

using rootsys::IntMat;
using rootsys::RootSystem;
using rootsys::WeylElement;

/// Defining data of a quasi-split form over a function field: a split
/// series twisted by a diagram automorphism sigma, restricted along a
/// constant extension of degree res_degree, over a field with constant
/// field size q and the given curve invariants.
struct QuasiSplitDatum {
  rootsys::Series series = rootsys::Series::A;
  int rank = 1;
  std::vector<int> sigma;  // empty means identity
  int res_degree = 1;
  long q = 3;
  int genus = 0;
  std::vector<Rational> zeta_numerator;  // degree 2*genus, constant term 1

  void validate() const;
  std::vector<int> sigma_or_identity() const;
};

bool is_prime_power(long q, long* prime = nullptr, int* exponent = nullptr);

/// One class of working-system positive roots lying over a common
/// restricted root.
struct RelClass {
  RatVec proj;               // orbit-average, working root coordinates
  std::vector<int> members;  // indices into work.pos
  int indiv_index = -1;      // index into rel.pos of the indivisible root under proj
  int level = 1;             // proj == level * (indivisible relative root)
};

/// Rank-one type attached to a restricted simple root.
struct RankOneClass {
  enum class Kind { SL2, SU3 };
  Kind kind = Kind::SL2;
  int field_degree = 1;  // degree of the extension the rank-one group lives over
};

/// Everything derived from a QuasiSplitDatum: the working (product) root
/// system, the twisting automorphism phi with its pinned signs on the dual
/// system, and the restricted root table.
struct TwistContext {
  QuasiSplitDatum datum;
  RootSystem abs;        // one copy of the absolute system
  RootSystem work;       // res_degree copies
  RootSystem work_dual;  // transposed Cartan matrix: roots are the coroots
  std::vector<int> phi;  // twisting automorphism on working simples
  int phi_order = 1;
  chevalley::SignTable dual_signs;  // pinned signs of phi-hat on work_dual

  std::vector<int> simple_orbit;             // working simple -> orbit id
  std::vector<std::vector<int>> orbit_members;  // orbit id -> working simples
  int rel_rank = 0;
  IntMat cartan_rel;  // Cartan matrix of the indivisible restricted system
  /// Matrix governing the z-coordinate reflections: z_k -= z_a cartan_z[a][k].
  /// Diagonal conjugate of cartan_rel by the pairing weights m_a =
  /// <xi(e_a), beta_a^vee>; equal to cartan_rel only when all m_a coincide.
  IntMat cartan_z;
  RootSystem rel;  // indivisible restricted root system
  std::vector<RelClass> classes;
  std::vector<int> class_of_indiv;   // rel.pos index -> class index at level 1
  std::vector<int> double_of_indiv;  // rel.pos index -> class index at level 2, or -1

  std::vector<int> phi_workpos;   // image of each work.pos index under phi
  std::vector<int> dual_of_work;  // work.pos index -> work_dual.pos index of the coroot
  std::vector<RankOneClass> rank_one;  // indexed by orbit id

  /// lambda = xi(z): working fundamental coordinates with value z[orbit(i)]
  /// at simple i; xi(1,...,1) is rho of the working system.
  RatVec xi(const RatVec& z) const;
  /// <xi(z), gamma^vee> for the coroot of work.pos[j].
  Rational pairing(const RatVec& z, int work_pos_index) const;
  /// Pairing of xi(z) with the class; checked constant across members.
  Rational class_pairing(const RatVec& z, const RelClass& cls) const;
  /// Action of a restricted Weyl element on z (relative fundamental coords).
  RatVec z_action(const WeylElement& w, const RatVec& z) const;
  /// Sign of phi-hat on the coroot root vector of work.pos[j].
  int phi_sign(int work_pos_index) const;

  static TwistContext build(const QuasiSplitDatum& qd);
};

}  // namespace qsw::galois_form
