#pragma once

#include "qsw/rational.hpp"

#include <map>
#include <optional>

namespace qsw::rootsys {

enum class Series : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E', F = 'F', G = 'G' };

Series series_from_char(char c);

using IntMat = std::vector<IntVec>;
using RatMat = std::vector<RatVec>;

/// Cartan matrix of the named series at the given rank, convention
/// C[i][j] = <alpha_i, alpha_j^vee>.  Rank bounds: A n>=1, B/C n>=2,
/// D n>=3, E 6..8, F 4, G 2.
IntMat cartan_matrix(Series s, int rank);

struct CartanDatum {
  Series series;
  int rank = 0;
  IntMat cartan;

  static CartanDatum make(Series s, int rank);
  /// Throws if the stored matrix differs from the generated table.
  void validate() const;
};

/// Exact root-system tables built from a valid finite-type Cartan matrix
/// (possibly decomposable, e.g. several copies of one simple factor).
/// Roots are integer vectors in the simple-root basis; the bilinear form is
/// normalized so short roots have squared length 2.
struct RootSystem {
  IntMat cartan;        // C[i][j] = <alpha_i, alpha_j^vee>
  int rank = 0;
  IntVec d;             // half squared lengths (alpha_i,alpha_i)/2, min 1
  std::vector<IntVec> pos;          // positive roots, by height then lex
  std::vector<IntVec> pos_coroot;   // matching coroots, simple-coroot coords
  std::vector<long> ht;             // root height
  std::vector<long> coht;           // coroot height
  std::map<IntVec, int> index;      // positive root vector -> index
  RatMat cartan_inv;

  static RootSystem build(const IntMat& cartan);

  int n_pos() const { return static_cast<int>(pos.size()); }

  /// <x, alpha_j^vee> for x in root coords.
  long pair_root_coroot(const IntVec& x, int j) const;
  /// s_i(x) for x in root coords.
  IntVec reflect_root(int i, const IntVec& x) const;
  /// Index into pos[] (roots only; throws if x is not +- a positive root);
  /// second member is true when x is negative.
  std::pair<int, bool> locate_root(const IntVec& x) const;
  bool is_root(const IntVec& x) const;

  /// W-invariant form on root-coordinate vectors, short roots length^2 = 2.
  Rational form(const RatVec& x, const RatVec& y) const;

  // Weight coordinates: fundamental-weight basis <-> simple-root basis.
  RatVec fund_to_root(const RatVec& c) const;
  RatVec root_to_fund(const RatVec& x) const;
  RatVec rho_fund() const;  // all ones
  /// <lambda, gamma^vee> with lambda in fundamental-weight coords and
  /// gamma^vee in simple-coroot coords.
  Rational pair_weight_coroot(const RatVec& lam, const IntVec& coroot) const;

  /// Highest root (unique positive root of maximal height; throws when the
  /// system is decomposable and the maximum is ambiguous).
  IntVec highest_root() const;
};

/// Weyl-group element as a signed permutation of the positive-root table
/// plus one reduced-by-construction word (word[0] acts last on vectors).
struct WeylElement {
  std::vector<int> img;   // img[j] = index of +-w(pos[j])
  std::vector<char> neg;  // neg[j] = 1 iff w(pos[j]) is negative
  std::vector<int> word;

  bool is_identity() const;
  bool operator==(const WeylElement& o) const { return img == o.img && neg == o.neg; }
};

WeylElement weyl_identity(const RootSystem& rs);
WeylElement weyl_simple(const RootSystem& rs, int i);
/// Composition a*b acting as (a*b)(v) = a(b(v)).
WeylElement weyl_compose(const RootSystem& rs, const WeylElement& a, const WeylElement& b);
WeylElement weyl_from_word(const RootSystem& rs, const std::vector<int>& word);
/// Apply to an arbitrary vector in root coords via the stored word.
RatVec weyl_apply(const RootSystem& rs, const WeylElement& w, const RatVec& x);
/// Indices of positive roots sent to negative ones.
std::vector<int> inversion_set(const RootSystem& rs, const WeylElement& w);
long weyl_length(const RootSystem& rs, const WeylElement& w);
/// Longest element via greedy descent from rho; word length equals #pos.
WeylElement longest_element(const RootSystem& rs);
/// A reduced word extracted by stripping descents (length == #inversions).
std::vector<int> reduced_word(const RootSystem& rs, const WeylElement& w);

/// All Weyl group elements by breadth-first search over the Cayley graph;
/// the stored words are reduced.  Throws when the group exceeds cap.
std::vector<WeylElement> enumerate_weyl(const RootSystem& rs, size_t cap = 51840);

}  // namespace qsw::rootsys
