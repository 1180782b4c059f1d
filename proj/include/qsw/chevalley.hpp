#pragma once

#include "qsw/rootsys.hpp"

namespace qsw::chevalley {

using rootsys::RootSystem;

/// Bilinear 2-cocycle sign in {+1,-1}: exponent sum_{i,j} a_i b_j e(i,j)
/// mod 2 with e(i,i) = 1, e(i,j) = C_ij mod 2 for i < j, e(i,j) = 0 for
/// i > j.  On a simply-laced system this realizes Chevalley structure
/// constants: [X_a, X_b] = cocycle_sign(a,b) X_{a+b} whenever a + b is a
/// root.
int cocycle_sign(const RootSystem& rs, const IntVec& a, const IntVec& b);

/// Checks sigma is a permutation of the simple roots with
/// C[sigma(i)][sigma(j)] = C[i][j]; throws std::invalid_argument otherwise.
void validate_diagram_automorphism(const RootSystem& rs, const std::vector<int>& sigma);

/// Multiplicative order of a permutation of the simple roots.
int automorphism_order(const std::vector<int>& sigma);

/// Signs of the pinned Lie algebra automorphism extending the diagram
/// automorphism sigma: the map sends the root vector of pos[j] to
/// sign_pos[j] times the root vector of pos[sigma_pos[j]], with sign +1 on
/// every simple root vector.  Signs are derived recursively through
/// gamma = alpha_i + delta and checked independent of the decomposition.
struct SignTable {
  std::vector<int> sigma_simple;
  std::vector<int> sigma_pos;  // image index of each positive root
  std::vector<int> sign_pos;   // sign in {+1,-1}

  /// Accumulated sign of the t-th power of the automorphism on pos[j].
  int power_sign(int j, int t) const;
  int power_image(int j, int t) const;
};

SignTable pinned_signs(const RootSystem& rs, const std::vector<int>& sigma);

}  // namespace qsw::chevalley
