#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsw/chevalley.hpp"

using namespace qsw;
using namespace qsw::rootsys;
using namespace qsw::chevalley;

namespace {

RootSystem make(Series s, int rank) { return RootSystem::build(cartan_matrix(s, rank)); }

IntMat block_diag(const IntMat& a, const IntMat& b) {
  int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
  IntMat c(n + m, IntVec(n + m, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[i][j] = a[i][j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) c[n + i][n + j] = b[i][j];
  return c;
}

// sign(g) sign(d) eps(sg, sd) == eps(g, d) sign(g+d) whenever g + d is a root:
// the pinned map respects brackets of positive root vectors.
void check_bracket_property(const RootSystem& rs, const SignTable& st) {
  int checked = 0;
  for (int a = 0; a < rs.n_pos(); ++a)
    for (int b = 0; b < rs.n_pos(); ++b) {
      IntVec sum(rs.rank);
      for (int i = 0; i < rs.rank; ++i) sum[i] = rs.pos[a][i] + rs.pos[b][i];
      if (!rs.is_root(sum)) continue;
      auto [sj, neg] = rs.locate_root(sum);
      REQUIRE(!neg);
      IntVec sa(rs.rank), sb(rs.rank);
      for (int i = 0; i < rs.rank; ++i) {
        sa[st.sigma_simple[i]] = rs.pos[a][i];
        sb[st.sigma_simple[i]] = rs.pos[b][i];
      }
      int lhs = st.sign_pos[a] * st.sign_pos[b] * cocycle_sign(rs, sa, sb);
      int rhs = cocycle_sign(rs, rs.pos[a], rs.pos[b]) * st.sign_pos[sj];
      CHECK(lhs == rhs);
      ++checked;
    }
  CHECK(checked > 0);
}

}  // namespace

TEST_CASE("cocycle antisymmetry law on simply-laced systems") {
  for (auto [series, rank] : {std::pair{Series::A, 3}, {Series::D, 4}, {Series::E, 6}}) {
    RootSystem rs = make(series, rank);
    for (int a = 0; a < rs.n_pos(); ++a) {
      // eps(x, x) = (-1)^{(x,x)/2} = -1 on roots
      CHECK(cocycle_sign(rs, rs.pos[a], rs.pos[a]) == -1);
      for (int b = 0; b < rs.n_pos(); ++b) {
        RatVec ra(rs.pos[a].begin(), rs.pos[a].end());
        RatVec rb(rs.pos[b].begin(), rs.pos[b].end());
        Rational pairing = rs.form(ra, rb);
        int want = (to_long(pairing) % 2 == 0) ? 1 : -1;
        CHECK(cocycle_sign(rs, rs.pos[a], rs.pos[b]) *
                  cocycle_sign(rs, rs.pos[b], rs.pos[a]) ==
              want);
      }
    }
  }
}

TEST_CASE("pinned signs for the order-2 twist of A2") {
  RootSystem rs = make(Series::A, 2);
  SignTable st = pinned_signs(rs, {1, 0});
  auto [th, neg] = rs.locate_root({1, 1});
  REQUIRE(!neg);
  CHECK(st.sign_pos[th] == -1);        // highest root vector changes sign
  CHECK(st.sigma_pos[th] == th);       // ... while the root itself is fixed
  for (int i = 0; i < 2; ++i) {
    auto [si, sneg] = rs.locate_root(IntVec{i == 0, i == 1});
    REQUIRE(!sneg);
    CHECK(st.sign_pos[si] == 1);
  }
  check_bracket_property(rs, st);
}

TEST_CASE("pinned signs for the order-2 twist of A3") {
  RootSystem rs = make(Series::A, 3);
  SignTable st = pinned_signs(rs, {2, 1, 0});
  auto [th, neg] = rs.locate_root({1, 1, 1});
  REQUIRE(!neg);
  CHECK(st.sign_pos[th] == 1);  // fixed highest root vector keeps its sign
  CHECK(st.sigma_pos[th] == th);
  check_bracket_property(rs, st);
}

TEST_CASE("pinned signs for A4 and A5 flips satisfy the bracket law") {
  RootSystem a4 = make(Series::A, 4);
  check_bracket_property(a4, pinned_signs(a4, {3, 2, 1, 0}));
  RootSystem a5 = make(Series::A, 5);
  check_bracket_property(a5, pinned_signs(a5, {4, 3, 2, 1, 0}));
}

TEST_CASE("triality of D4 has order three") {
  RootSystem rs = make(Series::D, 4);
  std::vector<int> tri = {2, 1, 3, 0};
  CHECK(automorphism_order(tri) == 3);
  SignTable st = pinned_signs(rs, tri);  // internal checks: power^3 = id
  check_bracket_property(rs, st);
  // order-2 flip of the fork
  SignTable fl = pinned_signs(rs, {0, 1, 3, 2});
  check_bracket_property(rs, fl);
}

TEST_CASE("order-2 twist of E6") {
  RootSystem rs = make(Series::E, 6);
  // Bourbaki flip: 1<->6, 3<->5, fixes 2 and 4 (zero-based: 0<->5, 2<->4).
  std::vector<int> flip = {5, 1, 4, 3, 2, 0};
  SignTable st = pinned_signs(rs, flip);
  check_bracket_property(rs, st);
  int minus = 0;
  for (int s : st.sign_pos)
    if (s == -1) ++minus;
  CHECK(minus > 0);
}

TEST_CASE("identity automorphism gives all +1 on any system") {
  for (auto [series, rank] :
       {std::pair{Series::G, 2}, {Series::F, 4}, {Series::B, 3}, {Series::C, 3}}) {
    RootSystem rs = make(series, rank);
    std::vector<int> id(rs.rank);
    for (int i = 0; i < rs.rank; ++i) id[i] = i;
    SignTable st = pinned_signs(rs, id);
    for (int j = 0; j < rs.n_pos(); ++j) {
      CHECK(st.sign_pos[j] == 1);
      CHECK(st.sigma_pos[j] == j);
    }
  }
}

TEST_CASE("two-copy product with twisted return map") {
  // Working system of the degree-2 restriction of the quasi-split SU3 form:
  // two copies of A2, the cycle returns through the flip.
  RootSystem rs = RootSystem::build(
      block_diag(cartan_matrix(Series::A, 2), cartan_matrix(Series::A, 2)));
  std::vector<int> phi = {2, 3, 1, 0};  // copy0 -> copy1 shifted, copy1 -> copy0 flipped
  CHECK(automorphism_order(phi) == 4);
  SignTable st = pinned_signs(rs, phi);
  check_bracket_property(rs, st);
  auto [t1, n1] = rs.locate_root({1, 1, 0, 0});
  auto [t2, n2] = rs.locate_root({0, 0, 1, 1});
  REQUIRE(!n1);
  REQUIRE(!n2);
  // the flip step carries the -1, the plain shift step does not
  CHECK(st.sign_pos[t2] == -1);
  CHECK(st.sign_pos[t1] == 1);
  CHECK(st.power_sign(t1, 4) == 1);
  CHECK(st.power_sign(t2, 4) == 1);
}

TEST_CASE("pure shift of two G2 copies keeps all signs +1") {
  RootSystem rs = RootSystem::build(
      block_diag(cartan_matrix(Series::G, 2), cartan_matrix(Series::G, 2)));
  std::vector<int> shift = {2, 3, 0, 1};
  SignTable st = pinned_signs(rs, shift);
  for (int j = 0; j < rs.n_pos(); ++j) CHECK(st.sign_pos[j] == 1);
}

TEST_CASE("invalid automorphisms are rejected") {
  RootSystem b2 = make(Series::B, 2);
  CHECK_THROWS(validate_diagram_automorphism(b2, {1, 0}));  // lengths differ
  RootSystem g2 = make(Series::G, 2);
  CHECK_THROWS(validate_diagram_automorphism(g2, {1, 0}));
  RootSystem a2 = make(Series::A, 2);
  CHECK_THROWS(validate_diagram_automorphism(a2, {0}));       // wrong size
  CHECK_THROWS(validate_diagram_automorphism(a2, {0, 0}));    // not injective
  CHECK_NOTHROW(validate_diagram_automorphism(a2, {1, 0}));
}
