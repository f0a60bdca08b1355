#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "affkit/abelian_group.hpp"
#include "affkit/affine.hpp"
#include "affkit/builtins.hpp"
#include "affkit/congruence.hpp"
#include "affkit/hk_group.hpp"
#include "affkit/hom.hpp"
#include "affkit/partial_hom.hpp"

using namespace affkit;

TEST_CASE("restrict keeps values and rejects bad domains") {
  FiniteAlgebra z4 = cyclic_group(4);
  PartialHom pi1 = projection_hom(z4, 2, 1);

  // restrict to the subuniverse {0,2}^2
  Subuniverse d = generate_subuniverse(z4, 2, {{0, 2}, {2, 0}});
  REQUIRE(d.size() == 4);
  PartialHom r = restrict_hom(pi1, d);
  CHECK(r.domain.size() == 4);
  for (const auto& t : d.elems) CHECK(r(t) == t[0]);
  CHECK(is_homomorphism(r));

  // restricting to the full domain changes nothing
  PartialHom r2 = restrict_hom(pi1, pi1.domain);
  CHECK(hom_equal(r2, pi1));

  // restrict to a singleton constant tuple
  Subuniverse zero = generate_subuniverse(z4, 2, {});
  PartialHom r3 = restrict_hom(pi1, zero);
  CHECK(r3.domain.size() == 1);

  Subuniverse not_inside = full_subuniverse(z4, 1);
  CHECK_THROWS_AS(restrict_hom(pi1, not_inside), schema_error);
}

TEST_CASE("clone composition") {
  FiniteAlgebra z2 = cyclic_group(2);
  PartialHom pi1 = projection_hom(z2, 2, 1);
  PartialHom pi2 = projection_hom(z2, 2, 2);

  // total with total: ordinary composition
  PartialHom comp = clone_compose(pi1, {pi1, pi2});
  CHECK(comp.domain.size() == 4);
  for (const auto& t : comp.domain.elems) CHECK(comp(t) == t[0]);

  // restricting the outer map to the diagonal pulls the domain back
  Subuniverse diag = generate_subuniverse(z2, 2, {{1, 1}});
  REQUIRE(diag.size() == 2);
  PartialHom pi1_diag = restrict_hom(pi1, diag);
  PartialHom pulled = clone_compose(pi1_diag, {pi1, pi1});
  // (x1, x1) is always on the diagonal, so the domain is everything
  CHECK(pulled.domain.size() == 4);
  for (const auto& t : pulled.domain.elems) CHECK(pulled(t) == t[0]);

  // pairing two restrictions intersects their domains
  FiniteAlgebra z4 = cyclic_group(4);
  Subuniverse c1 = generate_subuniverse(z4, 1, {{2}});   // {0,2}
  Subuniverse c2 = generate_subuniverse(z4, 1, {{1}});   // all
  PartialHom f = restrict_hom(projection_hom(z4, 1, 1), c1);
  PartialHom g = restrict_hom(projection_hom(z4, 1, 1), c2);
  PartialHom paired = pair_restrict(f, g);
  CHECK(paired.domain.size() == 2);  // {0,2} cap Z4

  // empty composite yields the distinguished empty partial function
  Subuniverse odd_free = generate_subuniverse(z4, 1, {{2}});
  PartialHom into_sub = restrict_hom(projection_hom(z4, 1, 1), odd_free);
  Subuniverse ones = generate_subuniverse(z4, 1, {{1}});
  PartialHom shifted;  // x |-> x + 1, a non-hom map is not allowed; use translation hom?
  // build a total hom z4 -> z4 with image {1,3}? impossible; instead compose
  // a domain-{0,2} map with a map landing in {1,3} is impossible among homs,
  // so check the empty function through an explicitly empty domain instead
  PartialHom empty = empty_partial_hom(z4, z4);
  CHECK(empty.empty());
  CHECK(hom_equal(empty, empty_partial_hom(z4, z4)));
}

TEST_CASE("hk group for Z2") {
  FiniteAlgebra z2 = cyclic_group(2);
  auto w = *find_affine_witness(z2);
  std::vector<Elem> id{0, 1};
  HkGroup h = hk_group(z2, z2, w, id);
  CHECK(h.size() == 2);  // x and y
  CHECK(h.generators.size() == 1);
  // kbar is the neutral element and satisfies the diagonal law
  for (Elem x = 0; x < 2; ++x)
    CHECK(h.elements[h.neutral]({x, x}) == id[x]);
}

TEST_CASE("hk group for Z4") {
  FiniteAlgebra z4 = cyclic_group(4);
  auto w = *find_affine_witness(z4);
  std::vector<Elem> id{0, 1, 2, 3};
  HkGroup h = hk_group(z4, z4, w, id);
  CHECK(h.size() == 4);
  CHECK(h.generators.size() == 1);  // cyclic of order 4
  // group order matches: 4 = |Hom(Z4, Z4)| restricted to a+b=1
  GroupView g = h.group;
  CHECK(g.order_of(h.generators[0]) == 4);
}

TEST_CASE("hk group size does not depend on the anchor") {
  FiniteAlgebra z4 = cyclic_group(4);
  FiniteAlgebra z2 = cyclic_group(2);
  auto w2 = *find_affine_witness(z2);
  int size = -1, gens = -1;
  for (const Hom& k : enumerate_homs(z4, z2)) {
    HkGroup h = hk_group(z4, z2, w2, k.values);
    if (size < 0) {
      size = h.size();
      gens = static_cast<int>(h.generators.size());
    }
    CHECK(h.size() == size);
    CHECK(static_cast<int>(h.generators.size()) == gens);
  }
}

TEST_CASE("hk group size divides the alpha-beta bound") {
  // |H(A^2,S)| divides prod p^(alpha_i * beta_i), and the generating family
  // has at most max(alpha_i * beta_i) members
  struct Pair {
    const char* a;
    const char* s;
  };
  for (auto [an, sn] : {Pair{"z2", "z2"}, Pair{"z4", "z4"}, Pair{"z4", "z2"},
                        Pair{"z2xz2", "z2"}, Pair{"z2xz2", "z2xz2"}, Pair{"z3", "z3"},
                        Pair{"z2xz4", "z2"}}) {
    FiniteAlgebra A = *builtin_algebra(an);
    FiniteAlgebra S = *builtin_algebra(sn);
    auto ws = *find_affine_witness(S);
    auto homs = enumerate_homs(A, S);
    REQUIRE_FALSE(homs.empty());
    HkGroup h = hk_group(A, S, ws, homs[0].values);
    int max_ab = 0;
    for (auto [p, e] : factor_integer(h.size())) {
      int alpha = 0, beta = 0;
      for (auto [q, x] : factor_integer(A.size))
        if (q == p) alpha = x;
      for (auto [q, x] : factor_integer(S.size))
        if (q == p) beta = x;
      CHECK(e <= alpha * beta);
    }
    for (auto [p, alpha] : factor_integer(A.size))
      for (auto [q, beta] : factor_integer(S.size))
        if (p == q) max_ab = std::max(max_ab, alpha * beta);
    CHECK(static_cast<int>(h.generators.size()) <= std::max(max_ab, 0));
  }
}

namespace {

Hom total_hom_from(const FiniteAlgebra& A, int n, const FiniteAlgebra& S,
                   std::vector<Elem> values) {
  Hom f;
  f.domain = full_subuniverse(A, n);
  f.target = &S;
  f.values = std::move(values);
  REQUIRE(is_homomorphism(f));
  return f;
}

}  // namespace

TEST_CASE("factor_total_hom on x+y+z over Z2") {
  FiniteAlgebra z2 = cyclic_group(2);
  auto w = *find_affine_witness(z2);
  DerivedGroup g = derived_group(z2, w, 0);

  Subuniverse cube = full_subuniverse(z2, 3);
  std::vector<Elem> vals;
  for (const auto& t : cube.elems) vals.push_back((t[0] + t[1] + t[2]) % 2);
  Hom f = total_hom_from(z2, 3, z2, vals);

  std::vector<Elem> k(2);
  for (Elem x = 0; x < 2; ++x) k[x] = f(Tuple(3, x));
  HkGroup hk = hk_group(z2, z2, w, k);
  TotalFactorization tf = factor_total_hom(f, hk, g);
  CHECK(tf.N == 2);
  // first coordinate is x+y+z (coefficients 1,1,1), second is the projection
  CHECK(tf.p_coords[0].coeffs == std::vector<long>{1, 1, -1});
  CHECK(tf.p_coords[1].coeffs == std::vector<long>{0, 0, 1});
  // -1 = +1 over Z2; the pointwise identity q(p(x)) = f(x) was verified in
  // the constructor; spot-check a value
  CHECK(tf.q(decode_tuple(tf.p.values[cube.index_of({1, 1, 1})], 2, tf.N)) == 1);
}

TEST_CASE("factor_total_hom on projections") {
  FiniteAlgebra z4 = cyclic_group(4);
  auto w = *find_affine_witness(z4);
  DerivedGroup g = derived_group(z4, w, 0);
  Hom pi1 = projection_hom(z4, 2, 1);
  std::vector<Elem> k(4);
  for (Elem x = 0; x < 4; ++x) k[x] = x;
  HkGroup hk = hk_group(z4, z4, w, k);
  TotalFactorization tf = factor_total_hom(pi1, hk, g);
  CHECK(tf.N == 2);
  for (const auto& t : pi1.domain.elems) {
    Tuple pz = decode_tuple(tf.p.values[pi1.domain.index_of(t)], 4, tf.N);
    CHECK(tf.q(pz) == t[0]);
  }
}

TEST_CASE("factor_total_hom on x+2y over Z4") {
  FiniteAlgebra z4 = cyclic_group(4);
  auto w = *find_affine_witness(z4);
  DerivedGroup g = derived_group(z4, w, 0);
  Subuniverse sq = full_subuniverse(z4, 2);
  std::vector<Elem> vals;
  for (const auto& t : sq.elems) vals.push_back((t[0] + 2 * t[1]) % 4);
  Hom f = total_hom_from(z4, 2, z4, vals);
  std::vector<Elem> k(4);
  for (Elem x = 0; x < 4; ++x) k[x] = (3 * x) % 4;
  HkGroup hk = hk_group(z4, z4, w, k);
  TotalFactorization tf = factor_total_hom(f, hk, g);
  CHECK(tf.N <= 2);
  for (std::size_t i = 0; i < sq.size(); ++i) {
    Tuple pz = decode_tuple(tf.p.values[i], 4, tf.N);
    CHECK(tf.q(pz) == vals[i]);
  }
  // every coordinate of p is a term in t
  for (const auto& aff : tf.p_coords) CHECK(aff.is_t_term());
}

TEST_CASE("factor_total_hom through a quotient target") {
  // factor the canonical projection Z4^2 -> Z4^2/theta_D for D = {(x,y): x-y in {0,2}}
  FiniteAlgebra z4 = cyclic_group(4);
  auto w = *find_affine_witness(z4);
  DerivedGroup g = derived_group(z4, w, 0);

  FiniteAlgebra p2 = materialize_power(z4, 2);
  auto wp = find_affine_witness(p2);
  REQUIRE(wp.has_value());
  std::vector<Elem> delems;
  for (Elem x = 0; x < 4; ++x)
    for (Elem y = 0; y < 4; ++y)
      if (((x - y) % 4 + 4) % 4 == 0 || ((x - y) % 4 + 4) % 4 == 2)
        delems.push_back(static_cast<Elem>(encode_tuple({x, y}, 4)));
  std::sort(delems.begin(), delems.end());
  Congruence theta = theta_of_subalgebra(p2, *wp, delems);
  QuotientAlgebra S = quotient(p2, theta);
  CHECK(S.algebra.size == 2);

  // rebuild the projection as a hom over tuples (power 2 of z4)
  auto ws = *find_affine_witness(S.algebra);
  Subuniverse sq = full_subuniverse(z4, 2);
  std::vector<Elem> vals;
  for (const auto& t : sq.elems)
    vals.push_back(S.project(static_cast<Elem>(encode_tuple(t, 4))));
  Hom pr;
  pr.domain = sq;
  pr.target = &S.algebra;
  pr.values = vals;
  REQUIRE(is_homomorphism(pr));

  std::vector<Elem> k(4);
  for (Elem x = 0; x < 4; ++x) k[x] = pr({x, x});
  HkGroup hk = hk_group(z4, S.algebra, ws, k);
  TotalFactorization tf = factor_total_hom(pr, hk, g);
  CHECK(tf.N == 2);  // |H| = 2, one generator
}
