#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "affkit/abelian_group.hpp"
#include "affkit/algebra.hpp"
#include "affkit/builtins.hpp"
#include "affkit/free_algebra.hpp"
#include "affkit/hom.hpp"
#include "affkit/subuniverse.hpp"
#include "affkit/term.hpp"

using namespace affkit;

namespace {

// Independent closure check for the all_subuniverses oracle: a subset is
// closed iff every operation applied to arguments from it stays inside.
bool subset_closed(const FiniteAlgebra& alg, const std::set<Elem>& sub) {
  for (const auto& op : alg.operations) {
    const int k = op.arity;
    std::vector<Elem> elems(sub.begin(), sub.end());
    if (k == 0) {
      if (!sub.count(op.table[0])) return false;
      continue;
    }
    if (elems.empty()) continue;
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      std::vector<Elem> args(k);
      for (int i = 0; i < k; ++i) args[i] = elems[pick[i]];
      if (!sub.count(alg.apply(op, args))) return false;
      int pos = k - 1;
      while (pos >= 0 && pick[pos] + 1 == elems.size()) pick[pos--] = 0;
      if (pos < 0) break;
      ++pick[pos];
    }
  }
  return true;
}

std::set<std::set<Elem>> brute_force_subuniverses(const FiniteAlgebra& alg) {
  std::set<std::set<Elem>> out;
  for (unsigned mask = 1; mask < (1u << alg.size); ++mask) {
    std::set<Elem> sub;
    for (int i = 0; i < alg.size; ++i)
      if (mask & (1u << i)) sub.insert(i);
    if (subset_closed(alg, sub)) out.insert(sub);
  }
  return out;
}

bool direct_hom_check(const FiniteAlgebra& src, const FiniteAlgebra& dst,
                      const std::vector<Elem>& map) {
  for (std::size_t oi = 0; oi < src.operations.size(); ++oi) {
    const Operation& op = src.operations[oi];
    const int k = op.arity;
    std::uint64_t rows = 1;
    for (int i = 0; i < k; ++i) rows *= src.size;
    std::vector<Elem> args(k), vargs(k);
    for (std::uint64_t row = 0; row < rows; ++row) {
      std::uint64_t r = row;
      for (int i = k - 1; i >= 0; --i) {
        args[i] = static_cast<Elem>(r % src.size);
        r /= src.size;
      }
      for (int i = 0; i < k; ++i) vargs[i] = map[args[i]];
      if (map[src.apply(op, args)] != dst.apply(dst.operations[oi], vargs)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("eval_term basics") {
  FiniteAlgebra z4 = cyclic_group(4);
  CHECK(eval_term(Term::variable(2), z4, {1, 3}) == 3);

  Term dbl = Term::apply("add", {Term::variable(1), Term::variable(1)});
  CHECK(eval_term(dbl, z4, {3, 0}) == 2);

  Term nz = Term::apply("neg", {Term::apply("zero", {})});
  CHECK(eval_term(nz, z4, {}) == 0);

  CHECK_THROWS_AS(eval_term(Term::apply("mul", {Term::variable(1)}), z4, {0}),
                  schema_error);
  CHECK_THROWS_AS(eval_term(Term::apply("add", {Term::variable(1)}), z4, {0}),
                  schema_error);
  CHECK_THROWS_AS(eval_term(Term::variable(3), z4, {0, 1}), schema_error);
}

TEST_CASE("tuple code round trip") {
  for (int size : {2, 3, 4, 6}) {
    for (int n : {1, 2, 3}) {
      std::uint64_t total = 1;
      for (int i = 0; i < n; ++i) total *= size;
      for (std::uint64_t c = 0; c < total; ++c) {
        Tuple t = decode_tuple(c, size, n);
        CHECK(encode_tuple(t, size) == c);
      }
    }
  }
}

TEST_CASE("generate_subuniverse on Z4") {
  FiniteAlgebra z4 = cyclic_group(4);
  Subuniverse s2 = generate_subuniverse(z4, 1, {{2}});
  CHECK(s2.codes() == std::vector<std::uint64_t>{0, 2});

  Subuniverse s1 = generate_subuniverse(z4, 1, {{1}});
  CHECK(s1.size() == 4);

  Subuniverse full = full_subuniverse(z4, 1);
  Subuniverse again = generate_subuniverse(z4, 1, full.elems);
  CHECK(subuniverse_equal(full, again));

  // closure idempotence
  Subuniverse twice = generate_subuniverse(z4, 1, s2.elems);
  CHECK(subuniverse_equal(s2, twice));
}

TEST_CASE("generate_subuniverse rejects empty seeds without constants") {
  FiniteAlgebra meet = semilattice2();
  CHECK_THROWS_AS(generate_subuniverse(meet, 1, {}), schema_error);
}

TEST_CASE("all_subuniverses matches brute force") {
  for (const char* name : {"z2", "z4", "z2xz2", "z6", "meet2"}) {
    FiniteAlgebra alg = *builtin_algebra(name);
    auto subs = all_subuniverses(alg, 1);
    auto brute = brute_force_subuniverses(alg);
    REQUIRE(subs.size() == brute.size());
    for (const auto& s : subs) {
      std::set<Elem> key;
      for (const auto& t : s.elems) key.insert(t[0]);
      CHECK(brute.count(key) == 1);
    }
  }
  CHECK(all_subuniverses(*builtin_algebra("z2"), 1).size() == 2);
  CHECK(all_subuniverses(*builtin_algebra("z4"), 1).size() == 3);
  CHECK(all_subuniverses(*builtin_algebra("z2xz2"), 1).size() == 5);
}

TEST_CASE("all_subuniverses of a square") {
  FiniteAlgebra z2 = cyclic_group(2);
  auto subs = all_subuniverses(z2, 2);
  CHECK(subs.size() == 5);  // subgroups of Z2 x Z2
  for (const auto& s : subs) CHECK(is_closed(s));
}

TEST_CASE("enumerate_homs small groups") {
  FiniteAlgebra z2 = cyclic_group(2);
  FiniteAlgebra z4 = cyclic_group(4);

  auto h22 = enumerate_homs(z2, z2);
  REQUIRE(h22.size() == 2);
  CHECK(h22[0].values == std::vector<Elem>{0, 0});
  CHECK(h22[1].values == std::vector<Elem>{0, 1});

  auto h42 = enumerate_homs(z4, z2);
  REQUIRE(h42.size() == 2);
  CHECK(h42[0].values == std::vector<Elem>{0, 0, 0, 0});
  CHECK(h42[1].values == std::vector<Elem>{0, 1, 0, 1});

  // exhaustive oracle: check every map Z4 -> Z2 directly
  int count = 0;
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::vector<Elem> map(4);
    for (int i = 0; i < 4; ++i) map[i] = (mask >> i) & 1;
    if (direct_hom_check(z4, z2, map)) ++count;
  }
  CHECK(count == 2);

  auto h44 = enumerate_homs(z4, z4);
  CHECK(h44.size() == 4);
  std::vector<Elem> identity{0, 1, 2, 3};
  bool has_identity = false;
  for (const auto& h : h44) has_identity |= (h.values == identity);
  CHECK(has_identity);

  FiniteAlgebra z22 = *builtin_algebra("z2xz2");
  CHECK(enumerate_homs(z22, z2).size() == 4);
}

TEST_CASE("hom composition stays a hom") {
  FiniteAlgebra z4 = cyclic_group(4);
  FiniteAlgebra z2 = cyclic_group(2);
  auto f = enumerate_homs(z4, z4);
  auto g = enumerate_homs(z4, z2);
  for (const auto& a : f)
    for (const auto& b : g) {
      Hom comp;
      comp.domain = full_subuniverse(z4, 1);
      comp.target = &z2;
      comp.values.resize(4);
      for (Elem x = 0; x < 4; ++x) comp.values[x] = b.values[a.values[x]];
      CHECK(is_homomorphism(comp));
    }
}

TEST_CASE("free algebras by closure") {
  FiniteAlgebra z2 = cyclic_group(2);
  FiniteAlgebra z4 = cyclic_group(4);
  CHECK(free_algebra(z2, 1).size() == 2);
  CHECK(free_algebra(z2, 2).size() == 4);
  CHECK(free_algebra(z4, 1).size() == 4);

  // terms attached to elements really evaluate to them
  FreeAlgebra f = free_algebra(z4, 2);
  for (std::size_t i = 0; i < f.closure.gen_order.size(); ++i) {
    Term t = f.term_of_gen_index(static_cast<int>(i));
    const Tuple& fn = f.closure.gen_order[i];
    for (Elem x = 0; x < 4; ++x)
      for (Elem y = 0; y < 4; ++y)
        CHECK(eval_term(t, z4, {x, y}) == fn[encode_tuple({x, y}, 4)]);
  }
}

TEST_CASE("free algebra size divides the term-count bound") {
  // |F(n)| divides prod p^(n*alpha^2 + alpha)
  for (const char* name : {"z2", "z3", "z4", "z2xz2", "z6", "z2xz4", "z8", "f2xy"}) {
    FiniteAlgebra alg = *builtin_algebra(name);
    for (int n : {1, 2}) {
      if (detail::checked_pow(alg.size, n, "test") > 4096) continue;
      std::uint64_t fsize = free_algebra(alg, n).size();
      // bound as exact integer: product over prime powers
      long double bound = 1;
      for (auto [p, a] : factor_integer(alg.size))
        for (int i = 0; i < n * a * a + a; ++i) bound *= p;
      CHECK(bound >= fsize);
      // divisibility via prime exponents of fsize
      for (auto [p, e] : factor_integer(fsize)) {
        int allowed = 0;
        for (auto [q, a] : factor_integer(alg.size))
          if (q == p) allowed = n * a * a + a;
        CHECK(e <= allowed);
        CHECK(allowed > 0);
      }
    }
  }
}

TEST_CASE("materialized powers agree with coordinatewise application") {
  FiniteAlgebra z4 = cyclic_group(4);
  FiniteAlgebra p = materialize_power(z4, 2);
  REQUIRE(p.size == 16);
  const Operation* add = p.find_operation("add");
  REQUIRE(add != nullptr);
  for (Elem a = 0; a < 16; ++a)
    for (Elem b = 0; b < 16; ++b) {
      Tuple ta = decode_tuple(a, 4, 2), tb = decode_tuple(b, 4, 2);
      Tuple expect = {(ta[0] + tb[0]) % 4, (ta[1] + tb[1]) % 4};
      CHECK(p.apply(*add, {a, b}) == static_cast<Elem>(encode_tuple(expect, 4)));
    }
}

TEST_CASE("limit errors are typed and loud") {
  FiniteAlgebra z4 = cyclic_group(4);
  Limits tight;
  tight.max_enumeration = 8;
  CHECK_THROWS_AS(full_subuniverse(z4, 2, tight), limit_error);
  CHECK_THROWS_AS(materialize_power(z4, 2, tight), limit_error);
  CHECK_THROWS_AS(free_algebra(z4, 2, tight), limit_error);
}

TEST_CASE("algebra validation catches schema violations") {
  FiniteAlgebra bad = cyclic_group(4);
  bad.operations[0].table[3] = 7;
  CHECK_THROWS_AS(bad.validate(), schema_error);

  FiniteAlgebra dup = cyclic_group(4);
  dup.operations[1].name = "add";
  CHECK_THROWS_AS(dup.validate(), schema_error);

  FiniteAlgebra short_table = cyclic_group(4);
  short_table.operations[0].table.pop_back();
  CHECK_THROWS_AS(short_table.validate(), schema_error);
}
