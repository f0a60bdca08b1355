#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affkit/algebra.hpp"
#include "affkit/limits.hpp"
#include "affkit/subuniverse.hpp"
#include "affkit/term.hpp"

namespace affkit {

/// The free algebra on n generators in the variety generated by alg,
/// realized concretely as the subalgebra of A^(A^n) generated by the n
/// projection tuples. Its elements are exactly the n-ary term functions.
struct FreeAlgebra {
  ClosureResult closure;   // generation order + derivations
  Subuniverse carrier;     // canonical sorted form
  int rank = 0;

  std::size_t size() const { return carrier.size(); }

  /// A term realizing the element at `gen_index` (index into generation
  /// order). Seeds are the projections, i.e. the variables x1..xn.
  Term term_of_gen_index(int gen_index) const {
    const Derivation& d = closure.derivations[gen_index];
    if (d.op_index < 0) return Term::variable(d.seed_index + 1);
    std::vector<Term> args;
    args.reserve(d.children.size());
    for (int c : d.children) args.push_back(term_of_gen_index(c));
    return Term::apply(closure.ambient->operations[d.op_index].name, std::move(args));
  }

  /// Term for an element given in canonical (sorted) position.
  Term term_of(int sorted_index) const {
    const Tuple& t = carrier.elems[sorted_index];
    for (std::size_t i = 0; i < closure.gen_order.size(); ++i)
      if (closure.gen_order[i] == t) return term_of_gen_index(static_cast<int>(i));
    throw invariant_error("FreeAlgebra::term_of: element not in closure");
  }
};

/// Builds F(n) for the variety generated by alg. The tuples have length
/// size^n (one slot per point of A^n, points ordered by code), so the limit
/// applies to size^n.
inline FreeAlgebra free_algebra(const FiniteAlgebra& alg, int n,
                                const Limits& limits = {}) {
  std::uint64_t points = detail::checked_pow(alg.size, n, "free_algebra");
  limits.require_enumeration(points, "free_algebra rank " + std::to_string(n));
  const int len = static_cast<int>(points);

  std::vector<Tuple> projections;
  for (int i = 0; i < n; ++i) {
    Tuple proj(len);
    for (int p = 0; p < len; ++p)
      proj[p] = decode_tuple(static_cast<std::uint64_t>(p), alg.size, n)[i];
    projections.push_back(std::move(proj));
  }
  if (n == 0 && alg.constants().empty())
    throw schema_error("free_algebra: rank 0 with constant-free signature is empty");

  FreeAlgebra out;
  out.rank = n;
  out.closure = generate_subuniverse_closure(alg, len, projections, limits);
  out.carrier = out.closure.sorted();
  return out;
}

/// Evaluates an element of F(n) (an n-ary term function) at a point of A^n.
inline Elem eval_term_function(const FreeAlgebra& fa, const Tuple& fn,
                               const Tuple& point) {
  const FiniteAlgebra& alg = *fa.closure.ambient;
  return fn[static_cast<std::size_t>(encode_tuple(point, alg.size))];
}

}  // namespace affkit
