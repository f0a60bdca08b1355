#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "affkit/errors.hpp"
#include "affkit/hom.hpp"
#include "affkit/limits.hpp"
#include "affkit/subuniverse.hpp"

namespace affkit {

/// Partial homomorphisms are Hom values whose domain is a proper
/// subuniverse; this header supplies the clone operations on them.
using PartialHom = Hom;

inline PartialHom empty_partial_hom(const FiniteAlgebra& ambient,
                                    const FiniteAlgebra& target) {
  PartialHom p;
  p.domain.ambient = &ambient;
  p.domain.power = 0;
  p.target = &target;
  return p;
}

/// Restriction p|D for D a subuniverse of dom p (values unchanged).
inline PartialHom restrict_hom(const PartialHom& p, const Subuniverse& D) {
  if (D.power != p.domain.power)
    throw schema_error("restrict: arity mismatch");
  PartialHom out;
  out.domain = D;
  out.target = p.target;
  out.values.reserve(D.size());
  for (const auto& t : D.elems) {
    int idx = p.domain.index_of(t);
    if (idx < 0) throw schema_error("restrict: D is not contained in dom p");
    out.values.push_back(p.values[idx]);
  }
  return out;
}

/// Composition g(p1(x), ..., pm(x)) of partial homomorphisms. All inner maps
/// share the arity n; the domain of the composite is the set of points of
/// the common domain whose image tuple lies in dom g. An empty result is the
/// distinguished empty partial function, not an error.
inline PartialHom clone_compose(const PartialHom& g,
                                const std::vector<PartialHom>& inner,
                                const Limits& limits = {}) {
  if (static_cast<int>(inner.size()) != g.domain.power)
    throw schema_error("clone_compose: outer arity " + std::to_string(g.domain.power) +
                       " does not match " + std::to_string(inner.size()) + " inner maps");
  if (inner.empty()) throw schema_error("clone_compose: no inner maps");
  const int n = inner[0].domain.power;
  for (const auto& p : inner) {
    if (p.domain.power != n) throw schema_error("clone_compose: inner arity mismatch");
    if (p.domain.ambient != inner[0].domain.ambient)
      throw schema_error("clone_compose: inner maps live over different algebras");
    if (p.target != g.domain.ambient)
      throw schema_error("clone_compose: inner target does not feed the outer domain");
  }

  PartialHom out;
  out.domain.ambient = inner[0].domain.ambient;
  out.domain.power = n;
  out.target = g.target;
  // walk the intersection of the inner domains
  for (const auto& t : inner[0].domain.elems) {
    Tuple image(g.domain.power);
    bool ok = true;
    for (std::size_t i = 0; i < inner.size() && ok; ++i) {
      auto v = inner[i].value_at(t);
      if (!v)
        ok = false;
      else
        image[i] = *v;
    }
    if (!ok) continue;
    auto gv = g.value_at(image);
    if (!gv) continue;
    out.domain.elems.push_back(t);
    out.values.push_back(*gv);
  }
  // elements arrive in code order from inner[0], so the domain is sorted
  if (out.empty()) return empty_partial_hom(*out.domain.ambient, *g.target);
  if (!is_closed(out.domain, limits))
    throw invariant_error("clone_compose: composite domain is not a subuniverse");
  return out;
}

/// Projection pi_i^n as a total hom on A^n.
inline PartialHom projection_hom(const FiniteAlgebra& alg, int n, int i,
                                 const Limits& limits = {}) {
  if (i < 1 || i > n) throw schema_error("projection_hom: index out of range");
  PartialHom p;
  p.domain = full_subuniverse(alg, n, limits);
  p.target = &alg;
  p.values.reserve(p.domain.size());
  for (const auto& t : p.domain.elems) p.values.push_back(t[i - 1]);
  return p;
}

/// Pairing-based restriction pi_1^2(f(x), w(x)): the value of f on
/// dom f /\ dom w. This is how intersections of domains are realized inside
/// the clone.
inline PartialHom pair_restrict(const PartialHom& f, const PartialHom& w,
                                const Limits& limits = {}) {
  if (f.domain.power != w.domain.power)
    throw schema_error("pair_restrict: arity mismatch");
  PartialHom out;
  out.domain.ambient = f.domain.ambient;
  out.domain.power = f.domain.power;
  out.target = f.target;
  for (const auto& t : f.domain.elems) {
    if (w.domain.index_of(t) < 0) continue;
    out.domain.elems.push_back(t);
    out.values.push_back(f.values[f.domain.index_of(t)]);
  }
  if (out.empty()) return empty_partial_hom(*f.domain.ambient, *f.target);
  if (!is_closed(out.domain, limits))
    throw invariant_error("pair_restrict: intersection is not a subuniverse");
  return out;
}

}  // namespace affkit
