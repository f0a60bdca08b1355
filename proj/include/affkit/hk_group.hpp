#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "affkit/abelian_group.hpp"
#include "affkit/affine.hpp"
#include "affkit/hom.hpp"
#include "affkit/limits.hpp"
#include "affkit/partial_hom.hpp"
#include "affkit/subuniverse.hpp"

namespace affkit {

/// The group of homomorphisms f: A^2 -> S with f(x,x) = k(x), under the
/// pointwise affine addition (f + g)(x,y) = t_S(f(x,y), k(y), g(x,y)) whose
/// neutral element is kbar(x,y) = k(y).
struct HkGroup {
  const FiniteAlgebra* base = nullptr;    // A
  const FiniteAlgebra* target = nullptr;  // S
  std::vector<Elem> anchor;               // k as a value map on A
  std::vector<Elem> target_witness;       // t_S table, for pointwise sums
  std::vector<Hom> elements;              // sorted by value maps
  GroupView group;                        // structure over element indices
  int neutral = -1;
  std::vector<int> generators;            // lex-least minimum family

  int size() const { return static_cast<int>(elements.size()); }

  Elem t_s(Elem x, Elem y, Elem z) const {
    const int m = target->size;
    return target_witness[x + y * m + z * m * m];
  }
};

/// Enumerates H_k(A^2, S) and equips it with the group structure.
/// `witness_s` must be the affine witness of S.
inline HkGroup hk_group(const FiniteAlgebra& A, const FiniteAlgebra& S,
                        const AffineWitness& witness_s, const std::vector<Elem>& k,
                        const Limits& limits = {}) {
  if (static_cast<int>(k.size()) != A.size)
    throw schema_error("hk_group: anchor map size mismatch");
  {
    Hom kh;
    kh.domain = full_subuniverse(A, 1, limits);
    kh.target = &S;
    kh.values = k;
    if (!is_homomorphism(kh, limits))
      throw schema_error("hk_group: anchor is not a homomorphism");
  }

  HkGroup h;
  h.base = &A;
  h.target = &S;
  h.anchor = k;
  h.target_witness = witness_s.table;

  Subuniverse square = full_subuniverse(A, 2, limits);
  for (auto& cand : enumerate_homs(square, S, limits)) {
    bool diag_ok = true;
    for (Elem x = 0; x < A.size && diag_ok; ++x)
      diag_ok = (cand({x, x}) == k[x]);
    if (diag_ok) h.elements.push_back(std::move(cand));
  }
  // enumerate_homs returns lexicographic order already
  const int m = h.size();
  if (m == 0) throw invariant_error("hk_group: empty (kbar is always a member)");

  auto index_of_values = [&](const std::vector<Elem>& vals) -> int {
    int lo = 0, hi = m - 1;
    while (lo <= hi) {
      int mid = (lo + hi) / 2;
      if (h.elements[mid].values == vals) return mid;
      if (h.elements[mid].values < vals)
        lo = mid + 1;
      else
        hi = mid - 1;
    }
    return -1;
  };

  // neutral kbar(x,y) = k(y)
  std::vector<Elem> kbar(square.size());
  for (std::size_t i = 0; i < square.size(); ++i) kbar[i] = k[square.elems[i][1]];
  h.neutral = index_of_values(kbar);
  if (h.neutral < 0) throw invariant_error("hk_group: kbar not found among elements");

  h.group.size = m;
  h.group.zero = h.neutral;
  h.group.add_table.resize(static_cast<std::size_t>(m) * m);
  h.group.neg_table.resize(m);
  std::vector<Elem> tmp(square.size());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (std::size_t p = 0; p < square.size(); ++p)
        tmp[p] = witness_s.apply(h.elements[i].values[p], kbar[p],
                                 h.elements[j].values[p]);
      int idx = index_of_values(tmp);
      if (idx < 0)
        throw invariant_error("hk_group: addition leaves the set (input not affine?)");
      h.group.add_table[i + j * m] = idx;
    }
    for (std::size_t p = 0; p < square.size(); ++p)
      tmp[p] = witness_s.apply(kbar[p], h.elements[i].values[p], kbar[p]);
    int idx = index_of_values(tmp);
    if (idx < 0) throw invariant_error("hk_group: negation leaves the set");
    h.group.neg_table[i] = idx;
  }
  h.group.validate();
  h.generators = min_generating_family(h.group);
  return h;
}

/// Factorization f = q o p of a total homomorphism f: A^n -> S through
/// A^N, where N - 1 is the size of the generating family used. p is a tuple
/// of integer-affine coordinate maps (terms in t), q is assembled from the
/// generators.
struct TotalFactorization {
  int n = 0;
  int N = 0;
  std::vector<IntAffine> p_coords;           // N maps of arity n
  std::unique_ptr<FiniteAlgebra> codomain;   // materialized A^N
  Hom p;                                     // A^n -> codomain (values = codes)
  Hom q;                                     // codomain -> S (domain over A, power N)
  std::vector<Term> p_terms;                 // @t-terms, one per coordinate
};

/// The constructive route: decompose f through the translates
/// f_i(x,y) = f(y,..,x,..,y), express each f_i over the generating family of
/// H_k(A^2,S) with k the diagonal of f, and assemble p from the integer
/// coefficients. The result is verified pointwise.
inline TotalFactorization factor_total_hom(const Hom& f, const HkGroup& hk,
                                           const DerivedGroup& group_a,
                                           const Limits& limits = {}) {
  const FiniteAlgebra& A = *f.domain.ambient;
  const FiniteAlgebra& S = *f.target;
  const int n = f.domain.power;
  const int s = A.size;
  if (f.domain.size() != detail::checked_pow(s, n, "factor_total_hom"))
    throw schema_error("factor_total_hom: f must be total on A^n");

  // k = diagonal of f; must match the anchor of the supplied group
  std::vector<Elem> k(s);
  for (Elem x = 0; x < s; ++x) k[x] = f(Tuple(n, x));
  if (k != hk.anchor)
    throw schema_error("factor_total_hom: group anchored at a different k");

  // translates f_i as members of H
  std::vector<int> f_index(n, -1);
  Subuniverse square = full_subuniverse(A, 2, limits);
  for (int i = 0; i < n; ++i) {
    std::vector<Elem> vals(square.size());
    for (std::size_t p = 0; p < square.size(); ++p) {
      Tuple arg(n, square.elems[p][1]);
      arg[i] = square.elems[p][0];
      vals[p] = f(arg);
    }
    for (int j = 0; j < hk.size(); ++j)
      if (hk.elements[j].values == vals) {
        f_index[i] = j;
        break;
      }
    if (f_index[i] < 0)
      throw invariant_error("factor_total_hom: translate " + std::to_string(i + 1) +
                            " is not in H (input not affine?)");
  }

  // coefficients of every element of H over the generators (breadth-first,
  // deterministic)
  const int m = hk.size();
  const int g = static_cast<int>(hk.generators.size());
  std::vector<std::vector<long>> coeff(m);
  std::vector<bool> have(m, false);
  std::vector<int> queue{hk.neutral};
  coeff[hk.neutral].assign(g, 0);
  have[hk.neutral] = true;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int cur = queue[qi];
    for (int j = 0; j < g; ++j) {
      int nxt = hk.group.add(cur, hk.generators[j]);
      if (have[nxt]) continue;
      coeff[nxt] = coeff[cur];
      ++coeff[nxt][j];
      have[nxt] = true;
      queue.push_back(nxt);
    }
  }
  for (int i = 0; i < n; ++i)
    if (!have[f_index[i]])
      throw invariant_error("factor_total_hom: generators do not reach a translate");

  TotalFactorization out;
  out.n = n;
  out.N = g + 1;
  // p_j(x) = sum_i c_ij (x_i - y) + y with y = x_n; p_N(x) = x_n
  for (int j = 0; j < g; ++j) {
    IntAffine aff;
    aff.coeffs.assign(n, 0);
    for (int i = 0; i < n; ++i) aff.coeffs[i] = coeff[f_index[i]][j];
    long total = 0;
    for (long c : aff.coeffs) total += c;
    aff.coeffs[n - 1] += 1 - total;
    out.p_coords.push_back(std::move(aff));
  }
  {
    IntAffine last;
    last.coeffs.assign(n, 0);
    last.coeffs[n - 1] = 1;
    out.p_coords.push_back(std::move(last));
  }
  for (const auto& aff : out.p_coords) {
    if (!aff.is_t_term())
      throw invariant_error("factor_total_hom: coordinate is not a term in t");
    out.p_terms.push_back(aff.to_term());
  }

  out.codomain = std::make_unique<FiniteAlgebra>(materialize_power(A, out.N, limits));

  // p as a hom A^n -> A^N
  out.p.domain = f.domain;
  out.p.target = out.codomain.get();
  out.p.values.reserve(f.domain.size());
  const AffineWitness& wa = *group_a.witness;
  for (const auto& x : f.domain.elems) {
    Tuple px(out.N);
    for (int j = 0; j < out.N; ++j) {
      px[j] = out.p_coords[j].evaluate(group_a, x);
      // the @t term tree must replay to the same value
      if (eval_term_with_witness(out.p_terms[j], A, wa, x) != px[j])
        throw invariant_error("factor_total_hom: term replay mismatch");
    }
    out.p.values.push_back(static_cast<Elem>(encode_tuple(px, s)));
  }
  if (!is_homomorphism(out.p, limits))
    throw invariant_error("factor_total_hom: p is not a homomorphism");

  // q(z) = k(z_N) + sum_j (g_j(z_j, z_N) - k(z_N)) over the derived group
  // of S; evaluated directly through the witness of S
  Subuniverse fullN = full_subuniverse(A, out.N, limits);
  out.q.domain = fullN;
  out.q.target = &S;
  out.q.values.reserve(fullN.size());
  for (const auto& z : fullN.elems) {
    Elem y = z[out.N - 1];
    Elem acc = k[y];
    for (int j = 0; j < g; ++j) {
      std::size_t pt = static_cast<std::size_t>(z[j]) + static_cast<std::size_t>(y) * s;
      Elem gj = hk.elements[hk.generators[j]].values[pt];
      // acc + (g_j(z_j, y) - k(y)) = t_S(acc, k(y), g_j(z_j, y))
      acc = hk.t_s(acc, k[y], gj);
    }
    out.q.values.push_back(acc);
  }
  if (!is_homomorphism(out.q, limits))
    throw invariant_error("factor_total_hom: q is not a homomorphism");

  // the factorization identity f = q o p, pointwise
  for (std::size_t i = 0; i < f.domain.elems.size(); ++i) {
    Tuple pz = decode_tuple(static_cast<std::uint64_t>(out.p.values[i]), s, out.N);
    if (out.q(pz) != f.values[i])
      throw invariant_error("factor_total_hom: q(p(x)) != f(x)");
  }
  return out;
}

}  // namespace affkit
