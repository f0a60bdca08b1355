#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affkit/algebra.hpp"
#include "affkit/free_algebra.hpp"
#include "affkit/hom.hpp"
#include "affkit/limits.hpp"
#include "affkit/term.hpp"

namespace affkit {

/// Name of the virtual ternary symbol used in term trees that are built over
/// the affine witness rather than over basic operations.
inline constexpr const char* kWitnessSymbol = "@t";

/// The affine witness: a ternary term function t with t(x,y,y) = x and
/// t(x,x,y) = y that is simultaneously a homomorphism A^3 -> A. Its table is
/// indexed by code(x,y,z) = x + y*s + z*s^2.
struct AffineWitness {
  const FiniteAlgebra* alg = nullptr;
  std::vector<Elem> table;
  std::optional<Term> term;

  Elem apply(Elem x, Elem y, Elem z) const {
    const int s = alg->size;
    return table[static_cast<std::size_t>(x) + static_cast<std::size_t>(y) * s +
                 static_cast<std::size_t>(z) * s * s];
  }
};

inline bool satisfies_malcev(const FiniteAlgebra& alg,
                             const std::vector<Elem>& table) {
  const int s = alg.size;
  for (Elem x = 0; x < s; ++x) {
    for (Elem y = 0; y < s; ++y) {
      if (table[x + y * s + y * s * s] != x) return false;  // t(x,y,y) = x
      if (table[x + x * s + y * s * s] != y) return false;  // t(x,x,y) = y
    }
  }
  return true;
}

/// Is the ternary function a homomorphism A^3 -> A?
inline bool is_ternary_hom(const FiniteAlgebra& alg, const std::vector<Elem>& table,
                           const Limits& limits = {}) {
  const int s = alg.size;
  const std::uint64_t cube = static_cast<std::uint64_t>(s) * s * s;
  std::uint64_t spent = 0;
  std::vector<std::uint64_t> pick;
  std::vector<Elem> args;
  for (const auto& op : alg.operations) {
    const int k = op.arity;
    if (k == 0) {
      Elem c = op.table[0];
      if (table[c + c * s + c * s * s] != c) return false;
      continue;
    }
    std::uint64_t combos = 1;
    for (int i = 0; i < k; ++i) combos *= cube;
    spent += combos * static_cast<std::uint64_t>(k) * 4;
    limits.require_check_ops(spent, "is_ternary_hom");
    pick.assign(k, 0);
    while (true) {
      // apply op to k points of A^3 coordinatewise, then t; compare with
      // op applied to the t-values
      Elem coords[3];
      args.assign(k, 0);
      for (int c = 0; c < 3; ++c) {
        std::uint64_t place = 1;
        for (int q = 0; q < c; ++q) place *= s;
        for (int i = 0; i < k; ++i) args[i] = static_cast<Elem>((pick[i] / place) % s);
        coords[c] = alg.apply(op, args);
      }
      Elem lhs = table[coords[0] + coords[1] * s + coords[2] * s * s];
      for (int i = 0; i < k; ++i) args[i] = table[pick[i]];
      Elem rhs = alg.apply(op, args);
      if (lhs != rhs) return false;
      int pos = k - 1;
      while (pos >= 0 && pick[pos] + 1 == cube) pick[pos--] = 0;
      if (pos < 0) break;
      ++pick[pos];
    }
  }
  return true;
}

inline bool verify_witness(const FiniteAlgebra& alg, const std::vector<Elem>& table,
                           const Limits& limits = {}) {
  return satisfies_malcev(alg, table) && is_ternary_hom(alg, table, limits);
}

/// Searches the ternary term clone (free algebra of rank 3) for an affine
/// witness. Returns the lexicographically least valid table, with a term
/// realizing it; absent means no ternary term function works, which is an
/// exhaustive negative certificate.
inline std::optional<AffineWitness> find_affine_witness(const FiniteAlgebra& alg,
                                                        const Limits& limits = {}) {
  FreeAlgebra f3 = free_algebra(alg, 3, limits);
  int best_gen_index = -1;
  for (std::size_t i = 0; i < f3.closure.gen_order.size(); ++i) {
    const Tuple& cand = f3.closure.gen_order[i];
    if (!satisfies_malcev(alg, cand)) continue;
    if (!is_ternary_hom(alg, cand, limits)) continue;
    if (best_gen_index < 0 ||
        std::lexicographical_compare(cand.begin(), cand.end(),
                                     f3.closure.gen_order[best_gen_index].begin(),
                                     f3.closure.gen_order[best_gen_index].end()))
      best_gen_index = static_cast<int>(i);
  }
  if (best_gen_index < 0) return std::nullopt;
  AffineWitness w;
  w.alg = &alg;
  w.table = f3.closure.gen_order[best_gen_index];
  w.term = f3.term_of_gen_index(best_gen_index);
  return w;
}

/// Default basepoint: the value of the first nullary operation when one
/// exists, otherwise 0.
inline Elem default_basepoint(const FiniteAlgebra& alg) {
  for (const auto& op : alg.operations)
    if (op.arity == 0) return op.table[0];
  return 0;
}

/// The Abelian group structure x + y = t(x,c,y), -y = t(c,y,c) with neutral
/// element c, derived from the witness at a chosen basepoint.
struct DerivedGroup {
  const FiniteAlgebra* alg = nullptr;
  const AffineWitness* witness = nullptr;
  Elem basepoint = 0;
  std::vector<Elem> add_table;  // s*s, add(x,y) at x + y*s
  std::vector<Elem> neg_table;

  int size() const { return alg->size; }
  Elem zero() const { return basepoint; }
  Elem add(Elem x, Elem y) const { return add_table[x + y * alg->size]; }
  Elem neg(Elem y) const { return neg_table[y]; }
  Elem sub(Elem x, Elem y) const { return witness->apply(x, y, basepoint); }

  /// k*x for an integer k (repeated addition; k may be negative).
  Elem int_multiple(long k, Elem x) const {
    Elem base = x;
    if (k < 0) {
      base = neg(x);
      k = -k;
    }
    Elem acc = zero();
    for (long i = 0; i < k; ++i) acc = add(acc, base);
    return acc;
  }

  Elem order_of(Elem x) const {
    Elem acc = x;
    int ord = 1;
    while (acc != zero()) {
      acc = add(acc, x);
      ++ord;
    }
    return ord;
  }
};

/// Builds the derived group at basepoint c and verifies the Abelian group
/// axioms together with t(x,y,z) = x - y + z, all exhaustively.
inline DerivedGroup derived_group(const FiniteAlgebra& alg, const AffineWitness& w,
                                  Elem c, const Limits& limits = {}) {
  if (c < 0 || c >= alg.size) throw schema_error("derived_group: basepoint outside carrier");
  if (!verify_witness(alg, w.table, limits))
    throw invariant_error("derived_group: witness fails verification");
  DerivedGroup g;
  g.alg = &alg;
  g.witness = &w;
  g.basepoint = c;
  const int s = alg.size;
  g.add_table.resize(static_cast<std::size_t>(s) * s);
  g.neg_table.resize(s);
  for (Elem x = 0; x < s; ++x) {
    g.neg_table[x] = w.apply(c, x, c);
    for (Elem y = 0; y < s; ++y) g.add_table[x + y * s] = w.apply(x, c, y);
  }
  // group axioms
  for (Elem x = 0; x < s; ++x) {
    if (g.add(x, c) != x || g.add(c, x) != x)
      throw invariant_error("derived_group: neutral element fails");
    if (g.add(x, g.neg(x)) != c)
      throw invariant_error("derived_group: inverse fails");
    for (Elem y = 0; y < s; ++y) {
      if (g.add(x, y) != g.add(y, x))
        throw invariant_error("derived_group: commutativity fails");
      for (Elem z = 0; z < s; ++z) {
        if (g.add(g.add(x, y), z) != g.add(x, g.add(y, z)))
          throw invariant_error("derived_group: associativity fails");
        if (w.apply(x, y, z) != g.add(g.sub(x, y), z))
          throw invariant_error("derived_group: t(x,y,z) != x - y + z");
      }
    }
  }
  return g;
}

inline DerivedGroup derived_group(const FiniteAlgebra& alg, const AffineWitness& w,
                                  const Limits& limits = {}) {
  return derived_group(alg, w, default_basepoint(alg), limits);
}

/// An integer affine combination of coordinates whose coefficients sum to 1:
/// exactly the operations generated by the witness t. Basepoint-independent.
struct IntAffine {
  std::vector<long> coeffs;

  long coefficient_sum() const {
    long s = 0;
    for (long c : coeffs) s += c;
    return s;
  }

  bool is_t_term() const { return coefficient_sum() == 1; }

  Elem evaluate(const DerivedGroup& g, const Tuple& point) const {
    Elem acc = g.zero();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == 0) continue;
      acc = g.add(acc, g.int_multiple(coeffs[i], g.sub(point[i], g.zero())));
    }
    return acc;
  }

  /// Builds a term tree over the virtual symbol @t realizing this map.
  /// Repeatedly peels a (+1, -1) pair off the coefficient vector:
  /// u = u' + e_i - e_j gives tau_u = t(tau_u', x_j, x_i).
  Term to_term() const {
    std::vector<long> u = coeffs;
    if (coefficient_sum() != 1)
      throw invariant_error("IntAffine::to_term: coefficients must sum to 1");
    std::vector<std::pair<int, int>> steps;  // (i: +1 slot, j: -1 slot)
    while (true) {
      int neg = -1;
      for (std::size_t j = 0; j < u.size(); ++j)
        if (u[j] < 0) {
          neg = static_cast<int>(j);
          break;
        }
      if (neg < 0) break;  // all nonnegative with sum 1: a unit vector
      int pos = -1;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] > 0) {
          pos = static_cast<int>(i);
          break;
        }
      steps.emplace_back(pos, neg);
      --u[pos];
      ++u[neg];
    }
    int unit = -1;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] == 1) unit = static_cast<int>(i);
    Term t = Term::variable(unit + 1);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
      t = Term::apply(kWitnessSymbol,
                      {t, Term::variable(it->second + 1), Term::variable(it->first + 1)});
    return t;
  }
};

/// Evaluates a term that may contain the virtual @t symbol, interpreting it
/// through the witness table and everything else through the algebra.
inline Elem eval_term_with_witness(const Term& t, const FiniteAlgebra& alg,
                                   const AffineWitness& w,
                                   const std::vector<Elem>& args) {
  if (t.is_variable()) {
    if (t.var > static_cast<int>(args.size()))
      throw schema_error("eval_term_with_witness: variable index out of range");
    return args[t.var - 1];
  }
  if (t.op == kWitnessSymbol) {
    if (t.children.size() != 3)
      throw schema_error("eval_term_with_witness: @t expects 3 children");
    Elem x = eval_term_with_witness(t.children[0], alg, w, args);
    Elem y = eval_term_with_witness(t.children[1], alg, w, args);
    Elem z = eval_term_with_witness(t.children[2], alg, w, args);
    return w.apply(x, y, z);
  }
  const Operation* op = alg.find_operation(t.op);
  if (op == nullptr)
    throw schema_error("eval_term_with_witness: unknown symbol '" + t.op + "'");
  std::vector<Elem> vals(t.children.size());
  for (std::size_t i = 0; i < t.children.size(); ++i)
    vals[i] = eval_term_with_witness(t.children[i], alg, w, args);
  return alg.apply(*op, vals);
}

}  // namespace affkit
