#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "affkit/abelian_group.hpp"
#include "affkit/affine.hpp"
#include "affkit/algebra.hpp"
#include "affkit/errors.hpp"
#include "affkit/limits.hpp"
#include "affkit/subuniverse.hpp"
#include "affkit/term.hpp"

namespace affkit {

/// Expansion of an algebra by one fresh nullary symbol interpreted as x.
/// Everything else is unchanged.
inline FiniteAlgebra expand_constant(const FiniteAlgebra& alg, Elem x,
                                     std::string symbol = "c") {
  if (x < 0 || x >= alg.size)
    throw schema_error("expand_constant: value outside carrier");
  while (alg.find_operation(symbol) != nullptr) symbol += "_";
  FiniteAlgebra out = alg;
  out.name = alg.name + "@" + std::to_string(x);
  Operation c;
  c.name = symbol;
  c.arity = 0;
  c.table = {x};
  out.operations.push_back(std::move(c));
  return out;
}

/// The ring R of unary ring-terms of an algebra with a designated constant:
/// the closure under pointwise +, - (derived group at the constant) and
/// composition of the translates f_i(x) = f(c,..,x,..,c) - f(c,..,c)
/// together with the identity. Elements are canonical unary function tables;
/// every element also carries a term over the signature (with @t for the
/// witness) realizing it, so it can act on other algebras of the variety.
struct RingPresentation {
  const FiniteAlgebra* alg = nullptr;  // algebra carrying the constant
  std::string const_symbol;
  Elem basepoint = 0;                       // value of the constant
  std::vector<Tuple> elements;              // unary tables, sorted
  std::vector<Term> terms;                  // aligned with elements
  std::vector<int> add, mul;                // |R| x |R|, row-major (i + j*|R|)
  std::vector<int> neg;
  int unit = -1, zero = -1;

  int size() const { return static_cast<int>(elements.size()); }
  int add_of(int i, int j) const { return add[i + j * size()]; }
  int mul_of(int i, int j) const { return mul[i + j * size()]; }

  int index_of_table(const Tuple& t) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), t);
    if (it == elements.end() || *it != t) return -1;
    return static_cast<int>(it - elements.begin());
  }

  GroupView additive_group() const {
    GroupView g;
    g.size = size();
    g.zero = zero;
    g.add_table.resize(static_cast<std::size_t>(size()) * size());
    g.neg_table.resize(size());
    for (int i = 0; i < size(); ++i) {
      g.neg_table[i] = neg[i];
      for (int j = 0; j < size(); ++j) g.add_table[i + j * size()] = add_of(i, j);
    }
    return g;
  }
};

namespace detail {
inline Term subst_x1(const Term& t, const Term& replacement) {
  if (t.is_variable()) {
    if (t.var != 1) throw invariant_error("ring term uses a variable other than x1");
    return replacement;
  }
  Term out;
  out.op = t.op;
  for (const auto& c : t.children) out.children.push_back(subst_x1(c, replacement));
  return out;
}
}  // namespace detail

/// Builds R for an algebra that has a nullary symbol, over the derived group
/// at that symbol's value. `const_op` picks the designated constant by
/// operation index (-1: first nullary). Ring axioms are verified exhaustively
/// (associativity of composition is definitional and skipped).
inline RingPresentation ring_terms(const FiniteAlgebra& alg, const AffineWitness& w,
                                   const Limits& limits = {}, int const_op = -1) {
  auto nullaries = alg.nullary_ops();
  if (nullaries.empty())
    throw schema_error("ring_terms: algebra has no nullary symbol");
  if (const_op < 0) const_op = nullaries[0];
  if (alg.operations[const_op].arity != 0)
    throw schema_error("ring_terms: designated constant is not nullary");
  const Operation& cop = alg.operations[const_op];
  const Elem c = cop.table[0];
  const int s = alg.size;
  DerivedGroup g = derived_group(alg, w, c, limits);

  const Term c_leaf = Term::apply(cop.name, {});
  auto sub_term = [&](Term a, Term b) {
    // a - b in the derived group at c is t(a, b, c)
    return Term::apply(kWitnessSymbol, {std::move(a), std::move(b), c_leaf});
  };
  auto add_term = [&](Term a, Term b) {
    return Term::apply(kWitnessSymbol, {std::move(a), c_leaf, std::move(b)});
  };
  auto neg_term = [&](Term a) {
    return Term::apply(kWitnessSymbol, {c_leaf, std::move(a), c_leaf});
  };

  // generators: identity and the translates of every basic operation
  std::vector<Tuple> tables;
  std::vector<Term> terms;
  std::map<Tuple, int> seen;
  std::uint64_t cap = limits.max_enumeration;
  auto push = [&](const Tuple& tab, Term term) -> int {
    auto it = seen.find(tab);
    if (it != seen.end()) return it->second;
    if (tables.size() + 1 > cap)
      throw limit_error("ring_terms: closure exceeds enumeration limit");
    int idx = static_cast<int>(tables.size());
    seen.emplace(tab, idx);
    tables.push_back(tab);
    terms.push_back(std::move(term));
    return idx;
  };

  Tuple id_tab(s);
  for (Elem x = 0; x < s; ++x) id_tab[x] = x;
  push(id_tab, Term::variable(1));

  for (const auto& op : alg.operations) {
    if (op.arity == 0) continue;
    std::vector<Elem> args(op.arity, c);
    Elem f_c = alg.apply(op, args);
    for (int i = 0; i < op.arity; ++i) {
      Tuple tab(s);
      for (Elem x = 0; x < s; ++x) {
        args.assign(op.arity, c);
        args[i] = x;
        tab[x] = g.sub(alg.apply(op, args), f_c);
      }
      std::vector<Term> leaf_args(op.arity, c_leaf);
      leaf_args[i] = Term::variable(1);
      Term f_ci = Term::apply(op.name, leaf_args);
      std::vector<Term> const_args(op.arity, c_leaf);
      push(tab, sub_term(std::move(f_ci), Term::apply(op.name, const_args)));
    }
  }

  // closure under +, -, and composition
  for (std::size_t wk = 0; wk < tables.size(); ++wk) {
    Tuple neg_tab(s);
    for (Elem x = 0; x < s; ++x) neg_tab[x] = g.neg(tables[wk][x]);
    push(neg_tab, neg_term(terms[wk]));
    for (std::size_t u = 0; u <= wk; ++u) {
      Tuple sum(s), comp1(s), comp2(s);
      for (Elem x = 0; x < s; ++x) {
        sum[x] = g.add(tables[wk][x], tables[u][x]);
        comp1[x] = tables[wk][tables[u][x]];
        comp2[x] = tables[u][tables[wk][x]];
      }
      push(sum, add_term(terms[wk], terms[u]));
      push(comp1, detail::subst_x1(terms[wk], terms[u]));
      push(comp2, detail::subst_x1(terms[u], terms[wk]));
    }
  }

  // canonical order
  std::vector<int> order(tables.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return tables[a] < tables[b]; });

  RingPresentation r;
  r.alg = &alg;
  r.const_symbol = cop.name;
  r.basepoint = c;
  for (int idx : order) {
    r.elements.push_back(tables[idx]);
    r.terms.push_back(terms[idx]);
  }
  const int m = r.size();
  r.add.assign(static_cast<std::size_t>(m) * m, -1);
  r.mul.assign(static_cast<std::size_t>(m) * m, -1);
  r.neg.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    // lambda(c) = c for every ring term
    if (r.elements[i][c] != c)
      throw invariant_error("ring_terms: element does not fix the basepoint");
    Tuple ng(s);
    for (Elem x = 0; x < s; ++x) ng[x] = g.neg(r.elements[i][x]);
    r.neg[i] = r.index_of_table(ng);
    for (int j = 0; j < m; ++j) {
      Tuple sum(s), cmp(s);
      for (Elem x = 0; x < s; ++x) {
        sum[x] = g.add(r.elements[i][x], r.elements[j][x]);
        cmp[x] = r.elements[i][r.elements[j][x]];
      }
      r.add[i + j * m] = r.index_of_table(sum);
      r.mul[i + j * m] = r.index_of_table(cmp);
      if (r.add[i + j * m] < 0 || r.mul[i + j * m] < 0)
        throw invariant_error("ring_terms: closure not closed");
    }
  }
  Tuple zero_tab(s, c);
  r.unit = r.index_of_table(id_tab);
  r.zero = r.index_of_table(zero_tab);
  if (r.unit < 0 || r.zero < 0)
    throw invariant_error("ring_terms: unit or zero missing from closure");

  // ring axioms: additive group, distributivity both ways, unit laws
  r.additive_group().validate();
  for (int i = 0; i < m; ++i) {
    if (r.mul_of(r.unit, i) != i || r.mul_of(i, r.unit) != i)
      throw invariant_error("ring_terms: unit law fails");
    if (r.mul_of(r.zero, i) != r.zero || r.mul_of(i, r.zero) != r.zero)
      throw invariant_error("ring_terms: zero law fails");
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        if (r.mul_of(i, r.add_of(j, k)) != r.add_of(r.mul_of(i, j), r.mul_of(i, k)))
          throw invariant_error("ring_terms: left distributivity fails");
        if (r.mul_of(r.add_of(j, k), i) != r.add_of(r.mul_of(j, i), r.mul_of(k, i)))
          throw invariant_error("ring_terms: right distributivity fails");
      }
  }
  return r;
}

/// |R| = prod p_i^{r_i} with r_i <= alpha_i^2 over the primes of |A|.
struct RingBoundReport {
  std::vector<std::pair<long, int>> alg_factorization;
  std::vector<std::pair<long, int>> ring_factorization;
  bool holds = false;
};

inline RingBoundReport check_ring_bound(const RingPresentation& ring) {
  RingBoundReport rep;
  rep.alg_factorization = factor_integer(ring.alg->size);
  rep.ring_factorization = factor_integer(ring.size());
  rep.holds = true;
  for (auto [p, r] : rep.ring_factorization) {
    int alpha = 0;
    for (auto [q, a] : rep.alg_factorization)
      if (q == p) alpha = a;
    if (alpha == 0 || r > alpha * alpha) rep.holds = false;
  }
  if (!rep.holds)
    throw invariant_error("check_ring_bound: |R| violates the p^(alpha^2) bound");
  return rep;
}

/// The module-with-constants view: derived group, scalar action by function
/// application, and the constant set (values of nullary symbols and of
/// f(c,...,c) for every operation). Construction verifies the recovery
/// identity f(x1..xn) = [f_1](x1) + ... + [f_n](xn) + f(c,..,c) pointwise.
struct ModulePresentation {
  RingPresentation ring;
  DerivedGroup group;
  std::vector<Elem> constant_set;
  bool recovery_ok = false;

  Elem scalar(int ring_index, Elem a) const { return ring.elements[ring_index][a]; }
};

inline ModulePresentation module_view(const FiniteAlgebra& alg, const AffineWitness& w,
                                      const Limits& limits = {}, int const_op = -1) {
  RingPresentation ring = ring_terms(alg, w, limits, const_op);
  DerivedGroup grp = derived_group(alg, w, ring.basepoint, limits);
  ModulePresentation m{std::move(ring), std::move(grp), {}, false};
  const Elem c = m.ring.basepoint;
  const int s = alg.size;

  for (const auto& op : alg.operations) {
    std::vector<Elem> args(op.arity, c);
    m.constant_set.push_back(alg.apply(op, args));
  }
  std::sort(m.constant_set.begin(), m.constant_set.end());
  m.constant_set.erase(std::unique(m.constant_set.begin(), m.constant_set.end()),
                       m.constant_set.end());

  // recovery identity, per operation, over every argument tuple
  std::uint64_t spent = 0;
  for (const auto& op : alg.operations) {
    const int k = op.arity;
    if (k == 0) continue;
    std::vector<Elem> cargs(k, c);
    Elem f_c = alg.apply(op, cargs);
    std::vector<Tuple> fi(k, Tuple(s));
    for (int i = 0; i < k; ++i)
      for (Elem x = 0; x < s; ++x) {
        cargs.assign(k, c);
        cargs[i] = x;
        fi[i][x] = m.group.sub(alg.apply(op, cargs), f_c);
      }
    std::uint64_t rows = 1;
    for (int i = 0; i < k; ++i) rows *= s;
    spent += rows * (k + 1);
    limits.require_check_ops(spent, "module_view recovery");
    std::vector<Elem> args(k);
    for (std::uint64_t row = 0; row < rows; ++row) {
      std::uint64_t rr = row;
      for (int a = k - 1; a >= 0; --a) {
        args[a] = static_cast<Elem>(rr % s);
        rr /= s;
      }
      Elem acc = f_c;
      for (int i = 0; i < k; ++i) acc = m.group.add(acc, fi[i][args[i]]);
      if (acc != alg.apply(op, args))
        throw invariant_error("module_view: recovery identity fails for '" + op.name +
                              "' (input not affine?)");
    }
  }
  // scalar axioms over the ring
  const int mr = m.ring.size();
  for (int i = 0; i < mr; ++i)
    for (int j = 0; j < mr; ++j)
      for (Elem x = 0; x < s; ++x) {
        if (m.scalar(m.ring.add_of(i, j), x) !=
            m.group.add(m.scalar(i, x), m.scalar(j, x)))
          throw invariant_error("module_view: (r+s)a != ra+sa");
        if (m.scalar(m.ring.mul_of(i, j), x) != m.scalar(i, m.scalar(j, x)))
          throw invariant_error("module_view: (rs)a != r(sa)");
      }
  for (int i = 0; i < mr; ++i)
    for (Elem x = 0; x < s; ++x)
      for (Elem y = 0; y < s; ++y)
        if (m.scalar(i, m.group.add(x, y)) !=
            m.group.add(m.scalar(i, x), m.scalar(i, y)))
          throw invariant_error("module_view: r(a+b) != ra+rb");
  m.recovery_ok = true;
  return m;
}

/// An algebra together with its affine witness and module view, basepointed
/// via an owned expansion when the input lacks a nullary symbol. Heap-pinned
/// because the members point into each other.
struct ModuleContext {
  FiniteAlgebra algebra;   // expanded copy (or plain copy) of the input
  bool was_expanded = false;
  AffineWitness witness;   // re-based onto `algebra`
  std::unique_ptr<ModulePresentation> mod;

  ModuleContext() = default;
  ModuleContext(const ModuleContext&) = delete;
  ModuleContext& operator=(const ModuleContext&) = delete;
};

inline std::unique_ptr<ModuleContext> make_module_context(const FiniteAlgebra& alg,
                                                          const AffineWitness& w,
                                                          const Limits& limits = {}) {
  auto ctx = std::make_unique<ModuleContext>();
  if (alg.nullary_ops().empty()) {
    ctx->algebra = expand_constant(alg, default_basepoint(alg));
    ctx->was_expanded = true;
  } else {
    ctx->algebra = alg;
  }
  ctx->witness.alg = &ctx->algebra;
  ctx->witness.table = w.table;
  ctx->witness.term = w.term;
  ctx->mod = std::make_unique<ModulePresentation>(module_view(ctx->algebra, ctx->witness, limits));
  return ctx;
}

/// Table of a ring element on another algebra of the variety, at a chosen
/// basepoint: the stored term evaluated with the constant read as b.
inline Tuple scalar_table_at(const RingPresentation& ring, int ring_index,
                             const FiniteAlgebra& other, const AffineWitness& other_w,
                             Elem b) {
  struct Evaluator {
    const FiniteAlgebra& alg;
    const AffineWitness& w;
    const std::string& csym;
    Elem cval;
    Elem eval(const Term& t, Elem x) const {
      if (t.is_variable()) return x;
      if (t.op == kWitnessSymbol)
        return w.apply(eval(t.children[0], x), eval(t.children[1], x),
                       eval(t.children[2], x));
      if (t.op == csym && t.children.empty()) return cval;
      const Operation* op = alg.find_operation(t.op);
      if (op == nullptr)
        throw schema_error("scalar_table_at: unknown symbol '" + t.op + "'");
      std::vector<Elem> vals;
      for (const auto& ch : t.children) vals.push_back(eval(ch, x));
      return alg.apply(*op, vals);
    }
  };
  Evaluator ev{other, other_w, ring.const_symbol, b};
  Tuple out(other.size);
  for (Elem x = 0; x < other.size; ++x) out[x] = ev.eval(ring.terms[ring_index], x);
  return out;
}

}  // namespace affkit
