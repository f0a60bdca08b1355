#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "affkit/algebra.hpp"
#include "affkit/errors.hpp"
#include "affkit/limits.hpp"

namespace affkit {

/// A point of A^n. Stored explicitly so that long powers (free algebras live
/// in A^(size^n)) work even when size^n does not fit an integer code.
using Tuple = std::vector<Elem>;

/// Code order: the integer sum x_i * size^(i-1), coordinate 1 least
/// significant. Comparing tuples from the last coordinate down agrees with
/// comparing codes, without ever forming the (possibly huge) integers.
inline bool tuple_code_less(const Tuple& a, const Tuple& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

inline std::uint64_t encode_tuple(const Tuple& t, int size) {
  std::uint64_t code = 0;
  for (std::size_t i = t.size(); i-- > 0;)
    code = code * static_cast<std::uint64_t>(size) + static_cast<std::uint64_t>(t[i]);
  return code;
}

inline Tuple decode_tuple(std::uint64_t code, int size, int n) {
  Tuple t(n);
  for (int i = 0; i < n; ++i) {
    t[i] = static_cast<Elem>(code % size);
    code /= size;
  }
  return t;
}

namespace detail {
struct TupleHash {
  std::size_t operator()(const Tuple& t) const {
    std::size_t h = 1469598103934665603ull;
    for (Elem v : t) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};
}  // namespace detail

/// How an element of a generated subuniverse arose: either a seed/constant,
/// or an operation applied to earlier elements. Enough to rebuild a term.
struct Derivation {
  int op_index = -1;            // -1: seed (seed_index identifies which)
  int seed_index = -1;
  std::vector<int> children;    // element indices, when op_index >= 0
};

/// A subuniverse of A^power: a set of tuples closed under all operations of
/// the ambient algebra applied coordinatewise. Elements are kept sorted in
/// code order, so positions double as canonical element indices.
struct Subuniverse {
  const FiniteAlgebra* ambient = nullptr;
  int power = 1;
  std::vector<Tuple> elems;

  std::size_t size() const { return elems.size(); }

  bool contains(const Tuple& t) const {
    return std::binary_search(elems.begin(), elems.end(), t, tuple_code_less);
  }

  /// Index of a tuple in the sorted element list; -1 if absent.
  int index_of(const Tuple& t) const {
    auto it = std::lower_bound(elems.begin(), elems.end(), t, tuple_code_less);
    if (it == elems.end() || *it != t) return -1;
    return static_cast<int>(it - elems.begin());
  }

  bool is_subset_of(const Subuniverse& other) const {
    for (const auto& t : elems)
      if (!other.contains(t)) return false;
    return true;
  }

  std::vector<std::uint64_t> codes() const {
    std::vector<std::uint64_t> out;
    out.reserve(elems.size());
    for (const auto& t : elems) out.push_back(encode_tuple(t, ambient->size));
    return out;
  }
};

inline bool subuniverse_equal(const Subuniverse& a, const Subuniverse& b) {
  return a.power == b.power && a.elems == b.elems;
}

/// Deterministic order on subuniverses of a fixed power: by cardinality,
/// then lexicographically on the sorted tuple lists.
inline bool subuniverse_less(const Subuniverse& a, const Subuniverse& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.elems[i] != b.elems[i]) return tuple_code_less(a.elems[i], b.elems[i]);
  }
  return false;
}

/// Result of a closure run: the subuniverse plus, for every element, how it
/// was produced. Element order here is generation order, not code order;
/// `sorted()` converts to the canonical form.
struct ClosureResult {
  const FiniteAlgebra* ambient = nullptr;
  int power = 1;
  std::vector<Tuple> gen_order;
  std::vector<Derivation> derivations;

  Subuniverse sorted() const {
    Subuniverse s;
    s.ambient = ambient;
    s.power = power;
    s.elems = gen_order;
    std::sort(s.elems.begin(), s.elems.end(), tuple_code_less);
    return s;
  }
};

/// Least subuniverse of A^n containing the seeds and the values of all
/// nullary symbols (interpreted as constant tuples). Fixpoint of one-step
/// closure under every operation applied coordinatewise.
inline ClosureResult generate_subuniverse_closure(const FiniteAlgebra& alg, int n,
                                                  const std::vector<Tuple>& seeds,
                                                  const Limits& limits = {}) {
  ClosureResult out;
  out.ambient = &alg;
  out.power = n;

  auto constants = alg.constants();
  if (seeds.empty() && constants.empty())
    throw schema_error("generate_subuniverse: empty seed set with constant-free signature");

  std::unordered_map<Tuple, int, detail::TupleHash> seen;
  auto add = [&](const Tuple& t, Derivation d) -> bool {
    if (seen.count(t)) return false;
    limits.require_enumeration(out.gen_order.size() + 1, "generate_subuniverse");
    seen.emplace(t, static_cast<int>(out.gen_order.size()));
    out.gen_order.push_back(t);
    out.derivations.push_back(std::move(d));
    return true;
  };

  int seed_no = 0;
  for (const auto& s : seeds) {
    if (static_cast<int>(s.size()) != n)
      throw schema_error("generate_subuniverse: seed arity mismatch");
    for (Elem v : s)
      if (v < 0 || v >= alg.size)
        throw schema_error("generate_subuniverse: seed entry outside carrier");
    Derivation d;
    d.seed_index = seed_no++;
    add(s, d);
  }
  for (int oi = 0; oi < static_cast<int>(alg.operations.size()); ++oi) {
    if (alg.operations[oi].arity != 0) continue;
    Tuple t(n, alg.operations[oi].table[0]);
    Derivation d;
    d.op_index = oi;
    add(t, d);
  }

  // Worklist closure. For element w, each operation runs over exactly the
  // argument vectors whose maximum index is w (first occurrence of w at
  // position j; earlier slots < w, later slots <= w), so every vector over
  // the final set is visited once.
  std::uint64_t spent = 0;
  std::vector<Elem> coord_args;
  std::vector<int> pick;
  for (std::size_t w = 0; w < out.gen_order.size(); ++w) {
    for (int oi = 0; oi < static_cast<int>(alg.operations.size()); ++oi) {
      const Operation& op = alg.operations[oi];
      const int k = op.arity;
      if (k == 0) continue;
      for (int j = 0; j < k; ++j) {
        // slots [0, j) range over {0..w-1}, slot j is w, slots (j, k) over {0..w}
        if (w == 0 && j > 0) break;
        std::uint64_t combos = 1;
        for (int i = 0; i < j; ++i) combos *= w;
        for (int i = j + 1; i < k; ++i) combos *= (w + 1);
        if (combos == 0) continue;
        spent += combos * static_cast<std::uint64_t>(k) * n;
        limits.require_check_ops(spent, "generate_subuniverse closure");
        pick.assign(k, 0);
        pick[j] = static_cast<int>(w);
        while (true) {
          Tuple val(n);
          coord_args.assign(k, 0);
          for (int c = 0; c < n; ++c) {
            for (int i = 0; i < k; ++i) coord_args[i] = out.gen_order[pick[i]][c];
            val[c] = alg.apply(op, coord_args);
          }
          Derivation d;
          d.op_index = oi;
          d.children = pick;
          add(val, d);

          int pos = k - 1;
          while (pos >= 0) {
            if (pos == j) {
              --pos;
              continue;
            }
            int cap = (pos < j) ? static_cast<int>(w) - 1 : static_cast<int>(w);
            if (pick[pos] < cap) {
              ++pick[pos];
              break;
            }
            pick[pos] = 0;
            --pos;
          }
          if (pos < 0) break;
        }
      }
    }
  }
  return out;
}

inline Subuniverse generate_subuniverse(const FiniteAlgebra& alg, int n,
                                        const std::vector<Tuple>& seeds,
                                        const Limits& limits = {}) {
  return generate_subuniverse_closure(alg, n, seeds, limits).sorted();
}

/// A^n itself as a subuniverse (requires size^n within limits).
inline Subuniverse full_subuniverse(const FiniteAlgebra& alg, int n,
                                    const Limits& limits = {}) {
  std::uint64_t carrier = detail::checked_pow(alg.size, n, "full_subuniverse");
  limits.require_enumeration(carrier, "full_subuniverse");
  Subuniverse s;
  s.ambient = &alg;
  s.power = n;
  s.elems.reserve(carrier);
  for (std::uint64_t c = 0; c < carrier; ++c)
    s.elems.push_back(decode_tuple(c, alg.size, n));
  return s;
}

inline Subuniverse subuniverse_from_codes(const FiniteAlgebra& alg, int n,
                                          std::vector<std::uint64_t> codes) {
  Subuniverse s;
  s.ambient = &alg;
  s.power = n;
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  for (auto c : codes) s.elems.push_back(decode_tuple(c, alg.size, n));
  return s;
}

/// True when the tuple set is closed under every operation (the Subuniverse
/// invariant, checked exhaustively).
inline bool is_closed(const Subuniverse& s, const Limits& limits = {}) {
  const FiniteAlgebra& alg = *s.ambient;
  const std::size_t m = s.size();
  std::uint64_t spent = 0;
  std::vector<Elem> coord_args;
  for (const auto& op : alg.operations) {
    const int k = op.arity;
    if (k == 0) {
      Tuple val(s.power, op.table[0]);
      if (!s.contains(val)) return false;
      continue;
    }
    if (m == 0) continue;
    std::uint64_t combos = 1;
    for (int i = 0; i < k; ++i) combos *= m;
    spent += combos * static_cast<std::uint64_t>(k) * s.power;
    limits.require_check_ops(spent, "is_closed");
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      Tuple val(s.power);
      coord_args.assign(k, 0);
      for (int c = 0; c < s.power; ++c) {
        for (int i = 0; i < k; ++i) coord_args[i] = s.elems[pick[i]][c];
        val[c] = alg.apply(op, coord_args);
      }
      if (!s.contains(val)) return false;
      int pos = k - 1;
      while (pos >= 0 && pick[pos] + 1 == m) pick[pos--] = 0;
      if (pos < 0) break;
      ++pick[pos];
    }
  }
  return true;
}

/// All subuniverses of A^n (nonempty, duplicate-free, deterministic order).
/// Every closed set is found: start from singly generated subuniverses and
/// repeatedly extend by one generator.
inline std::vector<Subuniverse> all_subuniverses(const FiniteAlgebra& alg, int n,
                                                 const Limits& limits = {}) {
  Subuniverse full = full_subuniverse(alg, n, limits);

  std::map<std::vector<std::uint64_t>, std::size_t> seen;
  std::vector<Subuniverse> found;
  auto add = [&](Subuniverse s) -> bool {
    auto key = s.codes();
    if (seen.count(key)) return false;
    seen.emplace(std::move(key), found.size());
    found.push_back(std::move(s));
    return true;
  };

  if (!alg.constants().empty())
    add(generate_subuniverse(alg, n, {}, limits));
  for (const auto& t : full.elems)
    add(generate_subuniverse(alg, n, {t}, limits));

  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& t : full.elems) {
      if (found[i].contains(t)) continue;
      auto seeds = found[i].elems;
      seeds.push_back(t);
      add(generate_subuniverse(alg, n, seeds, limits));
    }
  }
  std::sort(found.begin(), found.end(), subuniverse_less);
  return found;
}

/// A subuniverse materialized as an algebra in its own right: carrier is
/// {0..|S|-1} following the code order of the tuples, operations induced.
struct MaterializedSub {
  FiniteAlgebra algebra;
  Subuniverse source;

  int index_of(const Tuple& t) const { return source.index_of(t); }
  const Tuple& tuple_of(int idx) const { return source.elems[idx]; }
};

inline MaterializedSub materialize_subalgebra(const Subuniverse& s,
                                              const Limits& limits = {}) {
  const FiniteAlgebra& alg = *s.ambient;
  limits.require_enumeration(s.size(), "materialize_subalgebra");
  MaterializedSub out;
  out.source = s;
  out.algebra.name = alg.name + "|sub" + std::to_string(s.size());
  out.algebra.size = static_cast<int>(s.size());
  const std::size_t m = s.size();
  std::uint64_t spent = 0;
  std::vector<Elem> coord_args;
  for (const auto& op : alg.operations) {
    Operation sop;
    sop.name = op.name;
    sop.arity = op.arity;
    const int k = op.arity;
    std::uint64_t rows = 1;
    for (int i = 0; i < k; ++i) rows *= m;
    spent += rows * static_cast<std::uint64_t>(std::max(1, k)) * s.power;
    limits.require_check_ops(spent, "materialize_subalgebra");
    sop.table.resize(rows);
    std::vector<std::size_t> pick(k, 0);
    for (std::uint64_t row = 0; row < rows; ++row) {
      std::uint64_t r = row;
      for (int a = k - 1; a >= 0; --a) {
        pick[a] = r % m;
        r /= m;
      }
      Tuple val(s.power);
      coord_args.assign(k, 0);
      for (int c = 0; c < s.power; ++c) {
        for (int i = 0; i < k; ++i) coord_args[i] = s.elems[pick[i]][c];
        val[c] = alg.apply(op, coord_args);
      }
      int idx = s.index_of(val);
      if (idx < 0)
        throw invariant_error("materialize_subalgebra: set not closed under '" +
                              op.name + "'");
      sop.table[row] = idx;
    }
    out.algebra.operations.push_back(std::move(sop));
  }
  return out;
}

}  // namespace affkit
