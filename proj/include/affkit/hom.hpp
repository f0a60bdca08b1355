#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affkit/algebra.hpp"
#include "affkit/limits.hpp"
#include "affkit/subuniverse.hpp"

namespace affkit {

/// A homomorphism from a subuniverse of A^n into a target algebra of the
/// same signature. Total homs are the special case domain = A^n; partial
/// homomorphisms (the enriched partial hom-clone) are exactly these objects.
///
/// The distinguished empty partial function is represented by an empty
/// domain; all empty partial functions compare equal regardless of arity.
struct Hom {
  Subuniverse domain;
  const FiniteAlgebra* target = nullptr;
  std::vector<Elem> values;  // aligned with domain.elems

  int arity() const { return domain.power; }
  bool empty() const { return domain.size() == 0; }

  std::optional<Elem> value_at(const Tuple& t) const {
    int idx = domain.index_of(t);
    if (idx < 0) return std::nullopt;
    return values[idx];
  }

  Elem operator()(const Tuple& t) const {
    int idx = domain.index_of(t);
    if (idx < 0)
      throw schema_error("Hom: point outside domain");
    return values[idx];
  }

  /// Image as a subuniverse of target^1.
  Subuniverse image() const {
    std::vector<Elem> vals = values;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    Subuniverse s;
    s.ambient = target;
    s.power = 1;
    for (Elem v : vals) s.elems.push_back({v});
    return s;
  }
};

inline bool hom_equal(const Hom& a, const Hom& b) {
  if (a.empty() && b.empty()) return true;
  return a.domain.power == b.domain.power && a.domain.elems == b.domain.elems &&
         a.values == b.values;
}

/// True when `h.values` commutes with every operation of the signature,
/// checked over all argument tuples from the domain.
inline bool is_homomorphism(const Hom& h, const Limits& limits = {}) {
  const FiniteAlgebra& src = *h.domain.ambient;
  const FiniteAlgebra& dst = *h.target;
  if (!src.same_signature(dst)) return false;
  const std::size_t m = h.domain.size();
  std::uint64_t spent = 0;
  std::vector<Elem> coord_args, val_args;
  for (std::size_t oi = 0; oi < src.operations.size(); ++oi) {
    const Operation& op = src.operations[oi];
    const Operation& dop = dst.operations[oi];
    const int k = op.arity;
    if (k == 0) {
      Tuple c(h.domain.power, op.table[0]);
      int idx = h.domain.index_of(c);
      if (idx < 0) return false;  // domain not closed under the constant
      if (h.values[idx] != dop.table[0]) return false;
      continue;
    }
    if (m == 0) continue;
    std::uint64_t combos = 1;
    for (int i = 0; i < k; ++i) combos *= m;
    spent += combos * static_cast<std::uint64_t>(k) * (h.domain.power + 1);
    limits.require_check_ops(spent, "is_homomorphism");
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      Tuple val(h.domain.power);
      coord_args.assign(k, 0);
      for (int c = 0; c < h.domain.power; ++c) {
        for (int i = 0; i < k; ++i) coord_args[i] = h.domain.elems[pick[i]][c];
        val[c] = src.apply(op, coord_args);
      }
      int idx = h.domain.index_of(val);
      if (idx < 0) return false;
      val_args.assign(k, 0);
      for (int i = 0; i < k; ++i) val_args[i] = h.values[pick[i]];
      if (dst.apply(dop, val_args) != h.values[idx]) return false;
      int pos = k - 1;
      while (pos >= 0 && pick[pos] + 1 == m) pick[pos--] = 0;
      if (pos < 0) break;
      ++pick[pos];
    }
  }
  return true;
}

/// Greedy generating sequence for a materialized algebra: closure of the
/// constants, then repeatedly the least element outside the closure so far.
/// Returns element indices; every element is generated from them.
inline std::vector<int> greedy_generators(const FiniteAlgebra& alg,
                                          const Limits& limits = {}) {
  std::vector<int> gens;
  std::vector<Tuple> seeds;
  auto closed_elems = [&]() -> std::vector<bool> {
    std::vector<bool> in(alg.size, false);
    if (seeds.empty() && alg.constants().empty()) return in;
    Subuniverse s = generate_subuniverse(alg, 1, seeds, limits);
    for (const auto& t : s.elems) in[t[0]] = true;
    return in;
  };
  std::vector<bool> in = closed_elems();
  for (int x = 0; x < alg.size; ++x) {
    if (in[x]) continue;
    gens.push_back(x);
    seeds.push_back({x});
    in = closed_elems();
  }
  return gens;
}

namespace detail {

/// Backtracking enumeration of all homomorphisms of a materialized source
/// algebra into dst, by assigning values to a generating sequence and
/// propagating through the operation tables.
class HomSearch {
 public:
  HomSearch(const FiniteAlgebra& src, const FiniteAlgebra& dst,
            const Limits& limits)
      : src_(src), dst_(dst), limits_(limits), gens_(greedy_generators(src, limits)) {}

  std::vector<std::vector<Elem>> run() {
    std::vector<Elem> val(src_.size, -1);
    // constants are forced
    for (std::size_t oi = 0; oi < src_.operations.size(); ++oi) {
      if (src_.operations[oi].arity != 0) continue;
      val[src_.operations[oi].table[0]] = dst_.operations[oi].table[0];
    }
    std::vector<Elem> seeded = val;
    if (!propagate(val)) return {};
    assign(0, val);
    return std::move(results_);
  }

 private:
  void assign(std::size_t gi, std::vector<Elem> val) {
    if (gi == gens_.size()) {
      if (complete(val)) results_.push_back(val);
      return;
    }
    int g = gens_[gi];
    if (val[g] >= 0) {  // already forced by propagation
      assign(gi + 1, std::move(val));
      return;
    }
    for (Elem v = 0; v < dst_.size; ++v) {
      std::vector<Elem> next = val;
      next[g] = v;
      if (propagate(next)) assign(gi + 1, std::move(next));
    }
  }

  bool complete(const std::vector<Elem>& val) const {
    for (Elem v : val)
      if (v < 0) return false;
    return true;
  }

  /// Closes the partial map under all operations; false on conflict.
  bool propagate(std::vector<Elem>& val) {
    bool changed = true;
    std::vector<Elem> args, vargs;
    while (changed) {
      changed = false;
      for (std::size_t oi = 0; oi < src_.operations.size(); ++oi) {
        const Operation& op = src_.operations[oi];
        const Operation& dop = dst_.operations[oi];
        const int k = op.arity;
        if (k == 0) continue;
        std::vector<int> known;
        for (int x = 0; x < src_.size; ++x)
          if (val[x] >= 0) known.push_back(x);
        if (known.empty()) continue;
        std::uint64_t combos = 1;
        for (int i = 0; i < k; ++i) combos *= known.size();
        spent_ += combos * static_cast<std::uint64_t>(k);
        limits_.require_check_ops(spent_, "enumerate_homs propagation");
        std::vector<std::size_t> pick(k, 0);
        while (true) {
          args.assign(k, 0);
          vargs.assign(k, 0);
          for (int i = 0; i < k; ++i) {
            args[i] = known[pick[i]];
            vargs[i] = val[known[pick[i]]];
          }
          Elem res = src_.apply(op, args);
          Elem vres = dst_.apply(dop, vargs);
          if (val[res] < 0) {
            val[res] = vres;
            changed = true;
          } else if (val[res] != vres) {
            return false;
          }
          int pos = k - 1;
          while (pos >= 0 && pick[pos] + 1 == known.size()) pick[pos--] = 0;
          if (pos < 0) break;
          ++pick[pos];
        }
      }
    }
    return true;
  }

  const FiniteAlgebra& src_;
  const FiniteAlgebra& dst_;
  const Limits& limits_;
  std::vector<int> gens_;
  std::vector<std::vector<Elem>> results_;
  std::uint64_t spent_ = 0;
};

}  // namespace detail

/// All homomorphisms from a subuniverse of A^n into dst, in lexicographic
/// order of their value maps.
inline std::vector<Hom> enumerate_homs(const Subuniverse& src,
                                       const FiniteAlgebra& dst,
                                       const Limits& limits = {}) {
  if (!src.ambient->same_signature(dst))
    throw schema_error("enumerate_homs: signature mismatch between " +
                       src.ambient->name + " and " + dst.name);
  MaterializedSub mat = materialize_subalgebra(src, limits);
  detail::HomSearch search(mat.algebra, dst, limits);
  auto maps = search.run();
  std::sort(maps.begin(), maps.end());
  std::vector<Hom> out;
  out.reserve(maps.size());
  for (auto& m : maps) {
    Hom h;
    h.domain = src;
    h.target = &dst;
    h.values = std::move(m);
    out.push_back(std::move(h));
  }
  return out;
}

/// Convenience overload: homs from the whole algebra (power 1).
inline std::vector<Hom> enumerate_homs(const FiniteAlgebra& src,
                                       const FiniteAlgebra& dst,
                                       const Limits& limits = {}) {
  return enumerate_homs(full_subuniverse(src, 1, limits), dst, limits);
}

}  // namespace affkit
