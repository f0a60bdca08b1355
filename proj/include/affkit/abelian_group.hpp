#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "affkit/affine.hpp"
#include "affkit/errors.hpp"
#include "affkit/limits.hpp"

namespace affkit {

inline std::vector<std::pair<long, int>> factor_integer(std::uint64_t n) {
  std::vector<std::pair<long, int>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(static_cast<long>(p), e);
  }
  if (n > 1) out.emplace_back(static_cast<long>(n), 1);
  return out;
}

/// A finite Abelian group on {0..size-1} given by explicit tables. Used for
/// derived groups, Hom-sets under pointwise addition, and the H_k groups.
struct GroupView {
  int size = 0;
  Elem zero = 0;
  std::vector<Elem> add_table;  // size*size, add(x,y) at x + y*size
  std::vector<Elem> neg_table;

  Elem add(Elem x, Elem y) const { return add_table[x + y * size]; }
  Elem neg(Elem x) const { return neg_table[x]; }
  Elem sub(Elem x, Elem y) const { return add(x, neg(y)); }

  Elem int_multiple(long k, Elem x) const {
    Elem base = x;
    if (k < 0) {
      base = neg(x);
      k = -k;
    }
    Elem acc = zero;
    for (long i = 0; i < k; ++i) acc = add(acc, base);
    return acc;
  }

  int order_of(Elem x) const {
    Elem acc = x;
    int ord = 1;
    while (acc != zero) {
      acc = add(acc, x);
      ++ord;
    }
    return ord;
  }

  /// Verifies the Abelian group axioms exhaustively.
  void validate() const {
    for (Elem x = 0; x < size; ++x) {
      if (add(x, zero) != x) throw invariant_error("GroupView: neutral fails");
      if (add(x, neg(x)) != zero) throw invariant_error("GroupView: inverse fails");
      for (Elem y = 0; y < size; ++y) {
        if (add(x, y) != add(y, x)) throw invariant_error("GroupView: not commutative");
        for (Elem z = 0; z < size; ++z)
          if (add(add(x, y), z) != add(x, add(y, z)))
            throw invariant_error("GroupView: not associative");
      }
    }
  }
};

inline GroupView group_view_of(const DerivedGroup& g) {
  GroupView v;
  v.size = g.size();
  v.zero = g.zero();
  v.add_table = g.add_table;
  v.neg_table = g.neg_table;
  return v;
}

/// Subgroup generated by a set of elements (sorted element list).
inline std::vector<Elem> subgroup_closure(const GroupView& g,
                                          const std::vector<Elem>& gens) {
  std::vector<bool> in(g.size, false);
  std::vector<Elem> elems;
  auto push = [&](Elem e) {
    if (!in[e]) {
      in[e] = true;
      elems.push_back(e);
    }
  };
  push(g.zero);
  for (Elem x : gens) push(x);
  for (std::size_t w = 0; w < elems.size(); ++w) {
    push(g.neg(elems[w]));
    for (std::size_t u = 0; u <= w; ++u) {
      push(g.add(elems[w], elems[u]));
      push(g.add(elems[u], elems[w]));
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

/// All subgroups, via single-generator extensions (same scheme as
/// all_subuniverses).
inline std::vector<std::vector<Elem>> all_subgroups(const GroupView& g) {
  std::map<std::vector<Elem>, bool> seen;
  std::vector<std::vector<Elem>> found;
  auto add = [&](std::vector<Elem> s) {
    if (seen.count(s)) return;
    seen.emplace(s, true);
    found.push_back(std::move(s));
  };
  add(subgroup_closure(g, {}));
  for (Elem x = 0; x < g.size; ++x) add(subgroup_closure(g, {x}));
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (Elem x = 0; x < g.size; ++x) {
      if (std::binary_search(found[i].begin(), found[i].end(), x)) continue;
      auto gens = found[i];
      gens.push_back(x);
      add(subgroup_closure(g, gens));
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return found;
}

/// A linear dependency a_i = sum_{j<i} u_j a_j found in a list of group
/// elements. index is 1-based, matching how such lists are usually written.
struct Dependency {
  int index = 0;
  std::vector<long> coeffs;
};

/// Finds the first element of the list lying in the subgroup generated by
/// its predecessors and returns witnessing integer coefficients. Guaranteed
/// to succeed for lists of length >= 1 + sum of the exponents of |G|;
/// shorter lists may be independent.
inline std::optional<Dependency> find_dependency(const GroupView& g,
                                                 const std::vector<Elem>& list) {
  // reach[e] = integer combination of list[0..i-1] producing e (first found)
  std::map<Elem, std::vector<long>> reach;
  reach[g.zero] = {};
  std::vector<Elem> frontier_order{g.zero};

  for (std::size_t i = 0; i < list.size(); ++i) {
    auto it = reach.find(list[i]);
    if (it != reach.end()) {
      Dependency d;
      d.index = static_cast<int>(i) + 1;
      d.coeffs = it->second;
      d.coeffs.resize(i, 0);  // pad trailing zero coefficients
      // verify the identity before reporting it
      Elem acc = g.zero;
      for (std::size_t j = 0; j < d.coeffs.size(); ++j)
        acc = g.add(acc, g.int_multiple(d.coeffs[j], list[j]));
      if (acc != list[i])
        throw invariant_error("find_dependency: coefficient replay failed");
      return d;
    }
    // Extend the reachable subgroup by generator list[i]. The extension is
    // the union of cosets base + k*list[i] over the previous subgroup, so
    // iterating bases over a snapshot keeps every coefficient vector free of
    // spurious list[i] components.
    const std::vector<Elem> snapshot = frontier_order;
    const int ord = g.order_of(list[i]);
    for (Elem base : snapshot) {
      const std::vector<long> base_coeffs = reach[base];
      Elem acc = base;
      for (long k = 1; k < ord; ++k) {
        acc = g.add(acc, list[i]);
        if (!reach.count(acc)) {
          auto coeffs = base_coeffs;
          coeffs.resize(i + 1, 0);
          coeffs[i] = k;
          reach.emplace(acc, std::move(coeffs));
          frontier_order.push_back(acc);
        }
      }
    }
  }
  return std::nullopt;
}

/// Smallest size of a generating set, via the p-rank of G/pG maximized over
/// primes dividing |G| (0 for the trivial group).
inline int min_generating_size(const GroupView& g) {
  if (g.size == 1) return 0;
  int best = 1;
  for (auto [p, e] : factor_integer(static_cast<std::uint64_t>(g.size))) {
    // |pG|: image of multiplication by p
    std::vector<bool> seen(g.size, false);
    int img = 0;
    for (Elem x = 0; x < g.size; ++x) {
      Elem y = g.int_multiple(p, x);
      if (!seen[y]) {
        seen[y] = true;
        ++img;
      }
    }
    int quotient = g.size / img;  // |G/pG| = p^rank
    int rank = 0;
    while (quotient > 1) {
      quotient /= static_cast<int>(p);
      ++rank;
    }
    best = std::max(best, rank);
  }
  return best;
}

/// Lexicographically least generating family of minimum cardinality.
/// DFS over ascending element indices with a growth-bound prune.
inline std::vector<Elem> min_generating_family(const GroupView& g) {
  int r = min_generating_size(g);
  if (r == 0) return {};
  int exponent = 1;
  for (Elem x = 0; x < g.size; ++x) exponent = std::lcm(exponent, g.order_of(x));

  std::vector<Elem> chosen;
  std::vector<Elem> best;
  bool found = false;
  auto dfs = [&](auto&& self, Elem start, const std::vector<Elem>& closure) -> void {
    if (found) return;
    if (static_cast<int>(chosen.size()) == r) {
      if (static_cast<int>(closure.size()) == g.size) {
        best = chosen;
        found = true;
      }
      return;
    }
    int slots = r - static_cast<int>(chosen.size());
    std::uint64_t reach = closure.size();
    for (int i = 0; i < slots; ++i) reach *= exponent;
    if (reach < static_cast<std::uint64_t>(g.size)) return;
    for (Elem x = start; x < g.size; ++x) {
      if (std::binary_search(closure.begin(), closure.end(), x)) continue;
      auto gens = chosen;
      gens.push_back(x);
      auto next = subgroup_closure(g, gens);
      chosen.push_back(x);
      self(self, x + 1, next);
      chosen.pop_back();
      if (found) return;
    }
  };
  dfs(dfs, 0, subgroup_closure(g, {}));
  if (!found) throw invariant_error("min_generating_family: rank computation disagrees with search");
  return best;
}

}  // namespace affkit
