#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "affkit/affine.hpp"
#include "affkit/algebra.hpp"
#include "affkit/errors.hpp"
#include "affkit/limits.hpp"
#include "affkit/subuniverse.hpp"

namespace affkit {

/// A congruence as a canonical block-id array: block ids are assigned in
/// first-occurrence order, so equal partitions have equal arrays.
struct Congruence {
  std::vector<int> block_of;
  int num_blocks = 0;

  int size() const { return static_cast<int>(block_of.size()); }
  bool related(Elem x, Elem y) const { return block_of[x] == block_of[y]; }
  bool is_diagonal() const { return num_blocks == size(); }
  bool is_full() const { return num_blocks == 1; }

  std::vector<std::vector<Elem>> blocks() const {
    std::vector<std::vector<Elem>> out(num_blocks);
    for (Elem x = 0; x < size(); ++x) out[block_of[x]].push_back(x);
    return out;
  }

  static Congruence from_labels(std::vector<int> raw) {
    Congruence c;
    c.block_of.assign(raw.size(), -1);
    std::map<int, int> relabel;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      auto it = relabel.find(raw[i]);
      if (it == relabel.end()) {
        it = relabel.emplace(raw[i], c.num_blocks++).first;
      }
      c.block_of[i] = it->second;
    }
    return c;
  }

  static Congruence diagonal(int n) {
    std::vector<int> raw(n);
    std::iota(raw.begin(), raw.end(), 0);
    return from_labels(std::move(raw));
  }

  static Congruence full(int n) { return from_labels(std::vector<int>(n, 0)); }
};

inline bool operator==(const Congruence& a, const Congruence& b) {
  return a.block_of == b.block_of;
}

inline bool congruence_less(const Congruence& a, const Congruence& b) {
  return a.block_of < b.block_of;
}

/// theta refines or equals gamma (every theta-class inside a gamma-class).
inline bool congruence_leq(const Congruence& fine, const Congruence& coarse) {
  const int n = fine.size();
  std::vector<int> img(fine.num_blocks, -1);
  for (Elem x = 0; x < n; ++x) {
    int b = fine.block_of[x];
    if (img[b] < 0)
      img[b] = coarse.block_of[x];
    else if (img[b] != coarse.block_of[x])
      return false;
  }
  return true;
}

inline Congruence congruence_meet(const Congruence& a, const Congruence& b) {
  const int n = a.size();
  std::vector<int> raw(n);
  for (Elem x = 0; x < n; ++x) raw[x] = a.block_of[x] * b.num_blocks + b.block_of[x];
  return Congruence::from_labels(std::move(raw));
}

/// Is the partition compatible with every operation? Single-coordinate
/// perturbations suffice by transitivity.
inline bool is_compatible(const FiniteAlgebra& alg, const Congruence& c,
                          const Limits& limits = {}) {
  const int s = alg.size;
  std::uint64_t spent = 0;
  std::vector<Elem> args;
  for (const auto& op : alg.operations) {
    const int k = op.arity;
    if (k == 0) continue;
    std::uint64_t contexts = 1;
    for (int i = 0; i < k - 1; ++i) contexts *= s;
    spent += static_cast<std::uint64_t>(k) * contexts * s * s;
    limits.require_check_ops(spent, "congruence compatibility");
    for (int pos = 0; pos < k; ++pos) {
      std::vector<Elem> ctx(k, 0);
      while (true) {
        for (Elem a = 0; a < s; ++a) {
          for (Elem b = a + 1; b < s; ++b) {
            if (!c.related(a, b)) continue;
            args = ctx;
            args[pos] = a;
            Elem va = alg.apply(op, args);
            args[pos] = b;
            Elem vb = alg.apply(op, args);
            if (!c.related(va, vb)) return false;
          }
        }
        // advance the context over all slots except pos
        int q = k - 1;
        while (q >= 0) {
          if (q == pos) {
            --q;
            continue;
          }
          if (ctx[q] + 1 < s) {
            ++ctx[q];
            break;
          }
          ctx[q] = 0;
          --q;
        }
        if (q < 0) break;
      }
    }
  }
  return true;
}

namespace detail {
struct DSU {
  std::vector<int> parent;
  explicit DSU(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (x > y) std::swap(x, y);
    parent[y] = x;
    return true;
  }
};
}  // namespace detail

/// Brute-force least congruence containing the given pairs: pair-closure
/// fixpoint through every operation. This is the independent oracle against
/// which the closed-form constructions are tested.
inline Congruence least_congruence(const FiniteAlgebra& alg,
                                   const std::vector<std::pair<Elem, Elem>>& pairs,
                                   const Limits& limits = {}) {
  const int s = alg.size;
  detail::DSU dsu(s);
  std::vector<std::pair<Elem, Elem>> work;
  for (auto [a, b] : pairs)
    if (dsu.unite(a, b)) work.emplace_back(a, b);

  std::uint64_t spent = 0;
  std::vector<Elem> args;
  for (std::size_t w = 0; w < work.size(); ++w) {
    auto [a, b] = work[w];
    for (const auto& op : alg.operations) {
      const int k = op.arity;
      if (k == 0) continue;
      std::uint64_t contexts = 1;
      for (int i = 0; i < k - 1; ++i) contexts *= s;
      spent += static_cast<std::uint64_t>(k) * contexts * 2;
      limits.require_check_ops(spent, "least_congruence");
      for (int pos = 0; pos < k; ++pos) {
        std::vector<Elem> ctx(k, 0);
        while (true) {
          args = ctx;
          args[pos] = a;
          Elem va = alg.apply(op, args);
          args[pos] = b;
          Elem vb = alg.apply(op, args);
          if (dsu.unite(va, vb)) work.emplace_back(va, vb);
          int q = k - 1;
          while (q >= 0) {
            if (q == pos) {
              --q;
              continue;
            }
            if (ctx[q] + 1 < s) {
              ++ctx[q];
              break;
            }
            ctx[q] = 0;
            --q;
          }
          if (q < 0) break;
        }
      }
    }
  }
  std::vector<int> raw(s);
  for (Elem x = 0; x < s; ++x) raw[x] = dsu.find(x);
  return Congruence::from_labels(std::move(raw));
}

/// The congruence generated by a subalgebra B via the closed form
/// { (x,y) : exists b in B with t(x,y,b) in B }. The relation itself is
/// checked to be a compatible equivalence; failure signals non-affine input.
inline Congruence theta_of_subalgebra(const FiniteAlgebra& alg,
                                      const AffineWitness& w,
                                      const std::vector<Elem>& B,
                                      const Limits& limits = {}) {
  const int s = alg.size;
  if (B.empty()) throw schema_error("theta_of_subalgebra: empty subalgebra");
  std::vector<bool> inB(s, false);
  for (Elem b : B) inB[b] = true;

  std::vector<bool> rel(static_cast<std::size_t>(s) * s, false);
  for (Elem x = 0; x < s; ++x)
    for (Elem y = 0; y < s; ++y)
      for (Elem b : B)
        if (inB[w.apply(x, y, b)]) {
          rel[x + static_cast<std::size_t>(y) * s] = true;
          break;
        }

  auto related = [&](Elem x, Elem y) { return rel[x + static_cast<std::size_t>(y) * s]; };
  std::uint64_t cube = static_cast<std::uint64_t>(s) * s * s;
  limits.require_check_ops(cube, "theta_of_subalgebra transitivity");
  for (Elem x = 0; x < s; ++x) {
    if (!related(x, x)) throw invariant_error("theta_of_subalgebra: relation not reflexive (input not affine?)");
    for (Elem y = 0; y < s; ++y) {
      if (related(x, y) != related(y, x))
        throw invariant_error("theta_of_subalgebra: relation not symmetric (input not affine?)");
      if (!related(x, y)) continue;
      for (Elem z = 0; z < s; ++z)
        if (related(y, z) && !related(x, z))
          throw invariant_error("theta_of_subalgebra: relation not transitive (input not affine?)");
    }
  }

  std::vector<int> raw(s, -1);
  for (Elem x = 0; x < s; ++x) {
    if (raw[x] >= 0) continue;
    for (Elem y = 0; y < s; ++y)
      if (related(x, y)) raw[y] = x;
  }
  Congruence theta = Congruence::from_labels(std::move(raw));
  if (!is_compatible(alg, theta, limits))
    throw invariant_error("theta_of_subalgebra: relation not compatible (input not affine?)");
  // B must be exactly one congruence class
  for (Elem b : B)
    if (theta.block_of[b] != theta.block_of[B[0]])
      throw invariant_error("theta_of_subalgebra: B not a single block");
  for (Elem x = 0; x < s; ++x)
    if (theta.block_of[x] == theta.block_of[B[0]] && !inB[x])
      throw invariant_error("theta_of_subalgebra: block of B exceeds B (input not affine?)");
  return theta;
}

/// All congruences: join-closure of the principal congruences, plus the
/// diagonal. Deterministic order (lexicographic on block-id arrays).
inline std::vector<Congruence> congruence_lattice(const FiniteAlgebra& alg,
                                                  const Limits& limits = {}) {
  const int s = alg.size;
  limits.require_enumeration(static_cast<std::uint64_t>(s) * s, "congruence_lattice");
  std::map<std::vector<int>, std::size_t> seen;
  std::vector<Congruence> found;
  auto add = [&](Congruence c) -> bool {
    if (seen.count(c.block_of)) return false;
    seen.emplace(c.block_of, found.size());
    found.push_back(std::move(c));
    return true;
  };
  add(Congruence::diagonal(s));
  std::vector<Congruence> principals;
  for (Elem a = 0; a < s; ++a)
    for (Elem b = a + 1; b < s; ++b) {
      Congruence c = least_congruence(alg, {{a, b}}, limits);
      if (add(c)) principals.push_back(found.back());
    }
  // close under join: join = least congruence containing both partitions
  auto rep_of = [s](const Congruence& c) {
    std::vector<Elem> rep(c.num_blocks, -1);
    for (Elem x = 0; x < s; ++x)
      if (rep[c.block_of[x]] < 0) rep[c.block_of[x]] = x;
    return rep;
  };
  for (std::size_t i = 0; i < found.size(); ++i) {
    auto rep_i = rep_of(found[i]);
    for (const auto& p : principals) {
      auto rep_p = rep_of(p);
      std::vector<std::pair<Elem, Elem>> pairs;
      pairs.reserve(2 * s);
      for (Elem x = 0; x < s; ++x) {
        pairs.emplace_back(x, rep_i[found[i].block_of[x]]);
        pairs.emplace_back(x, rep_p[p.block_of[x]]);
      }
      add(least_congruence(alg, pairs, limits));
    }
  }
  std::sort(found.begin(), found.end(),
            [](const Congruence& a, const Congruence& b) { return congruence_less(a, b); });
  return found;
}

/// Quotient algebra on the blocks of a compatible congruence. The projection
/// is verified to be a homomorphism.
struct QuotientAlgebra {
  FiniteAlgebra algebra;
  Congruence theta;
  std::vector<int> projection;  // element -> block id

  Elem project(Elem x) const { return projection[x]; }
};

inline QuotientAlgebra quotient(const FiniteAlgebra& alg, const Congruence& theta,
                                const Limits& limits = {}) {
  if (theta.size() != alg.size) throw schema_error("quotient: congruence size mismatch");
  QuotientAlgebra q;
  q.theta = theta;
  q.projection = theta.block_of;
  q.algebra.name = alg.name + "/q";
  q.algebra.size = theta.num_blocks;
  auto blocks = theta.blocks();
  std::vector<Elem> reps(theta.num_blocks);
  for (int b = 0; b < theta.num_blocks; ++b) reps[b] = blocks[b][0];

  std::uint64_t spent = 0;
  for (const auto& op : alg.operations) {
    Operation qop;
    qop.name = op.name;
    qop.arity = op.arity;
    const int k = op.arity;
    std::uint64_t rows = 1;
    for (int i = 0; i < k; ++i) rows *= theta.num_blocks;
    qop.table.resize(rows);
    std::vector<Elem> args(k);
    for (std::uint64_t row = 0; row < rows; ++row) {
      std::uint64_t r = row;
      for (int a = k - 1; a >= 0; --a) {
        args[a] = reps[r % theta.num_blocks];
        r /= theta.num_blocks;
      }
      qop.table[row] = theta.block_of[alg.apply(op, args)];
    }
    spent += rows;
    limits.require_check_ops(spent, "quotient");
    q.algebra.operations.push_back(std::move(qop));
  }
  // verify the projection is a homomorphism (well-definedness over all
  // representatives, not just the chosen ones)
  for (std::size_t oi = 0; oi < alg.operations.size(); ++oi) {
    const Operation& op = alg.operations[oi];
    const Operation& qop = q.algebra.operations[oi];
    const int k = op.arity;
    std::uint64_t rows = 1;
    for (int i = 0; i < k; ++i) rows *= alg.size;
    spent += rows * (k + 1);
    limits.require_check_ops(spent, "quotient projection check");
    std::vector<Elem> args(k), qargs(k);
    for (std::uint64_t row = 0; row < rows; ++row) {
      std::uint64_t r = row;
      for (int a = k - 1; a >= 0; --a) {
        args[a] = static_cast<Elem>(r % alg.size);
        r /= alg.size;
      }
      for (int i = 0; i < k; ++i) qargs[i] = theta.block_of[args[i]];
      if (theta.block_of[alg.apply(op, args)] != q.algebra.apply(qop, qargs))
        throw invariant_error("quotient: projection is not a homomorphism under '" +
                              op.name + "' (incompatible congruence?)");
    }
  }
  return q;
}

/// Monolith = unique minimal nontrivial congruence; exists iff the meet of
/// all nontrivial congruences is nontrivial.
inline std::optional<Congruence> monolith(const FiniteAlgebra& alg,
                                          const Limits& limits = {}) {
  auto lattice = congruence_lattice(alg, limits);
  std::optional<Congruence> meet;
  for (const auto& c : lattice) {
    if (c.is_diagonal()) continue;
    if (!meet)
      meet = c;
    else
      meet = congruence_meet(*meet, c);
  }
  if (!meet || meet->is_diagonal()) return std::nullopt;
  return meet;
}

inline bool is_subdirectly_irreducible(const FiniteAlgebra& alg,
                                       const Limits& limits = {}) {
  return monolith(alg, limits).has_value();
}

/// The smallest congruence of B extending a congruence alpha of the
/// subalgebra A, by the closed form
///   beta = { (x,y) : exists a in B with (x-a, y-a) in alpha },
/// computed over the derived group at a basepoint inside A.
///
/// `A` is the sorted element list of the subalgebra inside B's carrier and
/// `alpha` is a congruence over positions in that list.
inline Congruence minimal_congruence_extension(const std::vector<Elem>& A,
                                               const Congruence& alpha,
                                               const FiniteAlgebra& B,
                                               const AffineWitness& w,
                                               const Limits& limits = {}) {
  if (static_cast<int>(A.size()) != alpha.size())
    throw schema_error("minimal_congruence_extension: alpha size mismatch");
  Elem bp = default_basepoint(B);
  if (!std::binary_search(A.begin(), A.end(), bp)) bp = A[0];
  DerivedGroup g = derived_group(B, w, bp, limits);

  auto index_in_A = [&](Elem x) -> int {
    auto it = std::lower_bound(A.begin(), A.end(), x);
    if (it == A.end() || *it != x) return -1;
    return static_cast<int>(it - A.begin());
  };

  const int s = B.size;
  std::vector<int> raw(s, -1);
  detail::DSU dsu(s);
  for (Elem x = 0; x < s; ++x)
    for (Elem y = x + 1; y < s; ++y) {
      bool rel = false;
      for (Elem a = 0; a < s && !rel; ++a) {
        int ix = index_in_A(g.sub(x, a));
        int iy = index_in_A(g.sub(y, a));
        if (ix >= 0 && iy >= 0 && alpha.related(ix, iy)) rel = true;
      }
      if (rel) dsu.unite(x, y);
    }
  for (Elem x = 0; x < s; ++x) raw[x] = dsu.find(x);
  Congruence beta = Congruence::from_labels(std::move(raw));

  if (!is_compatible(B, beta, limits))
    throw invariant_error("minimal_congruence_extension: beta not compatible");
  // beta restricted to A^2 must be alpha, and A must be a union of blocks
  // reachable only from inside (condition (1) of the closed form).
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A.size(); ++j)
      if (alpha.related(static_cast<int>(i), static_cast<int>(j)) !=
          beta.related(A[i], A[j]))
        throw invariant_error("minimal_congruence_extension: beta does not restrict to alpha");
  for (Elem x = 0; x < s; ++x)
    for (Elem y : A)
      if (beta.related(x, y) && index_in_A(x) < 0)
        throw invariant_error("minimal_congruence_extension: block of A leaks outside A");
  return beta;
}

/// Cardinality identity |B/beta| = |B/Theta_A| * |A/alpha| for the minimal
/// extension. Failure is an implementation bug, never a data error.
struct DoubleQuotientReport {
  int blocks_beta = 0;
  int blocks_theta_A = 0;
  int blocks_alpha = 0;
  bool holds = false;
};

inline DoubleQuotientReport check_double_quotient(const std::vector<Elem>& A,
                                                  const Congruence& alpha,
                                                  const FiniteAlgebra& B,
                                                  const AffineWitness& w,
                                                  const Limits& limits = {}) {
  DoubleQuotientReport r;
  Congruence beta = minimal_congruence_extension(A, alpha, B, w, limits);
  Congruence thetaA = theta_of_subalgebra(B, w, A, limits);
  r.blocks_beta = beta.num_blocks;
  r.blocks_theta_A = thetaA.num_blocks;
  r.blocks_alpha = alpha.num_blocks;
  r.holds = (r.blocks_beta == r.blocks_theta_A * r.blocks_alpha);
  if (!r.holds)
    throw invariant_error("check_double_quotient: |B/beta| != |B/Theta_A| * |A/alpha|");
  return r;
}

inline Subuniverse intersect_subuniverses(const Subuniverse& a, const Subuniverse& b) {
  Subuniverse out;
  out.ambient = a.ambient;
  out.power = a.power;
  for (const auto& t : a.elems)
    if (b.contains(t)) out.elems.push_back(t);
  return out;
}

/// Decomposes D as an intersection of completely meet-irreducible
/// subuniverses of A^n. The full power decomposes as itself (empty meets
/// are read as the top element). The returned list is pruned greedily to
/// drop redundant members.
inline std::vector<Subuniverse> meet_irreducible_decomposition(
    const FiniteAlgebra& alg, int n, const Subuniverse& D, const Limits& limits = {}) {
  Subuniverse full = full_subuniverse(alg, n, limits);
  if (D.size() == full.size()) return {D};

  auto subs = all_subuniverses(alg, n, limits);
  std::vector<Subuniverse> factors;
  for (const auto& S : subs) {
    if (!D.is_subset_of(S)) continue;
    if (S.size() == full.size()) continue;
    // completely meet-irreducible: intersection of strict supersets != S
    std::optional<Subuniverse> inter;
    for (const auto& T : subs) {
      if (T.size() <= S.size() || !S.is_subset_of(T)) continue;
      if (!inter)
        inter = T;
      else
        inter = intersect_subuniverses(*inter, T);
    }
    if (!inter) inter = full;
    if (inter->size() != S.size()) factors.push_back(S);
  }
  auto intersect_all = [&](const std::vector<Subuniverse>& xs) {
    Subuniverse acc = full;
    for (const auto& x : xs) acc = intersect_subuniverses(acc, x);
    return acc;
  };
  if (!subuniverse_equal(intersect_all(factors), D))
    throw invariant_error("meet_irreducible_decomposition: factors do not meet to D");
  // prune redundant factors, keeping the deterministic order of the rest
  for (std::size_t i = factors.size(); i-- > 0;) {
    auto trial = factors;
    trial.erase(trial.begin() + i);
    if (subuniverse_equal(intersect_all(trial), D)) factors = std::move(trial);
  }
  return factors;
}

}  // namespace affkit
