#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "affkit/errors.hpp"
#include "affkit/limits.hpp"

namespace affkit {

using Elem = int;  // carrier element, always in {0, ..., size-1}

/// A basic operation given by its full table. The table is stored flat in
/// row-major order: the FIRST argument is the most significant index, i.e.
/// table[((x1*s + x2)*s + x3)...] for carrier size s. A nullary operation
/// has a one-entry table.
struct Operation {
  std::string name;
  int arity = 0;
  std::vector<Elem> table;

  std::size_t index_of(const std::vector<Elem>& args, int size) const {
    std::size_t idx = 0;
    for (int i = 0; i < arity; ++i) idx = idx * size + args[i];
    return idx;
  }
};

/// A finite algebra on the carrier {0, ..., size-1} with named operations.
struct FiniteAlgebra {
  std::string name;
  int size = 0;
  std::vector<Operation> operations;

  Elem apply(const Operation& op, const std::vector<Elem>& args) const {
    return op.table[op.index_of(args, size)];
  }

  Elem apply(int op_index, const std::vector<Elem>& args) const {
    return apply(operations[op_index], args);
  }

  const Operation* find_operation(const std::string& opname) const {
    for (const auto& op : operations)
      if (op.name == opname) return &op;
    return nullptr;
  }

  int max_arity() const {
    int m = 0;
    for (const auto& op : operations) m = std::max(m, op.arity);
    return m;
  }

  /// Indices of nullary operations, in declaration order.
  std::vector<int> nullary_ops() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(operations.size()); ++i)
      if (operations[i].arity == 0) out.push_back(i);
    return out;
  }

  std::vector<Elem> constants() const {
    std::vector<Elem> out;
    for (const auto& op : operations)
      if (op.arity == 0) out.push_back(op.table[0]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool same_signature(const FiniteAlgebra& other) const {
    if (operations.size() != other.operations.size()) return false;
    for (std::size_t i = 0; i < operations.size(); ++i) {
      if (operations[i].name != other.operations[i].name ||
          operations[i].arity != other.operations[i].arity)
        return false;
    }
    return true;
  }

  /// Checks the structural invariants: entries in range, table sizes
  /// consistent with arities, operation names unique.
  void validate() const {
    if (size <= 0) throw schema_error("algebra '" + name + "': size must be positive");
    std::vector<std::string> names;
    for (const auto& op : operations) {
      if (op.arity < 0)
        throw schema_error("operation '" + op.name + "': negative arity");
      std::uint64_t expect = 1;
      for (int i = 0; i < op.arity; ++i) expect *= static_cast<std::uint64_t>(size);
      if (op.table.size() != expect)
        throw schema_error("operation '" + op.name + "': table has " +
                           std::to_string(op.table.size()) + " entries, expected " +
                           std::to_string(expect));
      for (Elem v : op.table)
        if (v < 0 || v >= size)
          throw schema_error("operation '" + op.name + "': entry " +
                             std::to_string(v) + " outside carrier of size " +
                             std::to_string(size));
      names.push_back(op.name);
    }
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
      throw schema_error("algebra '" + name + "': duplicate operation names");
  }
};

namespace detail {
inline std::uint64_t checked_pow(std::uint64_t base, int exp, const char* what) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > (std::uint64_t{1} << 62) / base)
      throw limit_error(std::string(what) + ": power overflows 64-bit range");
    r *= base;
  }
  return r;
}
}  // namespace detail

/// Materializes the direct power A^n as a FiniteAlgebra whose carrier is
/// {0, ..., size^n - 1}. Element codes follow the tuple encoding
/// sum x_i * size^(i-1): coordinate 1 is least significant.
inline FiniteAlgebra materialize_power(const FiniteAlgebra& alg, int n,
                                       const Limits& limits = {}) {
  std::uint64_t carrier = detail::checked_pow(alg.size, n, "materialize_power");
  limits.require_enumeration(carrier, "materialize_power " + alg.name + "^" +
                                          std::to_string(n));
  FiniteAlgebra out;
  out.name = alg.name + "^" + std::to_string(n);
  out.size = static_cast<int>(carrier);

  // decode[e][i] = coordinate i of element e
  std::vector<std::vector<Elem>> decode(carrier, std::vector<Elem>(n));
  for (std::uint64_t e = 0; e < carrier; ++e) {
    std::uint64_t v = e;
    for (int i = 0; i < n; ++i) {
      decode[e][i] = static_cast<Elem>(v % alg.size);
      v /= alg.size;
    }
  }

  for (const auto& op : alg.operations) {
    Operation pop;
    pop.name = op.name;
    pop.arity = op.arity;
    std::uint64_t rows = 1;
    for (int i = 0; i < op.arity; ++i) rows *= carrier;
    limits.require_check_ops(rows * std::max<std::uint64_t>(1, n),
                             "materialize_power table for " + op.name);
    pop.table.resize(rows);
    std::vector<Elem> args(op.arity), coord_args(op.arity);
    std::vector<std::uint64_t> idx(op.arity, 0);
    for (std::uint64_t row = 0; row < rows; ++row) {
      // row-major: first argument most significant
      std::uint64_t r = row;
      for (int a = op.arity - 1; a >= 0; --a) {
        idx[a] = r % carrier;
        r /= carrier;
      }
      std::uint64_t code = 0, place = 1;
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < op.arity; ++a) coord_args[a] = decode[idx[a]][i];
        code += static_cast<std::uint64_t>(alg.apply(op, coord_args)) * place;
        place *= alg.size;
      }
      pop.table[row] = static_cast<Elem>(code);
    }
    out.operations.push_back(std::move(pop));
  }
  return out;
}

}  // namespace affkit
