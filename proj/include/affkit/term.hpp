#pragma once

#include <memory>
#include <string>
#include <vector>

#include "affkit/algebra.hpp"
#include "affkit/errors.hpp"

namespace affkit {

/// A term tree. Leaves are 1-based variable indices or nullary symbols;
/// internal nodes carry an operation symbol with arity-many children.
struct Term {
  int var = 0;                  // > 0 for a variable leaf
  std::string op;               // operation symbol when var == 0
  std::vector<Term> children;

  static Term variable(int index) {
    Term t;
    t.var = index;
    return t;
  }

  static Term apply(std::string opname, std::vector<Term> args) {
    Term t;
    t.op = std::move(opname);
    t.children = std::move(args);
    return t;
  }

  bool is_variable() const { return var > 0; }

  int max_variable() const {
    if (is_variable()) return var;
    int m = 0;
    for (const auto& c : children) m = std::max(m, c.max_variable());
    return m;
  }

  std::string to_string() const {
    if (is_variable()) return "x" + std::to_string(var);
    if (children.empty()) return op + "()";
    std::string s = op + "(";
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (i) s += ",";
      s += children[i].to_string();
    }
    return s + ")";
  }
};

/// Evaluates a term over an algebra. args gives values for the variables,
/// 1-based: args[i-1] is the value of x_i.
inline Elem eval_term(const Term& t, const FiniteAlgebra& alg,
                      const std::vector<Elem>& args) {
  if (t.is_variable()) {
    if (t.var > static_cast<int>(args.size()))
      throw schema_error("eval_term: variable x" + std::to_string(t.var) +
                         " exceeds provided argument count " +
                         std::to_string(args.size()));
    return args[t.var - 1];
  }
  const Operation* op = alg.find_operation(t.op);
  if (op == nullptr)
    throw schema_error("eval_term: unknown operation symbol '" + t.op + "'");
  if (op->arity != static_cast<int>(t.children.size()))
    throw schema_error("eval_term: symbol '" + t.op + "' has arity " +
                       std::to_string(op->arity) + ", got " +
                       std::to_string(t.children.size()) + " children");
  std::vector<Elem> vals(t.children.size());
  for (std::size_t i = 0; i < t.children.size(); ++i)
    vals[i] = eval_term(t.children[i], alg, args);
  return alg.apply(*op, vals);
}

}  // namespace affkit
