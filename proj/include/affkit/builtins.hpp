#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affkit/algebra.hpp"
#include "affkit/errors.hpp"

namespace affkit {

/// Cyclic group Z_n with signature {add, neg, zero}.
inline FiniteAlgebra cyclic_group(int n, std::string name = "") {
  if (n < 1) throw schema_error("cyclic_group: order must be positive");
  FiniteAlgebra a;
  a.name = name.empty() ? "z" + std::to_string(n) : std::move(name);
  a.size = n;
  Operation add{"add", 2, {}};
  add.table.resize(static_cast<std::size_t>(n) * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) add.table[x * n + y] = (x + y) % n;
  Operation neg{"neg", 1, {}};
  neg.table.resize(n);
  for (Elem x = 0; x < n; ++x) neg.table[x] = (n - x) % n;
  Operation zero{"zero", 0, {0}};
  a.operations = {add, neg, zero};
  return a;
}

/// Direct product of two algebras with the same signature. Element code is
/// x + |A|*y for (x, y) in A x B.
inline FiniteAlgebra direct_product(const FiniteAlgebra& a, const FiniteAlgebra& b,
                                    std::string name = "") {
  if (!a.same_signature(b))
    throw schema_error("direct_product: signatures differ");
  FiniteAlgebra p;
  p.name = name.empty() ? a.name + "x" + b.name : std::move(name);
  p.size = a.size * b.size;
  for (std::size_t oi = 0; oi < a.operations.size(); ++oi) {
    const Operation& oa = a.operations[oi];
    const Operation& ob = b.operations[oi];
    Operation op{oa.name, oa.arity, {}};
    std::uint64_t rows = 1;
    for (int i = 0; i < oa.arity; ++i) rows *= p.size;
    op.table.resize(rows);
    std::vector<Elem> args_a(oa.arity), args_b(oa.arity);
    for (std::uint64_t row = 0; row < rows; ++row) {
      std::uint64_t r = row;
      for (int i = oa.arity - 1; i >= 0; --i) {
        Elem e = static_cast<Elem>(r % p.size);
        r /= p.size;
        args_a[i] = e % a.size;
        args_b[i] = e / a.size;
      }
      op.table[row] = a.apply(oa, args_a) + a.size * b.apply(ob, args_b);
    }
    p.operations.push_back(std::move(op));
  }
  return p;
}

/// The 8-element local ring F2[x,y] with x^2 = y^2 = xy = yx = 0, viewed as
/// a module over itself. Elements a + b*x + c*y are coded as a + 2b + 4c.
/// Signature: {add, neg, zero, s0..s7} where s_r is scalar multiplication
/// by the element coded r.
inline FiniteAlgebra f2xy_module() {
  FiniteAlgebra a;
  a.name = "f2xy";
  a.size = 8;
  auto mul = [](Elem u, Elem v) -> Elem {
    int a0 = u & 1, b0 = (u >> 1) & 1, c0 = (u >> 2) & 1;
    int a1 = v & 1, b1 = (v >> 1) & 1, c1 = (v >> 2) & 1;
    int ra = a0 & a1;
    int rb = (a0 & b1) ^ (b0 & a1);
    int rc = (a0 & c1) ^ (c0 & a1);
    return ra | (rb << 1) | (rc << 2);
  };
  Operation add{"add", 2, {}};
  add.table.resize(64);
  for (Elem u = 0; u < 8; ++u)
    for (Elem v = 0; v < 8; ++v) add.table[u * 8 + v] = u ^ v;
  Operation neg{"neg", 1, {}};
  neg.table.resize(8);
  for (Elem u = 0; u < 8; ++u) neg.table[u] = u;  // characteristic 2
  Operation zero{"zero", 0, {0}};
  a.operations = {add, neg, zero};
  for (Elem r = 0; r < 8; ++r) {
    Operation s{"s" + std::to_string(r), 1, {}};
    s.table.resize(8);
    for (Elem u = 0; u < 8; ++u) s.table[u] = mul(r, u);
    a.operations.push_back(std::move(s));
  }
  return a;
}

/// Two-element meet semilattice; not affine, used as a negative fixture.
inline FiniteAlgebra semilattice2() {
  FiniteAlgebra a;
  a.name = "meet2";
  a.size = 2;
  Operation meet{"meet", 2, {0, 0, 0, 1}};
  a.operations = {meet};
  return a;
}

/// Z3 with only the Mal'cev term x - y + z in the signature.
inline FiniteAlgebra malcev3() {
  FiniteAlgebra a;
  a.name = "mal3";
  a.size = 3;
  Operation t{"t", 3, {}};
  t.table.resize(27);
  for (Elem x = 0; x < 3; ++x)
    for (Elem y = 0; y < 3; ++y)
      for (Elem z = 0; z < 3; ++z) t.table[(x * 3 + y) * 3 + z] = ((x - y + z) % 3 + 3) % 3;
  a.operations = {t};
  return a;
}

/// Resolves builtin names: zN, products joined with 'x' (e.g. z2xz4), the
/// f2xy module (alias: sec6), meet2, mal3.
inline std::optional<FiniteAlgebra> builtin_algebra(const std::string& name) {
  if (name == "f2xy" || name == "sec6") return f2xy_module();
  if (name == "meet2") return semilattice2();
  if (name == "mal3") return malcev3();
  std::vector<int> orders;
  std::size_t pos = 0;
  while (pos < name.size()) {
    if (name[pos] != 'z') return std::nullopt;
    ++pos;
    std::size_t start = pos;
    while (pos < name.size() && isdigit(static_cast<unsigned char>(name[pos]))) ++pos;
    if (start == pos) return std::nullopt;
    orders.push_back(std::stoi(name.substr(start, pos - start)));
    if (pos < name.size()) {
      if (name[pos] != 'x') return std::nullopt;
      ++pos;
      if (pos == name.size()) return std::nullopt;
    }
  }
  if (orders.empty()) return std::nullopt;
  FiniteAlgebra a = cyclic_group(orders[0]);
  for (std::size_t i = 1; i < orders.size(); ++i)
    a = direct_product(a, cyclic_group(orders[i]));
  a.name = name;
  return a;
}

}  // namespace affkit
