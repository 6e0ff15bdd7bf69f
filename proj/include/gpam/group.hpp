#pragma once

#include <array>
#include <boost/rational.hpp>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "gpam/symbols.hpp"

namespace gpam {

using Rational = boost::rational<long long>;

/// Generator of T+: either X_i or J_l(tau).
struct PlusGen {
  enum class Type { X, J } type = Type::X;
  int i = 1;
  std::array<int, 2> l{0, 0};
  Symbol tau;

  static PlusGen X(int i);
  static PlusGen J(const Symbol& tau, std::array<int, 2> l = {0, 0});
  std::string key() const;
  friend bool operator==(const PlusGen& a, const PlusGen& b) { return a.key() == b.key(); }
  friend bool operator<(const PlusGen& a, const PlusGen& b) { return a.key() < b.key(); }
};

/// Exponent map over generators; the empty map is the unit of T+.
using Monomial = std::map<PlusGen, int>;

Monomial monomial_mul(const Monomial& a, const Monomial& b);
std::string to_string(const Monomial& m);

template <class T>
using LinComb = std::map<Symbol, T>;

/// Element of T (x) T+ as a map (left symbol, right monomial) -> coefficient.
using Tensor = std::map<std::pair<Symbol, Monomial>, Rational>;

struct CoproductTerm {
  Symbol left;
  Monomial right;
  Rational coeff;
};

/// Coproduct of an arbitrary constructible symbol with the J_l cutoff rule.
Tensor coproduct_tensor(const Symbol& tau, const StructureParams& params);
/// Coproduct of a basis symbol as an ordered term list; throws when tau is not in the basis.
std::vector<CoproductTerm> coproduct(const Symbol& tau, const Basis& basis);

template <class T>
struct CharacterT {
  T jXi{};
  T jH{};
  T x1{};
  T x2{};
};
using Character = CharacterT<double>;
using RationalCharacter = CharacterT<Rational>;

template <class T>
CharacterT<T> compose(const CharacterT<T>& a, const CharacterT<T>& b) {
  return {a.jXi + b.jXi, a.jH + b.jH, a.x1 + b.x1, a.x2 + b.x2};
}

template <class T>
CharacterT<T> invert(const CharacterT<T>& a) {
  return {-a.jXi, -a.jH, -a.x1, -a.x2};
}

/// Value of the generator under f; J_l with |l|>0 or J of other symbols are inert and throw.
template <class T>
T evaluate(const CharacterT<T>& f, const PlusGen& g) {
  if (g.type == PlusGen::Type::X) return g.i == 1 ? f.x1 : f.x2;
  if (g.l[0] != 0 || g.l[1] != 0) throw std::domain_error("inert generator " + g.key());
  if (g.tau.kind() == Kind::Xi) return f.jXi;
  if (g.tau.kind() == Kind::H) return f.jH;
  throw std::domain_error("inert generator " + g.key());
}

template <class T>
T evaluate(const CharacterT<T>& f, const Monomial& m) {
  T out = T(1);
  for (const auto& [g, e] : m) {
    T v = evaluate(f, g);
    for (int k = 0; k < e; ++k) out = out * v;
  }
  return out;
}

template <class T>
T from_rational(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>)
    return r;
  else
    return static_cast<T>(r.numerator()) / static_cast<T>(r.denominator());
}

template <class T>
struct MatrixT {
  Structure structure = Structure::Tg;
  std::size_t n = 0;
  std::vector<T> a;

  MatrixT() = default;
  MatrixT(Structure s, std::size_t size) : structure(s), n(size), a(size * size, T(0)) {}
  static MatrixT identity(Structure s, std::size_t size) {
    MatrixT m(s, size);
    for (std::size_t i = 0; i < size; ++i) m(i, i) = T(1);
    return m;
  }
  T& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
  friend bool operator==(const MatrixT& x, const MatrixT& y) { return x.n == y.n && x.a == y.a; }
};

template <class T>
MatrixT<T> operator*(const MatrixT<T>& x, const MatrixT<T>& y) {
  MatrixT<T> out(x.structure, x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k) {
      if (x(i, k) == T(0)) continue;
      for (std::size_t j = 0; j < x.n; ++j) out(i, j) = out(i, j) + x(i, k) * y(k, j);
    }
  return out;
}

/// Column j holds Gamma_f applied to basis symbol j.
template <class T>
MatrixT<T> gamma_matrix(const CharacterT<T>& f, const Basis& basis) {
  MatrixT<T> m(basis.structure, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (const auto& term : coproduct(basis.symbols[j], basis)) {
      std::size_t r = basis.index_of(term.left);
      m(r, j) = m(r, j) + from_rational<T>(term.coeff) * evaluate(f, term.right);
    }
  return m;
}

template <class T>
LinComb<T> apply(const MatrixT<T>& m, const Basis& basis, std::size_t column) {
  LinComb<T> out;
  for (std::size_t r = 0; r < basis.size(); ++r)
    if (m(r, column) != T(0)) out[basis.symbols[r]] = m(r, column);
  return out;
}

/// tau_H on a Tg symbol, expanded over TgH symbols; multiplicative, commutes with I.
LinComb<Rational> translate_symbol(const Symbol& tau);
/// tau_H^+ on a T+ monomial.
std::map<Monomial, Rational> translate_plus(const Monomial& m);

struct RenormMap {
  double C = 0.0;
  Structure structure = Structure::Tg;
};

/// M(C) on a symbol: I(Xi)Xi -> I(Xi)Xi - C 1, identity otherwise (same rule for M^H).
template <class T>
LinComb<T> renorm_apply(const Symbol& tau, const T& C) {
  static const Symbol target = Symbol::parse("I(Xi)*Xi");
  LinComb<T> out;
  out[tau] = T(1);
  if (tau == target && C != T(0)) out[Symbol::one()] = -C;
  return out;
}

template <class T>
MatrixT<T> renorm_matrix(const T& C, const Basis& basis) {
  MatrixT<T> m(basis.structure, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (const auto& [s, c] : renorm_apply(basis.symbols[j], C)) m(basis.index_of(s), j) = c;
  return m;
}

MatrixT<double> renorm_matrix(const RenormMap& m, const Basis& basis);

struct IdentityResult {
  std::string identity;
  std::string structure;
  std::string symbol;
  bool pass = true;
  std::string detail;
};

struct IdentityReport {
  std::vector<IdentityResult> results;
  bool all_pass() const;
};

/// Symbolic verification of the commutation identities on every basis symbol, plus
/// group laws on `random_characters` seeded random rational characters.
IdentityReport check_identities(const StructureParams& params, int random_characters = 100,
                                unsigned seed = 20240601u);

}  // namespace gpam
