#include "gpam/group.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace gpam {

PlusGen PlusGen::X(int i) {
  PlusGen g;
  g.type = Type::X;
  g.i = i;
  return g;
}

PlusGen PlusGen::J(const Symbol& tau, std::array<int, 2> l) {
  PlusGen g;
  g.type = Type::J;
  g.tau = tau;
  g.l = l;
  return g;
}

std::string PlusGen::key() const {
  if (type == Type::X) return "X" + std::to_string(i);
  std::string s = "J";
  if (l[0] || l[1]) s += "_{" + std::to_string(l[0]) + "," + std::to_string(l[1]) + "}";
  return s + "(" + tau.str() + ")";
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (const auto& [g, e] : b) out[g] += e;
  return out;
}

std::string to_string(const Monomial& m) {
  if (m.empty()) return "1";
  std::string s;
  for (const auto& [g, e] : m) {
    if (!s.empty()) s += "*";
    s += g.key();
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

namespace {

long long factorial(int k) {
  long long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

long long binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

Tensor tensor_mul(const Tensor& a, const Tensor& b) {
  Tensor out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      auto key = std::make_pair(ka.first * kb.first, monomial_mul(ka.second, kb.second));
      out[key] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == Rational(0); });
  return out;
}

Tensor unit_tensor() { return {{{Symbol::one(), Monomial{}}, Rational(1)}}; }

Monomial x_monomial(int k1, int k2) {
  Monomial m;
  if (k1) m[PlusGen::X(1)] = k1;
  if (k2) m[PlusGen::X(2)] = k2;
  return m;
}

}  // namespace

Tensor coproduct_tensor(const Symbol& tau, const StructureParams& params) {
  switch (tau.kind()) {
    case Kind::One: return unit_tensor();
    case Kind::Xi:
    case Kind::H: return {{{tau, Monomial{}}, Rational(1)}};
    case Kind::X: {
      Tensor out;
      const int p = tau.power();
      for (int j = 0; j <= p; ++j) {
        Monomial m;
        if (p - j) m[PlusGen::X(tau.index())] = p - j;
        out[{Symbol::x(tau.index(), j), m}] += Rational(binomial(p, j));
      }
      return out;
    }
    case Kind::Prod: {
      Tensor out = unit_tensor();
      for (const auto& f : tau.children()) out = tensor_mul(out, coproduct_tensor(f, params));
      return out;
    }
    case Kind::Integ: {
      const Symbol& child = tau.children()[0];
      Tensor out;
      for (const auto& [key, c] : coproduct_tensor(child, params)) {
        if (key.first.is_polynomial()) continue;  // I annihilates polynomials
        out[{Symbol::integ(key.first), key.second}] += c;
      }
      const double budget = homogeneity(child, params) + 2.0;
      const int maxdeg = static_cast<int>(std::ceil(budget)) + 1;
      for (int k1 = 0; k1 <= maxdeg; ++k1)
        for (int k2 = 0; k2 <= maxdeg; ++k2)
          for (int l1 = 0; l1 <= maxdeg; ++l1)
            for (int l2 = 0; l2 <= maxdeg; ++l2) {
              const int deg = k1 + k2 + l1 + l2;
              if (budget - deg <= kHomTol) continue;
              Monomial right = x_monomial(l1, l2);
              right[PlusGen::J(child, {k1 + l1, k2 + l2})] += 1;
              Rational c(1, factorial(k1) * factorial(k2) * factorial(l1) * factorial(l2));
              out[{Symbol::x(1, k1) * Symbol::x(2, k2), right}] += c;
            }
      std::erase_if(out, [](const auto& kv) { return kv.second == Rational(0); });
      return out;
    }
  }
  return {};
}

std::vector<CoproductTerm> coproduct(const Symbol& tau, const Basis& basis) {
  basis.index_of(tau);
  std::vector<CoproductTerm> out;
  for (const auto& [key, c] : coproduct_tensor(tau, basis.params))
    out.push_back({key.first, key.second, c});
  return out;
}

namespace {

LinComb<Rational> lin_mul(const LinComb<Rational>& a, const LinComb<Rational>& b) {
  LinComb<Rational> out;
  for (const auto& [sa, ca] : a)
    for (const auto& [sb, cb] : b) out[sa * sb] += ca * cb;
  std::erase_if(out, [](const auto& kv) { return kv.second == Rational(0); });
  return out;
}

}  // namespace

LinComb<Rational> translate_symbol(const Symbol& tau) {
  switch (tau.kind()) {
    case Kind::One:
    case Kind::X: return {{tau, Rational(1)}};
    case Kind::Xi: return {{Symbol::xi(), Rational(1)}, {Symbol::h(), Rational(1)}};
    case Kind::H: throw std::invalid_argument("translate_symbol expects a Tg symbol");
    case Kind::Integ: {
      LinComb<Rational> out;
      for (const auto& [s, c] : translate_symbol(tau.children()[0]))
        if (!s.is_polynomial()) out[Symbol::integ(s)] += c;
      return out;
    }
    case Kind::Prod: {
      LinComb<Rational> out{{Symbol::one(), Rational(1)}};
      for (const auto& f : tau.children()) out = lin_mul(out, translate_symbol(f));
      return out;
    }
  }
  return {};
}

std::map<Monomial, Rational> translate_plus(const Monomial& m) {
  std::map<Monomial, Rational> out{{Monomial{}, Rational(1)}};
  for (const auto& [g, e] : m) {
    std::map<Monomial, Rational> image;
    if (g.type == PlusGen::Type::X) {
      image[Monomial{{g, 1}}] = 1;
    } else {
      for (const auto& [s, c] : translate_symbol(g.tau))
        image[Monomial{{PlusGen::J(s, g.l), 1}}] += c;
    }
    for (int k = 0; k < e; ++k) {
      std::map<Monomial, Rational> next;
      for (const auto& [ma, ca] : out)
        for (const auto& [mb, cb] : image) next[monomial_mul(ma, mb)] += ca * cb;
      out = std::move(next);
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == Rational(0); });
  return out;
}

MatrixT<double> renorm_matrix(const RenormMap& m, const Basis& basis) {
  if (m.structure != basis.structure) throw std::invalid_argument("structure mismatch");
  return renorm_matrix<double>(m.C, basis);
}

bool IdentityReport::all_pass() const {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

namespace {

std::string describe(const Tensor& t) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t) {
    if (!first) os << " + ";
    first = false;
    os << c << " " << k.first.str() << "(x)" << to_string(k.second);
  }
  return first ? "0" : os.str();
}

Tensor tensor_diff(Tensor a, const Tensor& b) {
  for (const auto& [k, c] : b) a[k] -= c;
  std::erase_if(a, [](const auto& kv) { return kv.second == Rational(0); });
  return a;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> num(-40, 40), den(1, 12);
  return Rational(num(rng), den(rng));
}

}  // namespace

IdentityReport check_identities(const StructureParams& params, int random_characters,
                                unsigned seed) {
  IdentityReport rep;
  const Basis tg = enumerate_basis(Structure::Tg, params);
  const Basis th = enumerate_basis(Structure::TgH, params);
  const Rational Csym(7, 3);

  for (const auto& tau : tg.symbols) {
    // RelCon: (tau_H (x) tau_H^+) Delta tau = Delta^H tau_H(tau)
    Tensor lhs;
    for (const auto& [key, c] : coproduct_tensor(tau, params))
      for (const auto& [s, cs] : translate_symbol(key.first))
        for (const auto& [m, cm] : translate_plus(key.second)) lhs[{s, m}] += c * cs * cm;
    std::erase_if(lhs, [](const auto& kv) { return kv.second == Rational(0); });
    Tensor rhs;
    for (const auto& [s, cs] : translate_symbol(tau))
      for (const auto& [k, c] : coproduct_tensor(s, params)) rhs[k] += cs * c;
    std::erase_if(rhs, [](const auto& kv) { return kv.second == Rational(0); });
    Tensor diff = tensor_diff(lhs, rhs);
    rep.results.push_back({"relcon", "Tg", tau.str(), diff.empty(),
                           diff.empty() ? "" : "mismatch: " + describe(diff)});

    // tau_H(M tau) = M^H tau_H(tau)
    LinComb<Rational> a, b;
    for (const auto& [s, c] : renorm_apply<Rational>(tau, Csym))
      for (const auto& [t, ct] : translate_symbol(s)) a[t] += c * ct;
    for (const auto& [s, c] : translate_symbol(tau))
      for (const auto& [t, ct] : renorm_apply<Rational>(s, Csym)) b[t] += c * ct;
    std::erase_if(a, [](const auto& kv) { return kv.second == Rational(0); });
    std::erase_if(b, [](const auto& kv) { return kv.second == Rational(0); });
    bool ok = a == b;
    std::string detail;
    if (!ok)
      for (const auto& [s, c] : a)
        if (!b.count(s) || b.at(s) != c) detail = "mismatch at " + s.str();
    rep.results.push_back({"renorm_translation", "Tg", tau.str(), ok, detail});

    // tau_H preserves homogeneity termwise
    bool hom_ok = true;
    for (const auto& [s, c] : translate_symbol(tau))
      if (std::abs(homogeneity(s, params) - homogeneity(tau, params)) > kHomTol ||
          th.find(s) == th.size())
        hom_ok = false;
    rep.results.push_back({"translation_homogeneity", "Tg", tau.str(), hom_ok, ""});
  }

  std::mt19937_64 rng(seed);
  for (const Basis* basis : {&tg, &th}) {
    const char* sname = to_string(basis->structure);
    std::vector<std::string> support_fail(basis->size()), group_fail(basis->size());
    auto rand_char = [&] {
      RationalCharacter f{random_rational(rng), random_rational(rng), random_rational(rng),
                          random_rational(rng)};
      if (basis->structure == Structure::Tg) f.jH = 0;
      return f;
    };
    for (int trial = 0; trial < random_characters; ++trial) {
      RationalCharacter f1 = rand_char(), f2 = rand_char();
      auto g1 = gamma_matrix(f1, *basis), g2 = gamma_matrix(f2, *basis);
      auto g12 = gamma_matrix(compose(f1, f2), *basis);
      auto prod = g1 * g2;
      auto inv = g1 * gamma_matrix(invert(f1), *basis);
      auto id = MatrixT<Rational>::identity(basis->structure, basis->size());
      for (std::size_t j = 0; j < basis->size(); ++j) {
        const double hj = basis->homogeneity_of(j);
        for (std::size_t r = 0; r < basis->size(); ++r) {
          if (prod(r, j) != g12(r, j) || inv(r, j) != id(r, j))
            group_fail[j] = "trial " + std::to_string(trial) + " row " + basis->symbols[r].str();
          Rational expect = (r == j) ? Rational(1) : Rational(0);
          if (g1(r, j) != expect && !(basis->homogeneity_of(r) < hj - kHomTol))
            support_fail[j] = "entry at " + basis->symbols[r].str();
        }
      }
    }
    Rational c1 = random_rational(rng), c2 = random_rational(rng);
    auto m12 = renorm_matrix<Rational>(c1, *basis) * renorm_matrix<Rational>(c2, *basis);
    auto msum = renorm_matrix<Rational>(c1 + c2, *basis);
    for (std::size_t j = 0; j < basis->size(); ++j) {
      const std::string& name = basis->symbols[j].str();
      rep.results.push_back({"group_law", sname, name, group_fail[j].empty(), group_fail[j]});
      rep.results.push_back(
          {"lower_support", sname, name, support_fail[j].empty(), support_fail[j]});
      bool mok = true;
      for (std::size_t r = 0; r < basis->size(); ++r)
        if (m12(r, j) != msum(r, j)) mok = false;
      rep.results.push_back({"renorm_group", sname, name, mok, ""});
    }
  }
  return rep;
}

}  // namespace gpam
