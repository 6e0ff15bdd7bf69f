#include "gpam/symbols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

namespace gpam {

void StructureParams::validate() const {
  if (!(kappa > 0.0 && kappa < 1.0 / 3.0))
    throw std::invalid_argument("kappa must lie in (0, 1/3)");
  const double a = alpha_min();
  if (!(gamma > -a && gamma < 4.0 / 3.0))
    throw std::invalid_argument("gamma must lie in (|alpha_min|, 4/3)");
  if (!(eta >= 0.0 && eta < a + 2.0))
    throw std::invalid_argument("eta must lie in [0, alpha_min + 2)");
}

Symbol::Symbol() = default;

Symbol Symbol::one() { return Symbol(); }

Symbol Symbol::xi() {
  Symbol s;
  s.kind_ = Kind::Xi;
  s.rebuild_key();
  return s;
}

Symbol Symbol::h() {
  Symbol s;
  s.kind_ = Kind::H;
  s.rebuild_key();
  return s;
}

Symbol Symbol::x(int i, int power) {
  if (i != 1 && i != 2) throw std::invalid_argument("X index must be 1 or 2");
  if (power < 0) throw std::invalid_argument("negative X power");
  if (power == 0) return one();
  Symbol s;
  s.kind_ = Kind::X;
  s.index_ = i;
  s.power_ = power;
  s.rebuild_key();
  return s;
}

Symbol Symbol::integ(const Symbol& child) {
  Symbol s;
  s.kind_ = Kind::Integ;
  s.children_ = {child};
  s.rebuild_key();
  return s;
}

void Symbol::rebuild_key() {
  switch (kind_) {
    case Kind::One: key_ = "1"; break;
    case Kind::Xi: key_ = "Xi"; break;
    case Kind::H: key_ = "H"; break;
    case Kind::X:
      key_ = "X" + std::to_string(index_);
      if (power_ > 1) key_ += "^" + std::to_string(power_);
      break;
    case Kind::Integ: key_ = "I(" + children_[0].key_ + ")"; break;
    case Kind::Prod:
      key_.clear();
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) key_ += "*";
        key_ += children_[i].key_;
      }
      break;
  }
}

std::vector<Symbol> Symbol::factors() const {
  if (kind_ == Kind::Prod) return children_;
  if (kind_ == Kind::One) return {};
  return {*this};
}

bool Symbol::is_polynomial() const {
  for (const auto& f : factors())
    if (f.kind() != Kind::X) return false;
  return true;
}

bool Symbol::contains_h() const {
  if (kind_ == Kind::H) return true;
  for (const auto& c : children_)
    if (c.contains_h()) return true;
  return false;
}

Symbol Symbol::make_product(std::vector<Symbol> fs) {
  int xpow[3] = {0, 0, 0};
  std::vector<Symbol> rest;
  for (auto& f : fs) {
    if (f.kind_ == Kind::X)
      xpow[f.index_] += f.power_;
    else if (f.kind_ != Kind::One)
      rest.push_back(std::move(f));
  }
  for (int i = 1; i <= 2; ++i)
    if (xpow[i] > 0) rest.push_back(x(i, xpow[i]));
  if (rest.empty()) return one();
  if (rest.size() == 1) return rest[0];
  std::sort(rest.begin(), rest.end());
  Symbol s;
  s.kind_ = Kind::Prod;
  s.children_ = std::move(rest);
  s.rebuild_key();
  return s;
}

Symbol operator*(const Symbol& a, const Symbol& b) {
  auto fs = a.factors();
  auto fb = b.factors();
  fs.insert(fs.end(), fb.begin(), fb.end());
  return Symbol::make_product(std::move(fs));
}

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("symbol parse error at " + std::to_string(pos) + ": " + what +
                                " in '" + std::string(s) + "'");
  }
  int integer() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected integer");
    return std::stoi(std::string(s.substr(start, pos - start)));
  }
  Symbol factor() {
    if (eat("I(")) {
      Symbol inner = product();
      if (!eat(")")) fail("expected ')'");
      return Symbol::integ(inner);
    }
    if (eat("Xi")) return Symbol::xi();
    if (eat("X")) {
      int i = integer();
      int p = 1;
      if (eat("^")) p = integer();
      return Symbol::x(i, p);
    }
    if (eat("H")) return Symbol::h();
    if (eat("1")) return Symbol::one();
    if (eat("(")) {
      Symbol inner = product();
      if (!eat(")")) fail("expected ')'");
      return inner;
    }
    fail("unexpected token");
  }
  Symbol product() {
    Symbol acc = factor();
    while (eat("*")) acc = acc * factor();
    return acc;
  }
};

}  // namespace

Symbol Symbol::parse(std::string_view text) {
  Parser p{text};
  Symbol out = p.product();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return out;
}

double homogeneity(const Symbol& tau, const StructureParams& params) {
  switch (tau.kind()) {
    case Kind::One: return 0.0;
    case Kind::Xi:
    case Kind::H: return params.alpha_min();
    case Kind::X: return tau.power();
    case Kind::Integ: return homogeneity(tau.children()[0], params) + 2.0;
    case Kind::Prod: {
      double sum = 0.0;
      for (const auto& f : tau.children()) sum += homogeneity(f, params);
      return sum;
    }
  }
  return 0.0;
}

const char* to_string(Structure s) { return s == Structure::Tg ? "Tg" : "TgH"; }

bool in_sector(const Symbol& tau, Sector sector, Structure structure) {
  auto leaf_ok = [&](const Symbol& f) {
    return f.kind() == Kind::Xi || (f.kind() == Kind::H && structure == Structure::TgH);
  };
  if (sector == Sector::U) {
    if (tau.is_polynomial()) return true;
    return tau.kind() == Kind::Integ && in_sector(tau.children()[0], Sector::W, structure);
  }
  auto fs = tau.factors();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!leaf_ok(fs[i])) continue;
    Symbol rest = Symbol::one();
    for (std::size_t j = 0; j < fs.size(); ++j)
      if (j != i) rest = rest * fs[j];
    if (in_sector(rest, Sector::U, structure)) return true;
  }
  return false;
}

std::size_t Basis::find(const Symbol& tau) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i] == tau) return i;
  return symbols.size();
}

std::size_t Basis::index_of(const Symbol& tau) const {
  std::size_t i = find(tau);
  if (i == symbols.size())
    throw std::out_of_range("symbol " + tau.str() + " not in " + to_string(structure) + " basis");
  return i;
}

Basis enumerate_basis(Structure structure, const StructureParams& params) {
  params.validate();
  const double cut_u = params.gamma;
  const double cut_w = params.gamma + params.alpha_min();
  std::map<Symbol, Sector> found;

  for (int a = 0; a < cut_u; ++a)
    for (int b = 0; a + b < cut_u; ++b)
      found.emplace(Symbol::x(1, a) * Symbol::x(2, b), Sector::U);

  std::vector<Symbol> leaves = {Symbol::xi()};
  if (structure == Structure::TgH) leaves.push_back(Symbol::h());

  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<Symbol, Sector>> fresh;
    for (const auto& [tau, sec] : found) {
      if (sec == Sector::U) {
        for (const auto& leaf : leaves) {
          Symbol w = tau * leaf;
          if (homogeneity(w, params) < cut_w - kHomTol) fresh.emplace_back(w, Sector::W);
        }
      } else {
        Symbol u = Symbol::integ(tau);
        if (homogeneity(u, params) < cut_u - kHomTol) fresh.emplace_back(u, Sector::U);
      }
    }
    for (auto& [s, sec] : fresh)
      if (found.emplace(s, sec).second) grew = true;
  }

  std::vector<std::pair<Symbol, Sector>> list(found.begin(), found.end());
  std::sort(list.begin(), list.end(), [&](const auto& l, const auto& r) {
    double hl = homogeneity(l.first, params), hr = homogeneity(r.first, params);
    if (std::abs(hl - hr) > kHomTol) return hl < hr;
    return l.first < r.first;
  });
  Basis out;
  out.structure = structure;
  out.params = params;
  for (auto& [s, sec] : list) {
    out.symbols.push_back(s);
    out.sectors.push_back(sec);
  }
  return out;
}

}  // namespace gpam
