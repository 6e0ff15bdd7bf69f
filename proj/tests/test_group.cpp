#include <random>

#include "doctest.h"
#include "gpam/group.hpp"

using namespace gpam;

// Rational comparisons are evaluated eagerly; doctest decomposition recurses on them.
#define CHECK_B(...) CHECK(static_cast<bool>(__VA_ARGS__))

namespace {

Symbol S(const char* s) { return Symbol::parse(s); }

// Entries of the displayed Gamma_f matrices, keyed by (row symbol, column symbol), in the
// order W block then U block as printed.
std::vector<std::vector<std::string>> paper_tg(const std::string& a, const std::string& x1,
                                               const std::string& x2) {
  return {{"1", a, x1, x2}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "1"}};
}

Rational entry(const std::string& code, const RationalCharacter& f) {
  if (code == "0") return Rational(0);
  if (code == "1") return Rational(1);
  if (code == "a") return f.jXi;
  if (code == "b") return f.jH;
  if (code == "x1") return f.x1;
  return f.x2;
}

void check_block(const MatrixT<Rational>& m, const Basis& basis,
                 const std::vector<std::string>& order,
                 const std::vector<std::vector<std::string>>& block, const RationalCharacter& f) {
  for (std::size_t r = 0; r < order.size(); ++r)
    for (std::size_t c = 0; c < order.size(); ++c) {
      INFO("row " << order[r] << " col " << order[c]);
      CHECK_B(m(basis.index_of(S(order[r].c_str())), basis.index_of(S(order[c].c_str()))) ==
            entry(block[r][c], f));
    }
}

MatrixT<Rational> naive_product(const MatrixT<Rational>& a, const MatrixT<Rational>& b) {
  MatrixT<Rational> out(a.structure, a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < a.n; ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

}  // namespace

TEST_CASE("coproduct of elementary symbols") {
  Basis tg = enumerate_basis(Structure::Tg);
  auto dxi = coproduct(Symbol::xi(), tg);
  REQUIRE(dxi.size() == 1);
  CHECK_B(dxi[0].left == Symbol::xi());
  CHECK_B(dxi[0].right.empty());
  CHECK_B(dxi[0].coeff == Rational(1));

  auto dx = coproduct(Symbol::x(1), tg);
  REQUIRE(dx.size() == 2);
  Tensor t = coproduct_tensor(Symbol::x(1), tg.params);
  CHECK_B(t.at({Symbol::x(1), Monomial{}}) == Rational(1));
  CHECK_B(t.at({Symbol::one(), Monomial{{PlusGen::X(1), 1}}}) == Rational(1));

  Tensor ti = coproduct_tensor(S("I(Xi)"), tg.params);
  CHECK_B(ti.size() == 2);
  CHECK_B(ti.at({S("I(Xi)"), Monomial{}}) == Rational(1));
  CHECK_B(ti.at({Symbol::one(), Monomial{{PlusGen::J(Symbol::xi()), 1}}}) == Rational(1));
  CHECK_THROWS(coproduct(S("I(X1*Xi)"), tg));
}

TEST_CASE("cutoff oracle for the integration coproduct") {
  // Independent enumeration of (k, l) pairs with |Xi| + 2 - |k + l| > 0.
  StructureParams p;
  int survivors = 0;
  for (int k = 0; k <= 3; ++k)
    for (int l = 0; l <= 3; ++l)
      if (p.alpha_min() + 2.0 - (k + l) > 0) ++survivors;
  CHECK_B(survivors == 1);
  // Above the cutoff I(X1 Xi) carries derivative J terms.
  Tensor t = coproduct_tensor(S("I(X1*Xi)"), p);
  bool has_derivative = false;
  for (const auto& [k, c] : t)
    for (const auto& [g, e] : k.second)
      if (g.type == PlusGen::Type::J && (g.l[0] + g.l[1]) == 1) has_derivative = true;
  CHECK_B(has_derivative);
  // I(X1 Xi) = (I (x) Id)(X1 Xi (x) 1 + Xi (x) X1) + 1 (x) J(X1 Xi) + X1 (x) J_{1,0}(X1 Xi)
  //            + X2 (x) J_{0,1} + 1 (x) X1 J_{1,0} + 1 (x) X2 J_{0,1}
  CHECK_B(t.size() == 7);
}

TEST_CASE("gamma matrix matches the displayed Tg block structure") {
  Basis tg = enumerate_basis(Structure::Tg);
  RationalCharacter f{Rational(3, 7), 0, Rational(-2, 5), Rational(11, 3)};
  auto m = gamma_matrix(f, tg);
  check_block(m, tg, {"Xi", "I(Xi)*Xi", "X1*Xi", "X2*Xi"}, paper_tg("a", "x1", "x2"), f);
  check_block(m, tg, {"1", "I(Xi)", "X1", "X2"}, paper_tg("a", "x1", "x2"), f);
  for (const char* w : {"Xi", "I(Xi)*Xi", "X1*Xi", "X2*Xi"})
    for (const char* u : {"1", "I(Xi)", "X1", "X2"}) {
      CHECK_B(m(tg.index_of(S(w)), tg.index_of(S(u))) == Rational(0));
      CHECK_B(m(tg.index_of(S(u)), tg.index_of(S(w))) == Rational(0));
    }
}

TEST_CASE("gamma matrix matches the displayed TgH block structure") {
  Basis th = enumerate_basis(Structure::TgH);
  RationalCharacter f{Rational(5, 2), Rational(-1, 3), Rational(7, 4), Rational(2, 9)};
  auto m = gamma_matrix(f, th);
  std::vector<std::string> w = {"Xi",    "H",    "I(Xi)*Xi", "H*I(Xi)", "I(H)*Xi",
                                "H*I(H)", "X1*Xi", "H*X1",     "X2*Xi",   "H*X2"};
  std::vector<std::vector<std::string>> wb(10, std::vector<std::string>(10, "0"));
  for (int i = 0; i < 10; ++i) wb[i][i] = "1";
  wb[0][2] = "a"; wb[0][4] = "b"; wb[0][6] = "x1"; wb[0][8] = "x2";
  wb[1][3] = "a"; wb[1][5] = "b"; wb[1][7] = "x1"; wb[1][9] = "x2";
  check_block(m, th, w, wb, f);
  std::vector<std::string> u = {"1", "I(Xi)", "I(H)", "X1", "X2"};
  std::vector<std::vector<std::string>> ub(5, std::vector<std::string>(5, "0"));
  for (int i = 0; i < 5; ++i) ub[i][i] = "1";
  ub[0][1] = "a"; ub[0][2] = "b"; ub[0][3] = "x1"; ub[0][4] = "x2";
  check_block(m, th, u, ub, f);
}

TEST_CASE("gamma examples") {
  Basis tg = enumerate_basis(Structure::Tg);
  CHECK_B(gamma_matrix(RationalCharacter{}, tg) == MatrixT<Rational>::identity(Structure::Tg, 8));
  auto m = gamma_matrix(RationalCharacter{Rational(4), 0, 0, 0}, tg);
  auto col = apply(m, tg, tg.index_of(S("I(Xi)*Xi")));
  CHECK_B(col.size() == 2);
  CHECK_B(col.at(S("I(Xi)*Xi")) == Rational(1));
  CHECK_B(col.at(Symbol::xi()) == Rational(4));
  Basis th = enumerate_basis(Structure::TgH);
  auto mh = gamma_matrix(RationalCharacter{0, Rational(-3, 2), 0, 0}, th);
  auto colh = apply(mh, th, th.index_of(S("I(H)")));
  CHECK_B(colh.at(Symbol::one()) == Rational(-3, 2));
}

TEST_CASE("group law against naive matrix multiplication") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long long> num(-30, 30), den(1, 9);
  auto r = [&] { return Rational(num(rng), den(rng)); };
  for (Structure s : {Structure::Tg, Structure::TgH}) {
    Basis b = enumerate_basis(s);
    for (int k = 0; k < 20; ++k) {
      RationalCharacter f1{r(), r(), r(), r()}, f2{r(), r(), r(), r()};
      CHECK_B(naive_product(gamma_matrix(f1, b), gamma_matrix(f2, b)) ==
            gamma_matrix(compose(f1, f2), b));
      CHECK_B(naive_product(gamma_matrix(f1, b), gamma_matrix(invert(f1), b)) ==
            MatrixT<Rational>::identity(s, b.size()));
    }
  }
  RationalCharacter a{1, 0, 0, 0}, b{2, 0, 0, 0};
  CHECK_B(compose(a, b).jXi == Rational(3));
}

TEST_CASE("double characters compose exactly") {
  Basis tg = enumerate_basis(Structure::Tg);
  Character f1{0.3, 0, -1.25, 2.5}, f2{1.75, 0, 0.5, -0.125};
  CHECK_B(gamma_matrix(f1, tg) * gamma_matrix(f2, tg) == gamma_matrix(compose(f1, f2), tg));
}

TEST_CASE("translation of symbols") {
  auto t = translate_symbol(Symbol::xi());
  CHECK_B(t.size() == 2);
  CHECK_B(t.at(Symbol::h()) == Rational(1));
  CHECK_B(translate_symbol(Symbol::x(1)) == LinComb<Rational>{{Symbol::x(1), 1}});
  auto tt = translate_symbol(S("I(Xi)*Xi"));
  CHECK_B(tt == LinComb<Rational>{{S("I(Xi)*Xi"), 1}, {S("I(Xi)*H"), 1}, {S("I(H)*Xi"), 1},
                                {S("I(H)*H"), 1}});
  CHECK_THROWS(translate_symbol(Symbol::h()));
}

TEST_CASE("translation of T+ monomials") {
  Monomial jx{{PlusGen::J(Symbol::xi()), 1}};
  auto t = translate_plus(jx);
  CHECK_B(t.size() == 2);
  CHECK_B(t.at(Monomial{{PlusGen::J(Symbol::h()), 1}}) == Rational(1));
  Monomial x1{{PlusGen::X(1), 1}};
  CHECK_B(translate_plus(x1) == std::map<Monomial, Rational>{{x1, 1}});
  auto tp = translate_plus(monomial_mul(jx, x1));
  CHECK_B(tp.size() == 2);
  CHECK_B(tp.at(monomial_mul(Monomial{{PlusGen::J(Symbol::h()), 1}}, x1)) == Rational(1));
}

TEST_CASE("renormalization maps") {
  Basis tg = enumerate_basis(Structure::Tg);
  auto m = renorm_matrix<Rational>(Rational(5, 2), tg);
  auto col = apply(m, tg, tg.index_of(S("I(Xi)*Xi")));
  CHECK_B(col.at(Symbol::one()) == Rational(-5, 2));
  CHECK_B(renorm_matrix<Rational>(0, tg) == MatrixT<Rational>::identity(Structure::Tg, 8));
  CHECK_B(naive_product(renorm_matrix<Rational>(Rational(1, 3), tg),
                      renorm_matrix<Rational>(Rational(2, 7), tg)) ==
        renorm_matrix<Rational>(Rational(1, 3) + Rational(2, 7), tg));
  Basis th = enumerate_basis(Structure::TgH);
  auto mh = renorm_matrix<Rational>(Rational(2), th);
  for (std::size_t j = 0; j < th.size(); ++j)
    if (th.symbols[j] != S("I(Xi)*Xi")) CHECK_B(apply(mh, th, j).size() == 1);
  CHECK_THROWS(renorm_matrix(RenormMap{1.0, Structure::TgH}, tg));
}

TEST_CASE("hand expansion of translated renormalization at C=2") {
  auto lhs = translate_symbol(S("I(Xi)*Xi"));
  lhs[Symbol::one()] = -2;
  LinComb<Rational> rhs;
  for (const auto& [s, c] : translate_symbol(S("I(Xi)*Xi")))
    for (const auto& [t, ct] : renorm_apply<Rational>(s, Rational(2))) rhs[t] += c * ct;
  CHECK_B(lhs == rhs);
}

TEST_CASE("identity suite passes on every symbol") {
  for (StructureParams p : {StructureParams{}, StructureParams{0.3, 1.31, 0.0}}) {
    auto rep = check_identities(p, 25);
    for (const auto& r : rep.results) {
      INFO(r.identity << " " << r.structure << " " << r.symbol << " " << r.detail);
      CHECK_B(r.pass);
    }
    CHECK_B(rep.results.size() == 8 * 3 + (8 + 15) * 3);
  }
}

TEST_CASE("inert generators throw on evaluation") {
  RationalCharacter f{1, 2, 3, 4};
  CHECK_THROWS(evaluate(f, PlusGen::J(Symbol::xi(), {1, 0})));
  CHECK_THROWS(evaluate(f, PlusGen::J(S("X1*Xi"))));
  CHECK_B(evaluate(f, PlusGen::J(Symbol::h())) == Rational(2));
}
