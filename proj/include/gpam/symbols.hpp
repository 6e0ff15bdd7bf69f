#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gpam {

/// Grading parameters of the truncated structure.
struct StructureParams {
  double kappa = 0.05;
  double gamma = 1.1;
  double eta = 0.0;

  double alpha_min() const { return -1.0 - kappa; }
  /// Throws std::invalid_argument when the constraints on kappa, gamma, eta fail.
  void validate() const;
};

enum class Kind { One, Xi, H, X, Integ, Prod };

/// Immutable symbol tree. Products are flattened, with X powers merged and
/// factors sorted by canonical string, so equality is string equality.
class Symbol {
 public:
  Symbol();  // the unit 1

  static Symbol one();
  static Symbol xi();
  static Symbol h();
  static Symbol x(int i, int power = 1);
  static Symbol integ(const Symbol& child);
  static Symbol parse(std::string_view text);

  Kind kind() const { return kind_; }
  int index() const { return index_; }
  int power() const { return power_; }
  const std::vector<Symbol>& children() const { return children_; }
  const std::string& str() const { return key_; }

  /// Factors of a product, or the symbol itself for non-products (empty for 1).
  std::vector<Symbol> factors() const;
  bool is_polynomial() const;
  bool contains_h() const;

  friend Symbol operator*(const Symbol& a, const Symbol& b);
  friend bool operator==(const Symbol& a, const Symbol& b) { return a.key_ == b.key_; }
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
    return a.key_ <=> b.key_;
  }

 private:
  static Symbol make_product(std::vector<Symbol> factors);
  void rebuild_key();

  Kind kind_ = Kind::One;
  int index_ = 0;
  int power_ = 0;
  std::vector<Symbol> children_;
  std::string key_ = "1";
};

double homogeneity(const Symbol& tau, const StructureParams& params);

enum class Structure { Tg, TgH };
enum class Sector { U, W };

const char* to_string(Structure s);

/// True for symbols reachable by the gPAM rules (U: 1, X^k, I(W); W: U times a noise leaf).
bool in_sector(const Symbol& tau, Sector sector, Structure structure);

struct Basis {
  Structure structure = Structure::Tg;
  StructureParams params;
  std::vector<Symbol> symbols;
  std::vector<Sector> sectors;

  std::size_t size() const { return symbols.size(); }
  /// Position of tau, or size() when absent.
  std::size_t find(const Symbol& tau) const;
  std::size_t index_of(const Symbol& tau) const;  // throws when absent
  double homogeneity_of(std::size_t i) const { return homogeneity(symbols[i], params); }
};

Basis enumerate_basis(Structure structure, const StructureParams& params = {});

/// Homogeneity comparison tolerance.
inline constexpr double kHomTol = 1e-12;

}  // namespace gpam
