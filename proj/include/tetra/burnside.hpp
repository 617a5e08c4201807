#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tetra/grouprep.hpp"

namespace tetra::burnside {

using grouprep::Permutation;

/// Subgroup of S4 as a bitmask over all_permutations() indices.
using S4Mask = std::uint32_t;

struct S4Class {
  std::string name;  // Z1, Z2, D1, Z3, Z4, V4, D2, D3, D4, A4, S4
  S4Mask representative;
  std::vector<S4Mask> members;
  std::vector<Permutation> generators;  // of the representative
  S4Mask normalizer;                    // of the representative
};

S4Mask s4_generate(const std::vector<Permutation>& gens);
int s4_order(S4Mask h);
bool s4_contains(S4Mask h, const Permutation& p);
/// All 30 subgroups of S4.
const std::vector<S4Mask>& s4_subgroups();
/// The 11 conjugacy classes, ordered by subgroup order.
const std::vector<S4Class>& s4_classes();
/// Index into s4_classes(); throws DomainError if h is not a subgroup.
int s4_class_of(S4Mask h);
const std::string& s4_name(S4Mask h);

enum class O2Kind { Cyclic, Dihedral, O2 };

/// Conjugacy class of a closed subgroup of S4 x O(2), written H ^Z x_L^R K.
/// Finite classes have K = Z_n or D_n; the only continuous class carried is the unit S4 x O(2).
struct AmalgamClass {
  int id = 0;
  O2Kind kind = O2Kind::Dihedral;
  int fold = 0;  // n of K = Z_n or D_n; 0 for O(2)
  S4Mask H = 0, Z = 0, R = 0;
  std::string L;  // K / ker(psi): Z1, Z2, D1, D2, ...
  std::string K;  // D4, Z3, O2
  int order = 0;  // 0 for the unit
  std::optional<int> weyl;
  std::vector<std::uint32_t> elements;  // sorted packed codes of the representative
  std::vector<std::uint32_t> generators;
  std::string canonical;  // H^Z_R:L:K
  std::string printed;    // (H^Z x_L K), R shown only when needed

  bool phi0() const { return weyl.has_value(); }
  bool is_unit() const { return kind == O2Kind::O2; }
};

using Coeff = long long;

/// Sparse integer combination of class ids of one ClassTable.
class BurnsideElement {
 public:
  BurnsideElement() = default;
  static BurnsideElement term(int id, Coeff c = 1);

  Coeff coeff(int id) const;
  void add(int id, Coeff c);
  const std::map<int, Coeff>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  BurnsideElement operator+(const BurnsideElement& o) const;
  BurnsideElement operator-(const BurnsideElement& o) const;
  BurnsideElement operator-() const;
  BurnsideElement operator*(Coeff k) const;
  bool operator==(const BurnsideElement&) const = default;

 private:
  std::map<int, Coeff> terms_;
};

/// Conjugacy classes of S4 x O(2) whose O(2)-part has order dividing a fold in the set,
/// realized inside S4 x D_R with R = 2 lcm(folds). Angles are integers modulo grid().
class ClassTable {
 public:
  /// folds are closed under divisors before use.
  explicit ClassTable(const std::vector<int>& folds);
  /// Folds l*{1,2,3,4} for every l, closed under divisors.
  static ClassTable for_modes(const std::vector<int>& modes);

  ClassTable(ClassTable&&) noexcept;
  ClassTable& operator=(ClassTable&&) noexcept;
  ~ClassTable();

  int grid() const { return R_; }
  const std::vector<int>& folds() const { return folds_; }
  const std::vector<AmalgamClass>& classes() const { return classes_; }
  const AmalgamClass& at(int id) const { return classes_.at(id); }
  int unit() const { return 0; }

  // Packed elements (sigma, e^{2 pi i a / R} kappa^s).
  std::uint32_t pack(const Permutation& p, int s, int a) const;
  /// Angle given as num/den of a full turn; throws DomainError if off-grid.
  std::uint32_t pack_turn(const Permutation& p, int s, int num, int den) const;
  Permutation perm_of(std::uint32_t x) const;
  int refl_of(std::uint32_t x) const;
  int angle_of(std::uint32_t x) const;
  std::uint32_t mul(std::uint32_t x, std::uint32_t y) const;
  std::uint32_t inv(std::uint32_t x) const;
  std::vector<std::uint32_t> generate(const std::vector<std::uint32_t>& gens) const;

  /// Class id of the subgroup generated by gens; throws DomainError if not represented.
  int classify(const std::vector<std::uint32_t>& gens) const;
  /// Accepts canonical or printed labels; throws DomainError if unknown.
  int find(std::string_view label) const;

  /// Number of conjugates of K containing the representative of L.
  int n_count(int L, int K) const;
  /// (L) <= (K) in the partial order of conjugacy classes.
  bool leq(int L, int K) const { return n_count(L, K) > 0; }

  /// dim W_{j,l}^H by character averaging; throws ConsistencyError if non-integral.
  int fixed_point_dim(int j, int l, int cls) const;
  int fixed_point_dim_of(int j, int l, const std::vector<std::uint32_t>& elements) const;

  /// Class of t -> k t rescaled loops: generators' angles divided by k, plus Z_k.
  int rescale(int cls, int k) const;

  BurnsideElement unit_element() const { return BurnsideElement::term(0); }
  BurnsideElement multiply(const BurnsideElement& a, const BurnsideElement& b) const;
  BurnsideElement pi0(const BurnsideElement& x) const;
  /// Truncated gradient degree of -Id on W_{j,l}.
  BurnsideElement basic_degree(int j, int l) const;
  /// Classes of the support with nothing else from the support strictly above.
  std::vector<int> maximal(const BurnsideElement& x) const;

  /// e.g. "-(S4 x D1) + (S4 x O2)"; "0" for the zero element.
  std::string format(const BurnsideElement& x) const;
  BurnsideElement parse(std::string_view text) const;

 private:
  struct Memo;
  void enumerate_fold(int n, O2Kind kind);
  std::vector<std::uint32_t> conjugators(int n) const;
  std::vector<std::uint32_t> canonical_key(std::vector<std::uint32_t> elems, S4Mask h, int n) const;
  BurnsideElement product_of_classes(int a, int b) const;

  int R_ = 0;
  std::vector<int> folds_;
  std::vector<AmalgamClass> classes_;
  std::vector<int> by_order_;  // ids sorted by decreasing order, unit first
  std::map<std::string, int, std::less<>> lookup_;
  std::map<std::vector<std::uint32_t>, int> keys_;  // canonical key (with fold/kind prefix) -> id
  std::vector<std::uint32_t> norm_size_;            // normalizer order inside S4 x D_{2n}
  std::unique_ptr<Memo> memo_;
};

}  // namespace tetra::burnside
