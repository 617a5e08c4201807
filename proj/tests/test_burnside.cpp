#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "golden.hpp"
#include "tetra/burnside.hpp"
#include "tetra/errors.hpp"

using namespace tetra;
using namespace tetra::burnside;

namespace {

const ClassTable& table12() {
  static const ClassTable t = ClassTable::for_modes({1, 2});
  return t;
}

const ClassTable& table1() {
  static const ClassTable t = ClassTable::for_modes({1});
  return t;
}

S4Mask mask_of(std::initializer_list<const char*> cycles) {
  S4Mask m = 0;
  for (auto c : cycles) m |= 1u << Permutation::parse(c).index();
  return m;
}

// Irreducible real matrices of S4: trivial, tetrahedral, the V_2 block of R^12, twisted tetrahedral, sign.
Eigen::MatrixXd irrep(int j, const Permutation& s) {
  switch (j) {
    case 0: return Eigen::MatrixXd::Identity(1, 1);
    case 1: return grouprep::realize(s);
    case 3: return s.sign() * grouprep::realize(s);
    case 4: return Eigen::MatrixXd::Constant(1, 1, s.sign());
  }
  static const Eigen::MatrixXd Q = [] {
    Eigen::SelfAdjointEigenSolver<Mat12> es(grouprep::isotypic_projector(2));
    return Eigen::MatrixXd(es.eigenvectors().rightCols(2));
  }();
  return Q.transpose() * grouprep::action_matrix(s) * Q;
}

// dim W_{j,l}^H from the rank of the averaged matrix action on V_j (x) R^2.
int fixed_dim_by_matrices(const ClassTable& T, int j, int l, const std::vector<std::uint32_t>& elems) {
  const int d = grouprep::CharacterTable::dim(j);
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  for (auto x : elems) {
    const double th = 2.0 * std::numbers::pi * l * T.angle_of(x) / T.grid();
    Eigen::Matrix2d rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Eigen::Matrix2d conj = Eigen::Matrix2d::Identity();
    if (T.refl_of(x)) conj(1, 1) = -1.0;
    const Eigen::Matrix2d m2 = rot * conj;
    const Eigen::MatrixXd r = irrep(j, T.perm_of(x));
    Eigen::MatrixXd k(2 * d, 2 * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) k.block<2, 2>(2 * a, 2 * b) = r(a, b) * m2;
    avg += k;
  }
  avg /= static_cast<double>(elems.size());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(avg);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()[i] > 0.5;
  return rank;
}

std::vector<std::uint32_t> conjugate(const ClassTable& T, const std::vector<std::uint32_t>& e, std::uint32_t g) {
  std::vector<std::uint32_t> out;
  for (auto x : e) out.push_back(T.mul(T.mul(g, x), T.inv(g)));
  std::sort(out.begin(), out.end());
  return out;
}

// (L) <= (K) by brute force over S4 x D_R conjugators on the full angle grid.
bool brute_leq(const ClassTable& T, int L, int K) {
  const auto& l = T.at(L);
  const auto& k = T.at(K);
  if (k.is_unit()) return true;
  if (l.is_unit()) return false;
  for (const auto& p : grouprep::all_permutations())
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < T.grid(); ++a) {
        const auto g = T.pack(p, s, a);
        bool ok = true;
        for (auto x : l.generators)
          if (!std::binary_search(k.elements.begin(), k.elements.end(), T.mul(T.mul(g, x), T.inv(g)))) {
            ok = false;
            break;
          }
        if (ok) return true;
      }
  return false;
}

}  // namespace

TEST_CASE("S4 subgroup lattice") {
  CHECK(s4_subgroups().size() == 30);
  const auto& cs = s4_classes();
  REQUIRE(cs.size() == 11);
  std::size_t total = 0;
  for (const auto& c : cs) total += c.members.size();
  CHECK(total == 30);

  CHECK(s4_name(mask_of({"(1)", "(12)"})) == "D1");
  CHECK(s4_name(mask_of({"(1)", "(12)(34)"})) == "Z2");
  // Named sets
  CHECK(cs[s4_class_of(mask_of({"(1)", "(12)(34)", "(13)(24)", "(14)(23)"}))].name == "V4");
  const S4Mask d4 = mask_of({"(1)", "(1324)", "(12)(34)", "(1423)", "(34)", "(14)(23)", "(12)", "(13)(24)"});
  CHECK(cs[s4_class_of(d4)].representative == d4);
  CHECK(cs[s4_class_of(mask_of({"(1)", "(1324)", "(12)(34)", "(1423)"}))].name == "Z4");
  CHECK(cs[s4_class_of(mask_of({"(1)", "(123)", "(132)", "(12)", "(23)", "(13)"}))].name == "D3");
  const S4Mask d2 = mask_of({"(1)", "(12)(34)", "(12)", "(34)"});
  CHECK(s4_name(d2) == "D2");
  CHECK(cs[s4_class_of(d2)].representative == d2);
  CHECK(s4_name(1u) == "Z1");
  CHECK(s4_name(0xFFFFFFu) == "S4");
  CHECK_THROWS_AS(s4_class_of(0x6u), DomainError);
}

TEST_CASE("amalgam enumeration") {
  const auto& T = table12();
  CHECK(T.at(T.unit()).canonical == "S4^S4_S4:Z1:O2");
  CHECK(T.find("(S4 x O2)") == T.unit());
  for (int l : {1, 2}) {
    const int d3 = T.find("(D3^Z1 x_D3 D" + std::to_string(3 * l) + ")");
    CHECK(T.at(d3).L == "D3");
    std::set<int> ids;
    for (const char* z : {"D2", "Z4", "V4"}) ids.insert(T.find("(D4^" + std::string(z) + " x_Z2 D" + std::to_string(2 * l) + ")"));
    CHECK(ids.size() == 3);
  }
  std::set<std::string> labels;
  for (const auto& c : T.classes()) {
    CHECK(labels.insert(c.canonical).second);
    CHECK(T.find(c.canonical) == c.id);
    CHECK(T.find(c.printed) == c.id);
    if (c.is_unit()) continue;
    // Goursat data: |class| = |H| |ker psi|, and [H : R] <= 2.
    CHECK(s4_order(c.H) % s4_order(c.Z) == 0);
    CHECK((c.R & ~c.H) == 0u);
    CHECK(s4_order(c.H) / s4_order(c.R) <= 2);
    CHECK((s4_order(c.H) / s4_order(c.R) == 2) == (c.L[0] == 'D'));
    CHECK(T.classify(c.generators) == c.id);
  }
  CHECK_THROWS_AS(T.find("(S4 x D9)"), DomainError);
}

TEST_CASE("Weyl groups") {
  const auto& T = table12();
  CHECK(*T.at(T.unit()).weyl == 1);
  for (int l : {1, 2}) CHECK(*T.at(T.find("(S4 x D" + std::to_string(l) + ")")).weyl == 2);
  CHECK_FALSE(T.at(T.find("(S4 x Z2)")).weyl.has_value());
  CHECK_FALSE(T.at(T.find("S4^S4_S4:Z1:Z1")).phi0());
}

TEST_CASE("n(L,K) counts") {
  const auto& T = table12();
  for (const auto& c : T.classes()) {
    if (!c.phi0()) continue;
    CHECK(T.n_count(c.id, c.id) == 1);
    CHECK(T.n_count(c.id, T.unit()) == 1);
  }
  // Oracle: conjugates of D3 in S4 containing (12).
  int oracle = 0;
  for (S4Mask m : s4_classes()[s4_class_of(mask_of({"(1)", "(123)", "(132)", "(12)", "(23)", "(13)"}))].members)
    oracle += s4_contains(m, Permutation::parse("(12)"));
  CHECK(oracle == 2);
  CHECK(T.n_count(T.find("(D1 x D1)"), T.find("(D3 x D1)")) == oracle);
  CHECK_THROWS_AS(T.n_count(T.find("(S4 x Z1)"), T.find("(S4 x D1)")), DomainError);
}

TEST_CASE("partial order agrees with brute-force containment") {
  const auto& T = table1();
  std::vector<int> phi0;
  for (const auto& c : T.classes())
    if (c.phi0()) phi0.push_back(c.id);
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, phi0.size() - 1);
  int positives = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int a = phi0[pick(rng)], b = phi0[pick(rng)];
    const bool leq = T.leq(a, b);
    CHECK(leq == brute_leq(T, a, b));
    positives += leq;
  }
  // Both outcomes exercised, plus every pair from one degree.
  const auto deg = T.basic_degree(1, 1);
  for (auto [a, ca] : deg.terms())
    for (auto [b, cb] : deg.terms()) {
      CHECK(T.leq(a, b) == brute_leq(T, a, b));
      positives += T.leq(a, b);
    }
  CHECK(positives > 20);
}

TEST_CASE("fixed-point dimensions") {
  const auto& T = table12();
  for (int l : {1, 2}) {
    CHECK(T.fixed_point_dim(0, l, T.find("(S4 x D" + std::to_string(l) + ")")) == 1);
    CHECK(T.fixed_point_dim(0, l, T.find("S4^S4_S4:Z1:Z" + std::to_string(l))) == 2);
    for (int j = 0; j < 5; ++j) CHECK(T.fixed_point_dim(j, l, T.unit()) == 0);
  }
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> perm(0, 23), refl(0, 1), ang(0, T.grid() - 1);
  for (const auto& c : T.classes()) {
    if (c.is_unit() || c.fold > 4) continue;
    for (int j = 0; j < 5; ++j)
      for (int l : {1, 2}) {
        const int d = T.fixed_point_dim(j, l, c.id);
        CHECK(d == fixed_dim_by_matrices(T, j, l, c.elements));
        for (int k = 0; k < 10; ++k) {
          const auto g = T.pack(Permutation::from_index(perm(rng)), refl(rng), ang(rng));
          CHECK(T.fixed_point_dim_of(j, l, conjugate(T, c.elements, g)) == d);
        }
      }
  }
}

TEST_CASE("basic degrees reproduce the printed tables") {
  const auto& T = table12();
  for (int l : {1, 2})
    for (int j = 0; j < 5; ++j) {
      const auto expected = T.parse(golden::instantiate(golden::basic_degrees()[j], l));
      const auto got = T.basic_degree(j, l);
      INFO("j=" << j << " l=" << l << " got " << T.format(got));
      CHECK(got == expected);
    }
  CHECK(T.basic_degree(2, 1).terms().size() == 6);
  CHECK_THROWS_AS(T.basic_degree(0, 3), DomainError);
}

TEST_CASE("basic degrees do not depend on the fold set") {
  const auto& small = table1();
  const auto& big = table12();
  for (int j = 0; j < 5; ++j) CHECK(big.format(big.basic_degree(j, 1)) == small.format(small.basic_degree(j, 1)));
}

TEST_CASE("involution and printed products") {
  const auto& T = table12();
  for (int l : {1, 2})
    for (int j = 0; j < 5; ++j) {
      const auto d = T.basic_degree(j, l);
      CHECK(T.multiply(d, d) == T.unit_element());
    }
  const auto d01 = T.basic_degree(0, 1);
  CHECK(T.multiply(d01, T.basic_degree(1, 1) - T.unit_element()) == T.parse(golden::omega_11()));
}

TEST_CASE("ring axioms on random two-term elements") {
  const auto& T = table1();
  std::vector<int> phi0;
  for (const auto& c : T.classes())
    if (c.phi0()) phi0.push_back(c.id);
  std::mt19937 rng(29);
  std::uniform_int_distribution<std::size_t> pick(0, phi0.size() - 1);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<BurnsideElement> pool;
  for (int i = 0; i < 20; ++i) {
    BurnsideElement e;
    e.add(phi0[pick(rng)], coef(rng));
    e.add(phi0[pick(rng)], coef(rng));
    pool.push_back(e);
  }
  const auto one = T.unit_element();
  for (const auto& a : pool) {
    CHECK(T.multiply(one, a) == a);
    CHECK(T.multiply(a, one) == a);
  }
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i; j < pool.size(); ++j) CHECK(T.multiply(pool[i], pool[j]) == T.multiply(pool[j], pool[i]));
  std::uniform_int_distribution<std::size_t> idx(0, pool.size() - 1);
  for (int t = 0; t < 40; ++t) {
    const auto& a = pool[idx(rng)];
    const auto& b = pool[idx(rng)];
    const auto& c = pool[idx(rng)];
    CHECK(T.multiply(T.multiply(a, b), c) == T.multiply(a, T.multiply(b, c)));
    CHECK(T.multiply(a, b + c) == T.multiply(a, b) + T.multiply(a, c));
  }
}

TEST_CASE("pi0 truncation") {
  const auto& T = table12();
  const int szn = T.find("S4^S4_S4:Z1:Z2");
  const int sd = T.find("(S4 x D2)");
  CHECK(T.pi0(BurnsideElement::term(szn)).is_zero());
  CHECK(T.pi0(BurnsideElement::term(sd, 3)) == BurnsideElement::term(sd, 3));
  const auto x = BurnsideElement::term(szn, 2) + BurnsideElement::term(sd, -1);
  const auto y = BurnsideElement::term(T.find("(D1 x D1)"), 4) + BurnsideElement::term(szn, -5);
  CHECK(T.pi0(x + y) == T.pi0(x) + T.pi0(y));
  CHECK_THROWS_AS(T.multiply(BurnsideElement::term(szn), BurnsideElement::term(sd)), DomainError);
}

TEST_CASE("format and parse round-trip") {
  const auto& T = table12();
  for (int j = 0; j < 5; ++j) {
    const auto d = T.basic_degree(j, 2);
    CHECK(T.parse(T.format(d)) == d);
  }
  CHECK(T.format(BurnsideElement{}) == "0");
  CHECK(T.parse("0").is_zero());
  CHECK(T.parse("  -2(S4   x D1)+(S4 x O2) ") == BurnsideElement::term(T.find("(S4 x D1)"), -2) + T.unit_element());
  CHECK_THROWS_AS(T.parse("-(S4 x D1"), DomainError);
  CHECK_THROWS_AS(T.parse("S4 x D1"), DomainError);
}

TEST_CASE("time rescaling and classification by generators") {
  const auto& T = table12();
  CHECK(T.rescale(T.find("(S4 x D1)"), 2) == T.find("(S4 x D2)"));
  CHECK(T.rescale(T.find("(D3^Z1 x_D3 D3)"), 2) == T.find("(D3^Z1 x_D3 D6)"));
  const Permutation e;
  // ((1324), e^{i pi/2}) and ((12), kappa) generate D4^Z1 x_D4 D4.
  const auto g1 = T.pack_turn(Permutation::parse("(1324)"), 0, 1, 4);
  const auto g2 = T.pack_turn(Permutation::parse("(12)"), 1, 0, 1);
  CHECK(T.classify({g1, g2}) == T.find("(D4^Z1 x_D4 D4)"));
  CHECK(T.classify({T.pack(e, 1, 0)}) == T.find("(Z1 x D1)"));
  CHECK_THROWS_AS(T.pack_turn(e, 0, 1, 7), DomainError);
}
