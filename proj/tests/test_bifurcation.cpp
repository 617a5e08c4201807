#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "golden.hpp"
#include "tetra/bifurcation.hpp"
#include "tetra/errors.hpp"
#include "tetra/forcefield.hpp"

using namespace tetra;
using namespace tetra::bifurcation;

namespace {

const ClassTable& table12() {
  static const ClassTable t = ClassTable::for_modes({1, 2});
  return t;
}

const std::array<double, 3>& bond_mu() {
  static const auto mu = forcefield::find_equilibrium(forcefield::PairPotential::bond_only()).mu;
  return mu;
}

std::vector<InvariantReport> first_three(const std::array<double, 3>& mu) {
  const auto crit = critical_set(mu, 2);
  std::vector<InvariantReport> out;
  for (int i = 0; i < 3; ++i) out.push_back(invariant(table12(), mu, crit[i], 2));
  return out;
}

std::set<std::string> labels(const std::vector<int>& ids) {
  std::set<std::string> s;
  for (int i : ids) s.insert(table12().at(i).printed);
  return s;
}

}  // namespace

TEST_CASE("critical set ordering and resonance") {
  const std::array<double, 3> mu{4.0, 2.0, 1.0};
  auto c1 = critical_set(mu, 1);
  REQUIRE(c1.size() == 3);
  for (const auto& c : c1) CHECK_FALSE(c.resonant());
  CHECK(c1[0].contributors.front() == std::pair{0, 1});
  CHECK(c1[1].contributors.front() == std::pair{1, 1});
  CHECK(c1[2].contributors.front() == std::pair{2, 1});
  CHECK(c1[0].value == doctest::Approx(0.5));
  CHECK(c1[1].value == doctest::Approx(std::sqrt(0.5)));

  // lambda^2 = l^2 / mu_j: 1/4, 1/2, 1 (twice), 2, 4
  auto c2 = critical_set(mu, 2);
  REQUIRE(c2.size() == 5);
  CHECK(c2[2].resonant());
  CHECK(c2[2].contributors == std::vector<std::pair<int, int>>{{0, 2}, {2, 1}});
  CHECK(c2[2].value == 1.0);
  for (std::size_t i = 1; i < c2.size(); ++i) CHECK(c2[i - 1].value < c2[i].value);

  // Scaled spectrum with rounding noise still detects the coincidence exactly.
  const double s = 0.1234567;
  auto c3 = critical_set({4 * s, 2 * s, s}, 4);
  int resonant = 0;
  for (const auto& c : c3) resonant += c.resonant();
  // lambda^2 mu_2 in {l^2/4, l^2/2, l^2}: only 1 and 4 repeat
  CHECK(resonant == 2);

  const std::array<double, 3> generic{4.3, 2.1, 1.0};
  for (const auto& c : critical_set(generic, 4)) CHECK_FALSE(c.resonant());

  CHECK_THROWS_AS(critical_set({1.0, 2.0, 4.0}, 2), DomainError);
  CHECK_THROWS_AS(critical_set(mu, 0), DomainError);
}

TEST_CASE("bond-only slice spectrum is resonant at lambda_{2,1}") {
  const auto& mu = bond_mu();
  CHECK(mu[0] / mu[2] == doctest::Approx(4.0).epsilon(1e-12));
  auto c = critical_set(mu, 2);
  CHECK(c[2].resonant());
}

TEST_CASE("degree below is locally constant and rejects critical values") {
  const std::array<double, 3> mu{4.0, 2.0, 1.0};
  const auto& t = table12();
  CHECK(degree_below(t, mu, 0.3, 2) == t.unit_element());
  CHECK(degree_below(t, mu, 0.6, 2) == degree_below(t, mu, 0.69, 2));
  CHECK(degree_below(t, mu, 0.6, 2) == t.basic_degree(0, 1));
  CHECK(degree_below(t, mu, 0.8, 2) == t.multiply(t.basic_degree(0, 1), t.basic_degree(1, 1)));
  CHECK_THROWS_AS(degree_below(t, mu, 0.5, 2), DomainError);
  CHECK_THROWS_AS(degree_below(t, mu, 1.0, 2), DomainError);
  CHECK(modes_below(mu, 1.2, 2) == std::vector<int>{1, 2});
  CHECK(modes_below(mu, 0.9, 2) == std::vector<int>{1});
}

TEST_CASE("invariants match the printed tables") {
  const auto& t = table12();
  const auto reports = first_three(bond_mu());
  CHECK(reports[0].omega == t.parse(golden::omega_01()));
  CHECK(reports[1].omega == t.parse(golden::omega_11()));
  CHECK(reports[2].omega == t.parse(golden::omega_21()));
  for (int i = 0; i < 3; ++i) {
    CHECK_FALSE(reports[i].omega.is_zero());
    const auto& want = golden::maximal_classes()[i];
    CHECK(labels(reports[i].maximal_classes) == std::set<std::string>(want.begin(), want.end()));
    CHECK(reports[i].descriptions.size() == reports[i].maximal_classes.size());
  }
  CHECK(reports[0].maximal_classes.size() == 1);
  CHECK(reports[1].maximal_classes.size() == 5);
  CHECK(reports[2].maximal_classes.size() == 2);
}

TEST_CASE("invariant does not depend on lambda_+-") {
  const std::array<double, 3> mu{4.0, 2.0, 1.0};
  const auto& t = table12();
  const auto crit = critical_set(mu, 2);
  for (int i = 0; i < 3; ++i) {
    const auto r = invariant(t, mu, crit[i], 2);
    const double lo = i == 0 ? 0.0 : crit[i - 1].value, hi = crit[i + 1].value, c = crit[i].value;
    for (double f : {0.01, 0.5, 0.99}) {
      const double lm = lo + f * (c - lo), lp = c + f * (hi - c);
      CHECK(degree_below(t, mu, lp, 2) - degree_below(t, mu, lm, 2) == r.omega);
    }
    CHECK(r.lambda_minus < c);
    CHECK(c < r.lambda_plus);
  }
  // lambda_{1,2} = sqrt 2 is followed by lambda_{2,2} = 2 > 3/2 which would miss lambda_{0,3}.
  CHECK_THROWS_AS(invariant(t, mu, crit[3], 2), DomainError);
}

TEST_CASE("seven independent families") {
  const auto& t = table12();
  const auto reports = first_three(bond_mu());
  const auto fam = independent_families(t, reports);
  std::vector<int> ids;
  for (const auto& f : fam) ids.push_back(f.cls);
  CHECK(fam.size() == 7);
  CHECK(labels(ids) == std::set<std::string>{"(S4 x D1)", "(D4^D2 x_Z2 D2)", "(D2^D1 x_Z2 D2)", "(D4^Z1 x_D4 D4)",
                                             "(D3 x D1)", "(D3^Z1 x_D3 D3)", "(S4^V4 x_D3 D3)"});
  for (const auto& f : fam) {
    CHECK(f.l == 1);
    CHECK(t.fixed_point_dim(f.j, f.l, f.cls) > 0);
    CHECK(f.frequency * f.lambda == doctest::Approx(1.0));
  }
  // The dropped class is the double-speed copy of the first family.
  const int s4d1 = t.find("(S4 x D1)");
  CHECK(t.rescale(s4d1, 2) == t.find("(S4 x D2)"));
  for (const auto& f : fam)
    if (f.cls == t.find("(S4^V4 x_D3 D3)")) CHECK(f.j == 2);
}

TEST_CASE("documented generators generate their classes") {
  const auto& t = table12();
  for (const auto& f : independent_families(t, first_three(bond_mu()))) {
    const auto d = describe_symmetry(t, f.cls);
    std::vector<std::uint32_t> codes;
    for (const auto& g : d.generators) codes.push_back(t.pack_turn(g.sigma, g.refl, g.num, g.den));
    CHECK(t.classify(codes) == f.cls);
    CHECK_FALSE(d.summary.empty());
    CHECK_FALSE(d.predicates.empty());
    const bool brake =
        std::any_of(d.predicates.begin(), d.predicates.end(), [](const Predicate& p) { return p.kind == PredicateKind::Brake; });
    const bool brake_expected = t.at(f.cls).printed != "(D4^Z1 x_D4 D4)" && t.at(f.cls).printed != "(D3^Z1 x_D3 D3)" &&
                                t.at(f.cls).printed != "(S4^V4 x_D3 D3)";
    CHECK(brake == brake_expected);
    const bool regular = std::any_of(d.predicates.begin(), d.predicates.end(),
                                     [](const Predicate& p) { return p.kind == PredicateKind::RegularTetrahedron; });
    CHECK(regular == (t.at(f.cls).printed == "(S4 x D1)"));
  }
  // Classes outside the families fall back to stored generators.
  const auto d = describe_symmetry(t, t.find("(V4 x D1)"));
  CHECK_FALSE(d.generators.empty());
  CHECK(describe_symmetry(t, 0).predicates.empty());
}

TEST_CASE("maximal classes are not below any other term") {
  const auto& t = table12();
  for (const auto& r : first_three(bond_mu())) {
    for (auto [a, ca] : r.omega.terms()) {
      bool below = false;
      for (auto [b, cb] : r.omega.terms()) below |= a != b && t.leq(a, b);
      const bool listed = std::find(r.maximal_classes.begin(), r.maximal_classes.end(), a) != r.maximal_classes.end();
      CHECK(listed == !below);
    }
  }
}
