#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "tetra/burnside.hpp"

namespace tetra::bifurcation {

using burnside::BurnsideElement;
using burnside::ClassTable;
using burnside::Permutation;

/// lambda_{j,l} = l / sqrt(mu_j), with all coinciding (j, l) merged.
struct CriticalNumber {
  double value = 0.0;
  std::vector<std::pair<int, int>> contributors;  // (j, l), sorted
  bool resonant() const { return contributors.size() > 1; }
};

/// Requires 0 < mu_2 < mu_1 < mu_0. Coincidences are decided exactly when the ratios mu_j / mu_2 are
/// rationals with small denominators, otherwise to 1e-12 relative.
std::vector<CriticalNumber> critical_set(const std::array<double, 3>& mu, int l_max);

/// Modes l of all lambda_{j,l} < lambda with l <= l_max.
std::vector<int> modes_below(const std::array<double, 3>& mu, double lambda, int l_max);

/// Product of Deg_{W_{j,l}} over lambda_{j,l} < lambda, l <= l_max; throws DomainError for lambda in the critical set.
BurnsideElement degree_below(const ClassTable& table, const std::array<double, 3>& mu, double lambda, int l_max);

enum class PredicateKind {
  Pairing,            // u_{sigma(k)}(t) = A_sigma u_k(eps (t + shift)), eps = -1 for a reflection
  Brake,              // u(t) = u(-t)
  BrakeVelocity,      // u'(0) = u'(pi) = 0
  RegularTetrahedron  // all six pair distances equal at all times
};

struct Predicate {
  PredicateKind kind = PredicateKind::Pairing;
  Permutation sigma;
  int refl = 0;
  double shift = 0.0;
  std::string text;
};

/// (sigma, e^{2 pi i num/den} kappa^refl)
struct Generator {
  Permutation sigma;
  int refl = 0;
  int num = 0;
  int den = 1;
  std::string to_string() const;
};

struct SymmetryDescription {
  int cls = 0;
  std::string label;
  std::vector<Generator> generators;
  std::vector<Predicate> predicates;
  std::string summary;
};

/// Family classes use the documented generator sets (verified to generate the class); others use stored generators.
SymmetryDescription describe_symmetry(const ClassTable& table, int cls);

struct InvariantReport {
  CriticalNumber critical;
  double lambda_minus = 0.0, lambda_plus = 0.0;
  BurnsideElement omega;
  std::vector<int> maximal_classes;
  std::vector<SymmetryDescription> descriptions;
};

/// omega = degree_below(lambda_+) - degree_below(lambda_-), the sign used by the printed invariant tables.
/// lambda_+- are geometric midpoints of the neighbouring gaps; throws DomainError if the critical number
/// is not isolated within l_max.
InvariantReport invariant(const ClassTable& table, const std::array<double, 3>& mu, const CriticalNumber& critical,
                          int l_max);

struct Family {
  int cls = 0;
  int j = 0, l = 0;  // isotypic component and mode carrying the class
  double lambda = 0.0;
  double frequency = 0.0;  // 1 / lambda
};

/// Maximal classes, dropping those equal to the time-rescaled class of a maximal class at lambda / k.
std::vector<Family> independent_families(const ClassTable& table, const std::vector<InvariantReport>& reports);

}  // namespace tetra::bifurcation
