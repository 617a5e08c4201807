#include "tetra/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>

#include "tetra/errors.hpp"

namespace tetra::bifurcation {

namespace {

struct Fraction {
  long long p, q;
};

std::optional<Fraction> small_rational(double r) {
  for (long long q = 1; q <= 12; ++q) {
    const double p = std::round(r * static_cast<double>(q));
    if (p > 0 && std::abs(r - p / static_cast<double>(q)) <= 1e-10 * r) return Fraction{static_cast<long long>(p), q};
  }
  return std::nullopt;
}

void check_mu(const std::array<double, 3>& mu) {
  if (!(0.0 < mu[2] && mu[2] < mu[1] && mu[1] < mu[0])) throw DomainError("slice eigenvalues must satisfy 0 < mu_2 < mu_1 < mu_0");
}

struct FamilySpec {
  std::vector<Generator> gens;
  std::string summary;
};

Generator gen(const char* cycles, int refl, int num, int den) { return Generator{Permutation::parse(cycles), refl, num, den}; }

const std::map<std::string, FamilySpec>& family_specs() {
  static const std::map<std::string, FamilySpec> m{
      {"(S4 x D1)",
       {{gen("(1234)", 0, 0, 1), gen("(12)", 0, 0, 1), gen("(1)", 1, 0, 1)},
        "Regular tetrahedron at all times that expands and contracts; brake orbit with u'(0) = u'(pi) = 0."}},
      {"(D4^D2 x_Z2 D2)",
       {{gen("(1)", 1, 0, 1), gen("(12)", 0, 0, 1), gen("(34)", 0, 0, 1), gen("(13)(24)", 0, 1, 2)},
        "Brake orbit. u_1, u_2 are mirror images under A_(12), u_3, u_4 under A_(34); u_3 is the pi-rotation of u_1 "
        "half a period later. One particle determines the whole orbit."}},
      {"(D2^D1 x_Z2 D2)",
       {{gen("(1)", 1, 0, 1), gen("(12)", 0, 0, 1), gen("(34)", 0, 1, 2)},
        "Brake orbit. u_1, u_2 are mirror images under A_(12); u_3 is the rotated u_4 half a period later. "
        "The two pairs are otherwise unrelated."}},
      {"(D4^Z1 x_D4 D4)",
       {{gen("(12)", 1, 0, 1), gen("(1324)", 0, 1, 4)},
        "Not a brake orbit. u_1(t) is the mirror image of u_2(-t); the particles are related by a pi/2 rotoreflection "
        "combined with a quarter-period phase shift."}},
      {"(D3 x D1)",
       {{gen("(1)", 1, 0, 1), gen("(123)", 0, 0, 1), gen("(12)", 0, 0, 1)},
        "Brake orbit. u_1, u_2, u_3 form an equilateral triangle at all times; u_4 moves on the axis to balance it."}},
      {"(D3^Z1 x_D3 D3)",
       {{gen("(123)", 0, 1, 3), gen("(12)", 1, 0, 1)},
        "Discrete rotating wave: u_1, u_2, u_3 trace the same path rotated by 2pi/3 and shifted by a third of the "
        "period; the wave is symmetric under (12) with time reversal."}},
      {"(S4^V4 x_D3 D3)",
       {{gen("(12)(34)", 0, 0, 1), gen("(13)(24)", 0, 0, 1), gen("(123)", 0, 1, 3), gen("(12)", 1, 0, 1)},
        "V4 keeps a non-regular tetrahedron with two symmetry axes at all times; u_1, u_2, u_3 are related by a 2pi/3 "
        "rotation with a 2pi/3 phase shift."}},
  };
  return m;
}

std::string pairing_text(const Generator& g) {
  std::string arg = "t";
  if (g.num != 0) arg += " + 2pi*" + std::to_string(g.num) + "/" + std::to_string(g.den);
  if (g.refl) arg = "-(" + arg + ")";
  return "u_{s(k)}(t) = A_s u_k(" + arg + "), s = " + g.sigma.to_string();
}

}  // namespace

std::string Generator::to_string() const {
  std::string o;
  if (num == 0)
    o = "1";
  else
    o = "e^{2pi i " + std::to_string(num) + "/" + std::to_string(den) + "}";
  if (refl) o = (num == 0 ? "" : o + " ") + "kappa";
  return "(" + sigma.to_string() + ", " + o + ")";
}

std::vector<CriticalNumber> critical_set(const std::array<double, 3>& mu, int l_max) {
  check_mu(mu);
  if (l_max < 1) throw DomainError("l_max must be >= 1");
  std::array<std::optional<Fraction>, 3> ratio;
  bool exact = true;
  for (int j = 0; j < 3; ++j) {
    ratio[j] = small_rational(mu[j] / mu[2]);
    exact &= ratio[j].has_value();
  }
  struct Entry {
    int j, l;
    double value;
  };
  std::vector<Entry> entries;
  for (int l = 1; l <= l_max; ++l)
    for (int j = 0; j < 3; ++j) entries.push_back({j, l, l / std::sqrt(mu[j])});
  // lambda^2 mu_2 = l^2 q_j / p_j
  auto same = [&](const Entry& a, const Entry& b) {
    if (exact)
      return static_cast<long long>(a.l) * a.l * ratio[a.j]->q * ratio[b.j]->p ==
             static_cast<long long>(b.l) * b.l * ratio[b.j]->q * ratio[a.j]->p;
    return std::abs(a.value - b.value) <= 1e-12 * std::max(a.value, b.value);
  };
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });
  std::vector<CriticalNumber> out;
  std::vector<Entry> heads;
  for (const auto& e : entries) {
    if (!heads.empty() && same(heads.back(), e)) {
      out.back().contributors.push_back({e.j, e.l});
      continue;
    }
    heads.push_back(e);
    out.push_back({e.value, {{e.j, e.l}}});
  }
  for (auto& c : out) {
    std::sort(c.contributors.begin(), c.contributors.end());
    // Report the value of the lowest mode, which is the least rounded.
    auto lowest = *std::min_element(c.contributors.begin(), c.contributors.end(),
                                    [](auto a, auto b) { return a.second < b.second; });
    c.value = lowest.second / std::sqrt(mu[lowest.first]);
  }
  return out;
}

std::vector<int> modes_below(const std::array<double, 3>& mu, double lambda, int l_max) {
  std::vector<int> out;
  for (const auto& c : critical_set(mu, l_max))
    if (c.value < lambda)
      for (auto [j, l] : c.contributors)
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  std::sort(out.begin(), out.end());
  return out;
}

BurnsideElement degree_below(const ClassTable& table, const std::array<double, 3>& mu, double lambda, int l_max) {
  BurnsideElement out = table.unit_element();
  for (const auto& c : critical_set(mu, l_max)) {
    if (std::abs(c.value - lambda) <= 1e-12 * c.value)
      throw DomainError("degree_below evaluated at a critical number " + std::to_string(lambda));
    if (c.value < lambda)
      for (auto [j, l] : c.contributors) out = table.multiply(out, table.basic_degree(j, l));
  }
  return out;
}

SymmetryDescription describe_symmetry(const ClassTable& table, int cls) {
  const auto& c = table.at(cls);
  SymmetryDescription d;
  d.cls = cls;
  d.label = c.printed;
  if (c.is_unit()) {
    d.summary = "Full symmetry: the equilibrium itself.";
    return d;
  }
  auto it = family_specs().find(c.printed);
  if (it != family_specs().end()) {
    d.generators = it->second.gens;
    d.summary = it->second.summary;
    std::vector<std::uint32_t> codes;
    for (const auto& g : d.generators) codes.push_back(table.pack_turn(g.sigma, g.refl, g.num, g.den));
    if (table.classify(codes) != cls) throw ConsistencyError("documented generators do not generate " + c.printed);
  } else {
    for (auto x : c.generators) {
      const int a = table.angle_of(x);
      const int g = std::gcd(a, table.grid());
      d.generators.push_back(Generator{table.perm_of(x), table.refl_of(x), a / g, table.grid() / g});
    }
    d.summary = "Symmetries generated by";
    for (const auto& g : d.generators) d.summary += " " + g.to_string();
    d.summary += ".";
  }

  if (c.Z == burnside::s4_classes().back().representative)
    d.predicates.push_back({PredicateKind::RegularTetrahedron, Permutation{}, 0, 0.0, "regular tetrahedron at all times"});
  for (const auto& g : d.generators) {
    const double shift = 2.0 * std::numbers::pi * g.num / g.den;
    if (g.sigma.is_identity() && g.refl == 1 && g.num == 0) {
      d.predicates.push_back({PredicateKind::Brake, g.sigma, 1, 0.0, "brake orbit: u(t) = u(-t)"});
      d.predicates.push_back({PredicateKind::BrakeVelocity, g.sigma, 1, 0.0, "u'(0) = u'(pi) = 0"});
    } else if (!g.sigma.is_identity() || g.refl == 1 || g.num != 0) {
      d.predicates.push_back({PredicateKind::Pairing, g.sigma, g.refl, shift, pairing_text(g)});
    }
  }
  return d;
}

InvariantReport invariant(const ClassTable& table, const std::array<double, 3>& mu, const CriticalNumber& critical,
                          int l_max) {
  const auto crit = critical_set(mu, l_max);
  std::size_t i = 0;
  while (i < crit.size() && std::abs(crit[i].value - critical.value) > 1e-12 * critical.value) ++i;
  if (i == crit.size()) throw DomainError("not a critical number within l_max");
  // Every unlisted lambda_{j,l} with l > l_max is at least (l_max + 1) / sqrt(mu_0).
  const double horizon = (l_max + 1) / std::sqrt(mu[0]);
  if (i + 1 >= crit.size() || crit[i + 1].value > horizon)
    throw DomainError("critical number is not isolated within l_max = " + std::to_string(l_max));
  InvariantReport r;
  r.critical = crit[i];
  r.lambda_minus = i == 0 ? 0.5 * crit[i].value : std::sqrt(crit[i - 1].value * crit[i].value);
  r.lambda_plus = std::sqrt(crit[i].value * crit[i + 1].value);
  r.omega = degree_below(table, mu, r.lambda_plus, l_max) - degree_below(table, mu, r.lambda_minus, l_max);
  r.maximal_classes = table.maximal(r.omega);
  for (int m : r.maximal_classes) r.descriptions.push_back(describe_symmetry(table, m));
  return r;
}

std::vector<Family> independent_families(const ClassTable& table, const std::vector<InvariantReport>& reports) {
  std::vector<const InvariantReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a->critical.value < b->critical.value; });
  std::vector<Family> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& r = *sorted[i];
    for (int m : r.maximal_classes) {
      bool dependent = false;
      for (std::size_t k = 0; k < i && !dependent; ++k) {
        const double ratio = r.critical.value / sorted[k]->critical.value;
        const double kk = std::round(ratio);
        if (kk < 2 || std::abs(ratio - kk) > 1e-9 * ratio) continue;
        for (int mk : sorted[k]->maximal_classes) {
          try {
            if (table.rescale(mk, static_cast<int>(kk)) == m) dependent = true;
          } catch (const DomainError&) {
          }
        }
      }
      if (dependent) continue;
      Family f;
      f.cls = m;
      f.lambda = r.critical.value;
      f.frequency = 1.0 / f.lambda;
      bool found = false;
      for (auto [j, l] : r.critical.contributors)
        if (!found && table.fixed_point_dim(j, l, m) > 0) {
          f.j = j;
          f.l = l;
          found = true;
        }
      if (!found) throw ConsistencyError("maximal class " + table.at(m).printed + " has no fixed vectors in any contributing mode");
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace tetra::bifurcation
