#pragma once

#include <array>

#include "tetra/types.hpp"

namespace tetra::forcefield {

/// Pair interaction U(x) of the squared distance x:
///   U(x) = w (sqrt(x) - 1)^2 + (B / x^6 - A / x^3) + sigma / sqrt(x)
/// Each of the three terms (bond, van der Waals, electrostatic) can be switched off.
struct PairPotentialParams {
  double bond_weight = 1.0;
  double vdw_A = 0.0;
  double vdw_B = 0.0;
  double sigma = 0.0;
  bool bond = true;
  bool vdw = true;
  bool electrostatic = true;
};

class PairPotential {
 public:
  /// Throws DomainError when every enabled term has zero weight.
  explicit PairPotential(const PairPotentialParams& params);

  /// Bond stretching only, unit weight.
  static PairPotential bond_only();

  const PairPotentialParams& params() const noexcept { return params_; }

  // All three throw DomainError for x <= 0.
  double value(double x) const;
  double first(double x) const;
  double second(double x) const;

 private:
  PairPotentialParams params_;
};

/// Positions u_1..u_4 in space.
struct Configuration {
  std::array<Vec3, 4> positions{};

  static Configuration from_vector(const Vec12& v);
  Vec12 to_vector() const;

  Vec3 center_of_mass() const;
  double min_pair_distance() const;
  /// Copy translated so that u_1 + u_2 + u_3 + u_4 = 0.
  Configuration centered() const;
};

double total_potential(const PairPotential& U, const Configuration& c);
Vec12 gradient(const PairPotential& U, const Configuration& c);
Mat12 hessian(const PairPotential& U, const Configuration& c);

// Vector-argument overloads used by the loop-space solver.
double total_potential(const PairPotential& U, const Vec12& u);
Vec12 gradient(const PairPotential& U, const Vec12& u);
Mat12 hessian(const PairPotential& U, const Vec12& u);

/// Vertices gamma_1..gamma_4 of the unit-circumradius reference tetrahedron.
const std::array<Vec3, 4>& tetrahedron_vertices();

/// The configuration (gamma_1, ..., gamma_4) scaled by r.
Configuration tetrahedron(double r);

struct EquilibriumOptions {
  double r_min = 1e-3;
  double r_max = 1e3;
  int grid_points = 4000;
  double tolerance = 1e-12;
  int max_newton = 100;
};

struct EquilibriumResult {
  double r_o = 0.0;
  Configuration u_o;
  /// Squared pair distance at equilibrium, (8/3) r_o^2.
  double s_o = 0.0;
  double nu0_sq = 0.0;
  /// Slice eigenvalues (mu_0, mu_1, mu_2) = (4, 2, 1) * nu0_sq.
  std::array<double, 3> mu{};
};

/// Minimizes phi(r) = 6 U(8 r^2 / 3) over the tetrahedral ray and derives the slice spectrum.
/// The returned mu is cross-checked against an eigen-decomposition of the full Hessian;
/// throws ConvergenceError if no interior minimum is bracketed and ConsistencyError if the
/// two spectra disagree.
EquilibriumResult find_equilibrium(const PairPotential& U, const EquilibriumOptions& opts = {});

}  // namespace tetra::forcefield
