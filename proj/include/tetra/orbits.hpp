#pragma once

#include <string>
#include <vector>

#include "tetra/bifurcation.hpp"
#include "tetra/forcefield.hpp"
#include "tetra/types.hpp"

namespace tetra::orbits {

using bifurcation::Generator;
using bifurcation::Predicate;
using bifurcation::PredicateKind;
using forcefield::PairPotential;

/// u(t) = a_0 + sum_{m=1..N} a_m cos(m t) + b_m sin(m t), a 2 pi-periodic loop in R^12 solving
/// u'' = -lambda^2 grad V(u) when exact.
struct FourierOrbit {
  int N = 0;
  double lambda = 0.0;
  std::vector<Vec12> a;  // modes 0..N
  std::vector<Vec12> b;  // modes 0..N, b[0] unused and kept zero

  static FourierOrbit constant(const Vec12& u, int N, double lambda);
  /// Layout [a_0, a_1, b_1, ..., a_N, b_N].
  static FourierOrbit from_vector(const Eigen::VectorXd& c, int N, double lambda);
  Eigen::VectorXd to_vector() const;
  /// Truncates or zero-pads to order N2.
  FourierOrbit with_order(int N2) const;

  Vec12 position(double t) const;
  Vec12 velocity(double t) const;
  Vec12 acceleration(double t) const;
};

/// Default number of equispaced collocation points, 4N + 1.
int collocation_points(int N);

struct ResidualOptions {
  int points = 0;  // 0: collocation_points(N)
  double collision_floor = 1e-6;
};

/// sqrt(mean over collocation times of |u'' + lambda^2 grad V(u)|^2); throws CollisionError below the floor.
double residual(const PairPotential& U, const FourierOrbit& orbit, const ResidualOptions& opts = {});

/// (max - min) of 1/2 |u'|^2 + lambda^2 V(u) over collocation times, relative to the peak kinetic energy
/// (absolute when the loop is constant).
double energy_spread(const PairPotential& U, const FourierOrbit& orbit, int points = 0);

/// H^1 distance from the constant loop u_o: sqrt((1/2pi) int |u - u_o|^2 + |u'|^2 dt).
double amplitude(const FourierOrbit& orbit, const Vec12& u_o);

/// Finite subgroup of S4 x O(2) acting on loops by (sigma, e^{i theta} kappa^s) u(t) = rho(sigma) u(eps (t + theta)),
/// eps = -1 when s = 1.
class SymmetryConstraint {
 public:
  /// Throws DomainError for a non-positive denominator or a group larger than 24 * 2 * 1024 elements.
  static SymmetryConstraint from_generators(const std::vector<Generator>& generators);
  /// Generators from describe_symmetry; the unit class (continuous K) is rejected with DomainError.
  static SymmetryConstraint for_class(const bifurcation::ClassTable& table, int cls);

  const std::vector<Generator>& generators() const { return generators_; }
  /// All elements, angles over the common denominator.
  const std::vector<Generator>& elements() const { return elements_; }
  bool has_time_reflection() const;

  /// Group average on mode m: 12x12 for m = 0 (cosine only), else 24x24 on (a_m, b_m). An orthogonal projector.
  Eigen::MatrixXd mode_projector(int m) const;

 private:
  std::vector<Generator> generators_;
  std::vector<Generator> elements_;
};

/// Group average; idempotent.
FourierOrbit symmetry_project(const FourierOrbit& orbit, const SymmetryConstraint& s);

struct PredicateResidual {
  PredicateKind kind = PredicateKind::Pairing;
  std::string text;
  double value = 0.0;
};

/// Max-norm violation of each predicate over collocation times. BrakeVelocity is relative to max |u'|.
std::vector<PredicateResidual> verify_predicates(const FourierOrbit& orbit, const std::vector<Predicate>& predicates,
                                                 int points = 0);

struct BranchOptions {
  int N = 16;
  double start_amplitude = 1e-3;
  double step = 5e-3;
  double min_step = 1e-6;
  double newton_tolerance = 1e-11;
  int max_newton = 30;
  double residual_tolerance = 1e-9;
  double collision_floor = 1e-6;
};

struct BranchPoint {
  FourierOrbit orbit;
  double amplitude = 0.0;
  double residual = 0.0;
  int newton_iterations = 0;
};

struct Branch {
  int cls = 0;
  int j = 0, l = 0;
  double lambda_critical = 0.0;
  std::vector<Predicate> predicates;
  /// Dimension of the symmetry-reduced coefficient space.
  int reduced_dimension = 0;
  /// Null space of the linearization at lambda_critical inside the reduced space at mode l.
  int kernel_dimension = 0;
  /// Rotational gauge rows remaining after symmetry reduction (0 when the class already fixes the orientation).
  int gauge_rows = 0;
  std::vector<BranchPoint> points;
};

/// Amplitude continuation from lambda_{j,l} = l / sqrt(mu_j) inside the fixed space of the class, starting from the
/// kernel vector in V_j at mode l. Takes `steps` accepted steps after the first point.
/// Throws ConvergenceError when the step falls below min_step, CollisionError on collision.
Branch continue_branch(const PairPotential& U, const forcefield::EquilibriumResult& eq,
                       const bifurcation::ClassTable& table, int cls, int j, int l, int steps,
                       const BranchOptions& opts = {});

/// Polynomial fit of lambda against amplitude over the first points, evaluated at zero amplitude.
double extrapolate_lambda(const Branch& branch, int fit_points = 5);

}  // namespace tetra::orbits
