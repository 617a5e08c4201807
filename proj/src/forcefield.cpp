#include "tetra/forcefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tetra/errors.hpp"

namespace tetra::forcefield {

namespace {

void check_domain(double x) {
  if (!(x > 0.0)) throw DomainError("pair potential evaluated at non-positive squared distance " + std::to_string(x));
}

constexpr std::array<std::pair<int, int>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace

PairPotential::PairPotential(const PairPotentialParams& params) : params_(params) {
  const auto& p = params_;
  const bool any = (p.bond && p.bond_weight != 0.0) || (p.vdw && (p.vdw_A != 0.0 || p.vdw_B != 0.0)) ||
                   (p.electrostatic && p.sigma != 0.0);
  if (!any) throw DomainError("degenerate pair potential: every enabled term has zero weight");
}

PairPotential PairPotential::bond_only() {
  PairPotentialParams p;
  p.vdw = false;
  p.electrostatic = false;
  return PairPotential(p);
}

double PairPotential::value(double x) const {
  check_domain(x);
  const auto& p = params_;
  const double r = std::sqrt(x);
  double v = 0.0;
  if (p.bond) v += p.bond_weight * (r - 1.0) * (r - 1.0);
  if (p.vdw) {
    const double x3 = x * x * x;
    v += p.vdw_B / (x3 * x3) - p.vdw_A / x3;
  }
  if (p.electrostatic) v += p.sigma / r;
  return v;
}

double PairPotential::first(double x) const {
  check_domain(x);
  const auto& p = params_;
  const double r = std::sqrt(x);
  double v = 0.0;
  if (p.bond) v += p.bond_weight * (1.0 - 1.0 / r);
  if (p.vdw) {
    const double x3 = x * x * x;
    v += -6.0 * p.vdw_B / (x3 * x3 * x) + 3.0 * p.vdw_A / (x3 * x);
  }
  if (p.electrostatic) v += -0.5 * p.sigma / (r * x);
  return v;
}

double PairPotential::second(double x) const {
  check_domain(x);
  const auto& p = params_;
  const double r = std::sqrt(x);
  double v = 0.0;
  if (p.bond) v += p.bond_weight * 0.5 / (r * x);
  if (p.vdw) {
    const double x3 = x * x * x;
    v += 42.0 * p.vdw_B / (x3 * x3 * x * x) - 12.0 * p.vdw_A / (x3 * x * x);
  }
  if (p.electrostatic) v += 0.75 * p.sigma / (r * x * x);
  return v;
}

Configuration Configuration::from_vector(const Vec12& v) {
  Configuration c;
  for (int j = 0; j < 4; ++j) c.positions[j] = v.segment<3>(3 * j);
  return c;
}

Vec12 Configuration::to_vector() const {
  Vec12 v;
  for (int j = 0; j < 4; ++j) v.segment<3>(3 * j) = positions[j];
  return v;
}

Vec3 Configuration::center_of_mass() const {
  return 0.25 * (positions[0] + positions[1] + positions[2] + positions[3]);
}

double Configuration::min_pair_distance() const {
  double m = std::numeric_limits<double>::infinity();
  for (auto [j, k] : kPairs) m = std::min(m, (positions[j] - positions[k]).norm());
  return m;
}

Configuration Configuration::centered() const {
  Configuration c = *this;
  const Vec3 com = center_of_mass();
  for (auto& p : c.positions) p -= com;
  return c;
}

double total_potential(const PairPotential& U, const Vec12& u) {
  double v = 0.0;
  for (auto [j, k] : kPairs) {
    const double x = (u.segment<3>(3 * j) - u.segment<3>(3 * k)).squaredNorm();
    if (x == 0.0) throw CollisionError("particles " + std::to_string(j + 1) + " and " + std::to_string(k + 1) + " coincide");
    v += U.value(x);
  }
  return v;
}

Vec12 gradient(const PairPotential& U, const Vec12& u) {
  Vec12 g = Vec12::Zero();
  for (auto [j, k] : kPairs) {
    const Vec3 d = u.segment<3>(3 * j) - u.segment<3>(3 * k);
    const double x = d.squaredNorm();
    if (x == 0.0) throw CollisionError("particles " + std::to_string(j + 1) + " and " + std::to_string(k + 1) + " coincide");
    const Vec3 f = 2.0 * U.first(x) * d;
    g.segment<3>(3 * j) += f;
    g.segment<3>(3 * k) -= f;
  }
  return g;
}

Mat12 hessian(const PairPotential& U, const Vec12& u) {
  Mat12 h = Mat12::Zero();
  for (auto [j, k] : kPairs) {
    const Vec3 d = u.segment<3>(3 * j) - u.segment<3>(3 * k);
    const double x = d.squaredNorm();
    if (x == 0.0) throw CollisionError("particles " + std::to_string(j + 1) + " and " + std::to_string(k + 1) + " coincide");
    // d/du_j of 2 U'(|d|^2) d
    Mat3 b = 4.0 * U.second(x) * d * d.transpose() + 2.0 * U.first(x) * Mat3::Identity();
    b = 0.5 * (b + b.transpose()).eval();
    h.block<3, 3>(3 * j, 3 * j) += b;
    h.block<3, 3>(3 * k, 3 * k) += b;
    h.block<3, 3>(3 * j, 3 * k) -= b;
    h.block<3, 3>(3 * k, 3 * j) -= b;
  }
  return h;
}

double total_potential(const PairPotential& U, const Configuration& c) { return total_potential(U, c.to_vector()); }
Vec12 gradient(const PairPotential& U, const Configuration& c) { return gradient(U, c.to_vector()); }
Mat12 hessian(const PairPotential& U, const Configuration& c) { return hessian(U, c.to_vector()); }

const std::array<Vec3, 4>& tetrahedron_vertices() {
  static const std::array<Vec3, 4> gamma = [] {
    const double s2 = std::sqrt(2.0);
    const double s6 = std::sqrt(6.0);
    return std::array<Vec3, 4>{Vec3(0.0, 0.0, 1.0), Vec3(2.0 * s2 / 3.0, 0.0, -1.0 / 3.0),
                                Vec3(-s2 / 3.0, s6 / 3.0, -1.0 / 3.0), Vec3(-s2 / 3.0, -s6 / 3.0, -1.0 / 3.0)};
  }();
  return gamma;
}

Configuration tetrahedron(double r) {
  Configuration c;
  for (int j = 0; j < 4; ++j) c.positions[j] = r * tetrahedron_vertices()[j];
  return c;
}

EquilibriumResult find_equilibrium(const PairPotential& U, const EquilibriumOptions& opts) {
  constexpr double kEdge = 8.0 / 3.0;
  auto phi = [&](double r) { return 6.0 * U.value(kEdge * r * r); };
  auto dphi = [&](double r) { return 6.0 * U.first(kEdge * r * r) * 2.0 * kEdge * r; };
  auto ddphi = [&](double r) {
    const double s = kEdge * r * r;
    const double ds = 2.0 * kEdge * r;
    return 6.0 * (U.second(s) * ds * ds + U.first(s) * 2.0 * kEdge);
  };

  if (!(opts.r_min > 0.0 && opts.r_max > opts.r_min && opts.grid_points >= 3))
    throw DomainError("invalid equilibrium search interval");

  // Coarse log-spaced scan for the smallest sample.
  const int n = opts.grid_points;
  const double lmin = std::log(opts.r_min);
  const double lmax = std::log(opts.r_max);
  std::vector<double> rs(n);
  int best = -1;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    rs[i] = std::exp(lmin + (lmax - lmin) * i / (n - 1));
    const double v = phi(rs[i]);
    if (std::isfinite(v) && v < best_v) {
      best_v = v;
      best = i;
    }
  }
  if (best <= 0 || best >= n - 1)
    throw ConvergenceError("no interior minimizer of the tetrahedral potential in [" + std::to_string(opts.r_min) + ", " +
                           std::to_string(opts.r_max) + "]");

  // Golden-section refinement inside the bracket.
  double a = rs[best - 1];
  double b = rs[best + 1];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  for (int it = 0; it < 200 && (b - a) > 1e-10 * b; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = phi(d);
    }
  }

  // Newton on phi'.
  double r = 0.5 * (a + b);
  bool converged = std::abs(dphi(r)) < opts.tolerance;
  for (int it = 0; it < opts.max_newton && !converged; ++it) {
    const double h = ddphi(r);
    if (!(h > 0.0)) break;
    r -= dphi(r) / h;
    converged = std::abs(dphi(r)) < opts.tolerance;
  }
  if (!converged) throw ConvergenceError("Newton refinement of the equilibrium radius did not reach |phi'| < tolerance");

  EquilibriumResult res;
  res.r_o = r;
  res.u_o = tetrahedron(r);
  res.s_o = kEdge * r * r;
  const double u2 = U.second(res.s_o);
  if (!(u2 > 0.0)) throw ConsistencyError("equilibrium is not a strict minimum: U''(s_o) <= 0");
  res.nu0_sq = 32.0 / 3.0 * r * r * u2;
  res.mu = {4.0 * res.nu0_sq, 2.0 * res.nu0_sq, res.nu0_sq};

  // Full Hessian: 3 translations + 3 rotations vanish, the rest is the slice spectrum.
  Eigen::SelfAdjointEigenSolver<Mat12> es(hessian(U, res.u_o));
  Eigen::Matrix<double, 12, 1> ev = es.eigenvalues();
  std::array<double, 12> sorted{};
  for (int i = 0; i < 12; ++i) sorted[i] = ev[i];
  std::sort(sorted.begin(), sorted.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  std::array<double, 6> nonzero{};
  std::copy(sorted.begin() + 6, sorted.end(), nonzero.begin());
  std::sort(nonzero.begin(), nonzero.end());
  const std::array<double, 6> expect{res.mu[2], res.mu[2], res.mu[1], res.mu[1], res.mu[1], res.mu[0]};
  for (int i = 0; i < 6; ++i) {
    if (std::abs(sorted[i]) > 1e-8 * res.nu0_sq || std::abs(nonzero[i] - expect[i]) > 1e-8 * expect[i])
      throw ConsistencyError("Hessian spectrum at the tetrahedral equilibrium disagrees with the closed-form slice eigenvalues");
  }
  return res;
}

}  // namespace tetra::forcefield
