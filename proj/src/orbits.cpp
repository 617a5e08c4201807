#include "tetra/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <optional>

#include "tetra/errors.hpp"
#include "tetra/grouprep.hpp"

namespace tetra::orbits {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int coefficient_count(int N) { return kDim * (2 * N + 1); }

std::vector<double> sample_times(int points) {
  std::vector<double> t(points);
  for (int q = 0; q < points; ++q) t[q] = kTwoPi * q / points;
  return t;
}

double min_pair_distance(const Vec12& u) { return forcefield::Configuration::from_vector(u).min_pair_distance(); }

// Element (sigma, e^{2 pi i a/D} kappa^s) over a fixed denominator D.
struct Elem {
  grouprep::Permutation p;
  int s;
  int a;
  auto operator<=>(const Elem&) const = default;
};

Eigen::MatrixXd mode_action(const Generator& g, int m) {
  const Mat12& rho = grouprep::action_matrix(g.sigma);
  if (m == 0) return rho;
  const double th = kTwoPi * m * g.num / g.den;
  const double c = std::cos(th), s = std::sin(th), eps = g.refl ? -1.0 : 1.0;
  Eigen::MatrixXd out(2 * kDim, 2 * kDim);
  out << c * rho, eps * s * rho, -s * rho, eps * c * rho;
  return out;
}

}  // namespace

FourierOrbit FourierOrbit::constant(const Vec12& u, int N, double lambda) {
  if (N < 0) throw DomainError("truncation order must be >= 0");
  FourierOrbit o;
  o.N = N;
  o.lambda = lambda;
  o.a.assign(N + 1, Vec12::Zero());
  o.b.assign(N + 1, Vec12::Zero());
  o.a[0] = u;
  return o;
}

FourierOrbit FourierOrbit::from_vector(const Eigen::VectorXd& c, int N, double lambda) {
  if (c.size() != coefficient_count(N)) throw DomainError("coefficient vector has the wrong length");
  FourierOrbit o = constant(c.head<kDim>(), N, lambda);
  for (int m = 1; m <= N; ++m) {
    o.a[m] = c.segment<kDim>(kDim * (2 * m - 1));
    o.b[m] = c.segment<kDim>(kDim * 2 * m);
  }
  return o;
}

Eigen::VectorXd FourierOrbit::to_vector() const {
  Eigen::VectorXd c(coefficient_count(N));
  c.head<kDim>() = a[0];
  for (int m = 1; m <= N; ++m) {
    c.segment<kDim>(kDim * (2 * m - 1)) = a[m];
    c.segment<kDim>(kDim * 2 * m) = b[m];
  }
  return c;
}

FourierOrbit FourierOrbit::with_order(int N2) const {
  FourierOrbit o = constant(a[0], N2, lambda);
  for (int m = 1; m <= std::min(N, N2); ++m) {
    o.a[m] = a[m];
    o.b[m] = b[m];
  }
  return o;
}

Vec12 FourierOrbit::position(double t) const {
  Vec12 u = a[0];
  for (int m = 1; m <= N; ++m) u += std::cos(m * t) * a[m] + std::sin(m * t) * b[m];
  return u;
}

Vec12 FourierOrbit::velocity(double t) const {
  Vec12 v = Vec12::Zero();
  for (int m = 1; m <= N; ++m) v += m * (-std::sin(m * t) * a[m] + std::cos(m * t) * b[m]);
  return v;
}

Vec12 FourierOrbit::acceleration(double t) const {
  Vec12 w = Vec12::Zero();
  for (int m = 1; m <= N; ++m) w -= double(m * m) * (std::cos(m * t) * a[m] + std::sin(m * t) * b[m]);
  return w;
}

int collocation_points(int N) { return 4 * N + 1; }

double residual(const PairPotential& U, const FourierOrbit& orbit, const ResidualOptions& opts) {
  const int Q = opts.points > 0 ? opts.points : collocation_points(orbit.N);
  const double l2 = orbit.lambda * orbit.lambda;
  double sum = 0.0;
  for (double t : sample_times(Q)) {
    const Vec12 u = orbit.position(t);
    if (min_pair_distance(u) < opts.collision_floor)
      throw CollisionError("pair distance below " + std::to_string(opts.collision_floor) + " at t = " + std::to_string(t));
    sum += (orbit.acceleration(t) + l2 * forcefield::gradient(U, u)).squaredNorm();
  }
  return std::sqrt(sum / Q);
}

double energy_spread(const PairPotential& U, const FourierOrbit& orbit, int points) {
  const int Q = points > 0 ? points : collocation_points(orbit.N);
  const double l2 = orbit.lambda * orbit.lambda;
  double lo = INFINITY, hi = -INFINITY, kin = 0.0;
  for (double t : sample_times(Q)) {
    const double k = 0.5 * orbit.velocity(t).squaredNorm();
    const double e = k + l2 * forcefield::total_potential(U, orbit.position(t));
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    kin = std::max(kin, k);
  }
  return kin > 0.0 ? (hi - lo) / kin : hi - lo;
}

double amplitude(const FourierOrbit& orbit, const Vec12& u_o) {
  double s = (orbit.a[0] - u_o).squaredNorm();
  for (int m = 1; m <= orbit.N; ++m) s += 0.5 * (1.0 + m * m) * (orbit.a[m].squaredNorm() + orbit.b[m].squaredNorm());
  return std::sqrt(s);
}

SymmetryConstraint SymmetryConstraint::from_generators(const std::vector<Generator>& generators) {
  int D = 1;
  for (const auto& g : generators) {
    if (g.den <= 0) throw DomainError("rotation denominator must be positive");
    D = std::lcm(D, g.den);
    if (D > 1024) throw DomainError("generated group is too large to be a continuation target");
  }
  auto mod = [D](int x) { return ((x % D) + D) % D; };
  std::vector<Elem> gens;
  for (const auto& g : generators) gens.push_back({g.sigma, g.refl ? 1 : 0, mod(g.num * (D / g.den))});
  auto mul = [&](const Elem& x, const Elem& y) { return Elem{x.p * y.p, x.s ^ y.s, mod(x.a + (x.s ? -y.a : y.a))}; };

  std::set<Elem> seen{{grouprep::Permutation{}, 0, 0}};
  std::vector<Elem> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<Elem> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        const Elem y = mul(x, g);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  SymmetryConstraint s;
  s.generators_ = generators;
  for (const auto& e : seen) {
    const int g = std::gcd(e.a, D);
    s.elements_.push_back(Generator{e.p, e.s, e.a / g, D / g});
  }
  return s;
}

SymmetryConstraint SymmetryConstraint::for_class(const bifurcation::ClassTable& table, int cls) {
  if (table.at(cls).is_unit()) throw DomainError("the class has a continuous O(2) part and is not a continuation target");
  return from_generators(bifurcation::describe_symmetry(table, cls).generators);
}

bool SymmetryConstraint::has_time_reflection() const {
  return std::any_of(elements_.begin(), elements_.end(), [](const Generator& g) { return g.refl != 0; });
}

Eigen::MatrixXd SymmetryConstraint::mode_projector(int m) const {
  const int n = m == 0 ? kDim : 2 * kDim;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (const auto& g : elements_) P += mode_action(g, m);
  P /= static_cast<double>(elements_.size());
  return 0.5 * (P + P.transpose());
}

FourierOrbit symmetry_project(const FourierOrbit& orbit, const SymmetryConstraint& s) {
  FourierOrbit o = orbit;
  o.a[0] = s.mode_projector(0) * orbit.a[0];
  for (int m = 1; m <= orbit.N; ++m) {
    Eigen::VectorXd ab(2 * kDim);
    ab << orbit.a[m], orbit.b[m];
    const Eigen::VectorXd p = s.mode_projector(m) * ab;
    o.a[m] = p.head<kDim>();
    o.b[m] = p.tail<kDim>();
  }
  return o;
}

std::vector<PredicateResidual> verify_predicates(const FourierOrbit& orbit, const std::vector<Predicate>& predicates,
                                                 int points) {
  auto times = sample_times(points > 0 ? points : collocation_points(orbit.N));
  times.push_back(std::numbers::pi);
  double vmax = 0.0;
  for (double t : times) vmax = std::max(vmax, orbit.velocity(t).norm());

  std::vector<PredicateResidual> out;
  for (const auto& p : predicates) {
    double r = 0.0;
    switch (p.kind) {
      case PredicateKind::Pairing: {
        const Mat12& rho = grouprep::action_matrix(p.sigma);
        const double eps = p.refl ? -1.0 : 1.0;
        for (double t : times)
          r = std::max(r, (orbit.position(t) - rho * orbit.position(eps * (t + p.shift))).lpNorm<Eigen::Infinity>());
        break;
      }
      case PredicateKind::Brake:
        for (double t : times) r = std::max(r, (orbit.position(t) - orbit.position(-t)).lpNorm<Eigen::Infinity>());
        break;
      case PredicateKind::BrakeVelocity:
        if (vmax > 0.0) r = std::max(orbit.velocity(0.0).norm(), orbit.velocity(std::numbers::pi).norm()) / vmax;
        break;
      case PredicateKind::RegularTetrahedron:
        for (double t : times) {
          const auto c = forcefield::Configuration::from_vector(orbit.position(t));
          double lo = INFINITY, hi = 0.0;
          for (int i = 0; i < 4; ++i)
            for (int k = i + 1; k < 4; ++k) {
              const double d = (c.positions[i] - c.positions[k]).norm();
              lo = std::min(lo, d);
              hi = std::max(hi, d);
            }
          r = std::max(r, hi - lo);
        }
        break;
    }
    out.push_back({p.kind, p.text, r});
  }
  return out;
}

namespace {

// Galerkin system on the orthonormal basis Q of the symmetric, center-of-mass-free coefficients.
struct Reduced {
  const PairPotential& U;
  int N = 0;
  int points = 0;
  Vec12 u_o;
  Eigen::MatrixXd Q;         // full coefficients x basis
  std::vector<int> mode;     // mode of each column
  Eigen::VectorXd weight;    // quadrature weight of each column (1 or 2)
  Eigen::VectorXd h1;        // H^1 weight of each column
  Eigen::MatrixXd EQ;        // (12 * points) x r: reduced coordinates -> samples
  Eigen::MatrixXd gauge;     // rows of linear constraints on y

  Reduced(const PairPotential& U_, int N_, const Vec12& uo, const SymmetryConstraint& s) : U(U_), N(N_), u_o(uo) {
    points = collocation_points(N);
    const Mat12& com = grouprep::center_of_mass_projector();
    std::vector<Eigen::VectorXd> cols;
    for (int m = 0; m <= N; ++m) {
      Eigen::MatrixXd P = s.mode_projector(m);
      if (m == 0)
        P = P * com;
      else {
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * kDim, 2 * kDim);
        C.topLeftCorner<kDim, kDim>() = com;
        C.bottomRightCorner<kDim, kDim>() = com;
        P = P * C;
      }
      P = (0.5 * (P + P.transpose())).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
      const int offset = m == 0 ? 0 : kDim * (2 * m - 1);
      for (int i = 0; i < P.rows(); ++i) {
        if (es.eigenvalues()(i) < 0.5) continue;
        Eigen::VectorXd c = Eigen::VectorXd::Zero(coefficient_count(N));
        c.segment(offset, P.rows()) = es.eigenvectors().col(i);
        cols.push_back(c);
        mode.push_back(m);
      }
    }
    const int r = static_cast<int>(cols.size());
    Q.resize(coefficient_count(N), r);
    weight.resize(r);
    h1.resize(r);
    for (int i = 0; i < r; ++i) {
      Q.col(i) = cols[i];
      weight(i) = mode[i] == 0 ? 1.0 : 2.0;
      h1(i) = mode[i] == 0 ? 1.0 : 0.5 * (1.0 + mode[i] * mode[i]);
    }
    const auto t = sample_times(points);
    EQ.resize(kDim * points, r);
    for (int q = 0; q < points; ++q) {
      Eigen::MatrixXd row = Q.topRows<kDim>();
      for (int m = 1; m <= N; ++m)
        row += std::cos(m * t[q]) * Q.middleRows<kDim>(kDim * (2 * m - 1)) + std::sin(m * t[q]) * Q.middleRows<kDim>(kDim * 2 * m);
      EQ.middleRows<kDim>(kDim * q) = row;
    }
  }

  int dim() const { return static_cast<int>(Q.cols()); }

  double amp(const Eigen::VectorXd& y) const { return std::sqrt((h1.array() * y.array().square()).sum()); }

  FourierOrbit orbit(const Eigen::VectorXd& y, double lambda) const {
    Eigen::VectorXd c = Q * y;
    c.head<kDim>() += u_o;
    return FourierOrbit::from_vector(c, N, lambda);
  }

  // F = [R(y, lambda); gauge y; amp(y) - s], J = dF/d(y, lambda).
  void evaluate(const Eigen::VectorXd& y, double lambda, double s, Eigen::VectorXd& F, Eigen::MatrixXd& J,
                double floor) const {
    const int r = dim(), g = static_cast<int>(gauge.rows());
    const Eigen::VectorXd samples = EQ * y;
    Eigen::VectorXd grad_part = Eigen::VectorXd::Zero(r);
    Eigen::MatrixXd hess_part = Eigen::MatrixXd::Zero(r, r);
    for (int q = 0; q < points; ++q) {
      const Vec12 u = u_o + samples.segment<kDim>(kDim * q);
      if (min_pair_distance(u) < floor) throw CollisionError("collision during continuation");
      const auto E = EQ.middleRows<kDim>(kDim * q);
      grad_part += E.transpose() * forcefield::gradient(U, u);
      hess_part += E.transpose() * (forcefield::hessian(U, u) * E);
    }
    const Eigen::VectorXd w = weight / static_cast<double>(points);
    grad_part = w.asDiagonal() * grad_part;
    hess_part = w.asDiagonal() * hess_part;
    Eigen::VectorXd m2(r);
    for (int i = 0; i < r; ++i) m2(i) = double(mode[i] * mode[i]);

    const double l2 = lambda * lambda;
    F.resize(r + g + 1);
    J = Eigen::MatrixXd::Zero(r + g + 1, r + 1);
    F.head(r) = -m2.cwiseProduct(y) + l2 * grad_part;
    J.topLeftCorner(r, r) = l2 * hess_part;
    J.topLeftCorner(r, r).diagonal() -= m2;
    J.col(r).head(r) = 2.0 * lambda * grad_part;
    if (g > 0) {
      F.segment(r, g) = gauge * y;
      J.block(r, 0, g, r) = gauge;
    }
    const double a = amp(y);
    F(r + g) = a - s;
    if (a > 0.0) J.row(r + g).head(r) = (h1.cwiseProduct(y) / a).transpose();
  }
};

struct Solved {
  Eigen::VectorXd y;
  double lambda;
  int iterations;
};

std::optional<Solved> newton(const Reduced& sys, Eigen::VectorXd y, double lambda, double s, const BranchOptions& opts) {
  Eigen::VectorXd F;
  Eigen::MatrixXd J;
  for (int it = 0; it <= opts.max_newton; ++it) {
    sys.evaluate(y, lambda, s, F, J, opts.collision_floor);
    if (!F.allFinite()) return std::nullopt;
    if (F.norm() < opts.newton_tolerance) return Solved{y, lambda, it};
    if (it == opts.max_newton) break;
    const Eigen::VectorXd dz = J.completeOrthogonalDecomposition().solve(-F);
    y += dz.head(sys.dim());
    lambda += dz(sys.dim());
  }
  return std::nullopt;
}

}  // namespace

Branch continue_branch(const PairPotential& U, const forcefield::EquilibriumResult& eq,
                       const bifurcation::ClassTable& table, int cls, int j, int l, int steps,
                       const BranchOptions& opts) {
  if (j < 0 || j > 2 || l < 1) throw DomainError("bifurcation index (j, l) out of range");
  if (steps < 0) throw DomainError("steps must be >= 0");
  const auto sym = SymmetryConstraint::for_class(table, cls);
  const Vec12 u_o = eq.u_o.to_vector();
  Reduced sys(U, opts.N, u_o, sym);

  Branch br;
  br.cls = cls;
  br.j = j;
  br.l = l;
  br.lambda_critical = l / std::sqrt(eq.mu[j]);
  br.predicates = bifurcation::describe_symmetry(table, cls).predicates;
  br.reduced_dimension = sys.dim();

  // Rotational gauge: mode-0 coordinates orthogonal to the infinitesimal rotations of u_o.
  {
    const auto tb = grouprep::tangent_basis(eq.u_o);
    Eigen::MatrixXd T(3, sys.dim());
    for (int k = 0; k < 3; ++k) T.row(k) = (sys.Q.topRows<kDim>().transpose() * tb[k]).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeFullV);
    const double cut = 1e-10 * std::max(1.0, svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k) rank += svd.singularValues()(k) > cut;
    sys.gauge = svd.matrixV().leftCols(rank).transpose();
    br.gauge_rows = rank;
  }

  // Kernel of the linearization at lambda_critical among the mode-l columns, picked inside V_j.
  std::vector<int> cols;
  for (int i = 0; i < sys.dim(); ++i)
    if (sys.mode[i] == l) cols.push_back(i);
  if (cols.empty()) throw ConsistencyError("the class has no fixed vectors at mode " + std::to_string(l));
  const Mat12 H = forcefield::hessian(U, u_o);
  const auto& Pj = grouprep::isotypic_projector(j);
  const int off = kDim * (2 * l - 1);
  Eigen::MatrixXd Ql(2 * kDim, cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) Ql.col(i) = sys.Q.col(cols[i]).segment(off, 2 * kDim);
  Eigen::MatrixXd H2 = Eigen::MatrixXd::Zero(2 * kDim, 2 * kDim), P2 = H2;
  H2.topLeftCorner<kDim, kDim>() = H;
  H2.bottomRightCorner<kDim, kDim>() = H;
  P2.topLeftCorner<kDim, kDim>() = Pj;
  P2.bottomRightCorner<kDim, kDim>() = Pj;
  const double lc2 = br.lambda_critical * br.lambda_critical;
  Eigen::MatrixXd L = lc2 * Ql.transpose() * H2 * Ql;
  L.diagonal().array() -= double(l * l);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> les(0.5 * (L + L.transpose()));
  std::vector<int> ker;
  for (int i = 0; i < les.eigenvalues().size(); ++i)
    if (std::abs(les.eigenvalues()(i)) < 1e-8 * l * l) ker.push_back(i);
  br.kernel_dimension = static_cast<int>(ker.size());
  if (ker.empty()) throw ConsistencyError("linearization is invertible on the fixed space at lambda_{j,l}");
  Eigen::MatrixXd K(cols.size(), ker.size());
  for (std::size_t i = 0; i < ker.size(); ++i) K.col(i) = les.eigenvectors().col(ker[i]);
  const Eigen::MatrixXd KP = (Ql * K).transpose() * P2 * (Ql * K);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> kes(0.5 * (KP + KP.transpose()));
  const int top = static_cast<int>(ker.size()) - 1;
  if (kes.eigenvalues()(top) < 0.5) throw ConsistencyError("no kernel vector of the class lies in V_j");
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(sys.dim());
  const Eigen::VectorXd v = K * kes.eigenvectors().col(top);
  for (std::size_t i = 0; i < cols.size(); ++i) y0(cols[i]) = v(i);
  y0 /= sys.amp(y0);

  // Without a time reflection the phase is free: anchor <y, d/dt y0> = 0.
  if (!sym.has_time_reflection()) {
    const Eigen::VectorXd c = sys.Q * y0;
    Eigen::VectorXd dc = Eigen::VectorXd::Zero(c.size());
    for (int m = 1; m <= opts.N; ++m) {
      dc.segment<kDim>(kDim * (2 * m - 1)) = m * c.segment<kDim>(kDim * 2 * m);
      dc.segment<kDim>(kDim * 2 * m) = -m * c.segment<kDim>(kDim * (2 * m - 1));
    }
    const Eigen::VectorXd d = sys.Q.transpose() * dc;
    sys.gauge.conservativeResize(sys.gauge.rows() + 1, sys.dim());
    sys.gauge.row(sys.gauge.rows() - 1) = d.normalized().transpose();
  }

  auto accept = [&](const Solved& s, double a) {
    BranchPoint p;
    p.orbit = sys.orbit(s.y, s.lambda);
    p.amplitude = a;
    p.newton_iterations = s.iterations;
    p.residual = residual(U, p.orbit, {0, opts.collision_floor});
    if (!(p.residual < opts.residual_tolerance)) return false;
    br.points.push_back(std::move(p));
    return true;
  };

  Eigen::VectorXd y_prev = Eigen::VectorXd::Zero(sys.dim()), y_cur;
  double lam_prev = br.lambda_critical, lam_cur = 0.0, s_prev = 0.0, s_cur = 0.0;
  double h = opts.start_amplitude;
  bool first = true;
  while (static_cast<int>(br.points.size()) < steps + 1) {
    const double s_next = first ? opts.start_amplitude : s_cur + h;
    Eigen::VectorXd y_pred;
    double lam_pred;
    if (first) {
      y_pred = opts.start_amplitude * y0;
      lam_pred = br.lambda_critical;
    } else {
      const double f = (s_next - s_cur) / (s_cur - s_prev);
      y_pred = y_cur + f * (y_cur - y_prev);
      lam_pred = lam_cur + f * (lam_cur - lam_prev);
    }
    std::optional<Solved> sol;
    try {
      sol = newton(sys, y_pred, lam_pred, s_next, opts);
    } catch (const CollisionError&) {
      if (first) throw;
    }
    if (sol && accept(*sol, s_next)) {
      y_prev = first ? Eigen::VectorXd::Zero(sys.dim()) : y_cur;
      lam_prev = first ? br.lambda_critical : lam_cur;
      s_prev = first ? 0.0 : s_cur;
      y_cur = sol->y;
      lam_cur = sol->lambda;
      s_cur = s_next;
      h = first ? opts.step : std::min(opts.step, 2.0 * h);
      first = false;
      continue;
    }
    if (first) throw ConvergenceError("no convergence at the first continuation point");
    h *= 0.5;
    if (h < opts.min_step) throw ConvergenceError("continuation step fell below " + std::to_string(opts.min_step));
  }
  return br;
}

double extrapolate_lambda(const Branch& branch, int fit_points) {
  const int n = std::min<int>(fit_points, static_cast<int>(branch.points.size()));
  if (n < 1) throw DomainError("empty branch");
  const int deg = std::min(n - 1, 3);
  Eigen::MatrixXd V(n, deg + 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double s = branch.points[i].amplitude;
    for (int k = 0; k <= deg; ++k) V(i, k) = std::pow(s, k);
    y(i) = branch.points[i].orbit.lambda;
  }
  return V.colPivHouseholderQr().solve(y)(0);
}

}  // namespace tetra::orbits
