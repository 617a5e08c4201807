#include "tetra/grouprep.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tetra/errors.hpp"

namespace tetra::grouprep {

namespace {

int encode(const std::array<std::uint8_t, 4>& img) { return img[0] | img[1] << 2 | img[2] << 4 | img[3] << 6; }

struct PermTables {
  std::array<Permutation, 24> perms;
  std::array<int, 256> index_of{};
};

const PermTables& perm_tables() {
  static const PermTables t = [] {
    PermTables t;
    t.index_of.fill(-1);
    std::array<int, 4> img{0, 1, 2, 3};
    int i = 0;
    do {
      t.perms[i] = Permutation::from_images(img);
      t.index_of[encode({std::uint8_t(img[0]), std::uint8_t(img[1]), std::uint8_t(img[2]), std::uint8_t(img[3])})] = i;
      ++i;
    } while (std::next_permutation(img.begin(), img.end()));
    return t;
  }();
  return t;
}

// Orthonormal basis of the range of a symmetric projector.
Eigen::MatrixXd range_basis(const Mat12& P) {
  Eigen::SelfAdjointEigenSolver<Mat12> es(P);
  std::vector<int> cols;
  for (int i = 0; i < 12; ++i)
    if (es.eigenvalues()[i] > 0.5) cols.push_back(i);
  Eigen::MatrixXd Q(12, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) Q.col(c) = es.eigenvectors().col(cols[c]);
  return Q;
}

}  // namespace

Permutation Permutation::from_images(const std::array<int, 4>& images) {
  Permutation p;
  std::array<bool, 4> seen{};
  for (int j = 0; j < 4; ++j) {
    if (images[j] < 0 || images[j] > 3 || seen[images[j]]) throw DomainError("not a permutation of {1,2,3,4}");
    seen[images[j]] = true;
    p.img_[j] = static_cast<std::uint8_t>(images[j]);
  }
  return p;
}

Permutation Permutation::parse(std::string_view s) {
  std::array<int, 4> img{0, 1, 2, 3};
  std::vector<int> cycle;
  bool open = false;
  for (char ch : s) {
    if (ch == ' ' || ch == ',') continue;
    if (ch == '(') {
      if (open) throw DomainError("nested '(' in permutation");
      open = true;
      cycle.clear();
    } else if (ch == ')') {
      if (!open) throw DomainError("unbalanced ')' in permutation");
      open = false;
      for (std::size_t i = 0; i + 1 < cycle.size(); ++i) img[cycle[i]] = cycle[i + 1];
      if (cycle.size() > 1) img[cycle.back()] = cycle.front();
    } else if (ch >= '1' && ch <= '4' && open) {
      cycle.push_back(ch - '1');
    } else {
      throw DomainError("bad character in permutation: " + std::string(s));
    }
  }
  if (open) throw DomainError("unterminated cycle in permutation");
  return from_images(img);
}

Permutation Permutation::from_index(int index) {
  if (index < 0 || index >= 24) throw DomainError("permutation index out of range");
  return perm_tables().perms[index];
}

Permutation Permutation::operator*(const Permutation& o) const {
  Permutation p;
  for (int j = 0; j < 4; ++j) p.img_[j] = img_[o.img_[j]];
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p;
  for (int j = 0; j < 4; ++j) p.img_[img_[j]] = static_cast<std::uint8_t>(j);
  return p;
}

int Permutation::index() const { return perm_tables().index_of[encode(img_)]; }

int Permutation::cycle_class() const {
  int fixed = 0;
  for (int j = 0; j < 4; ++j) fixed += img_[j] == j;
  if (fixed == 4) return 0;
  if (fixed == 2) return 1;
  if (fixed == 1) return 3;
  // No fixed points: double transposition or 4-cycle.
  return img_[img_[0]] == 0 ? 2 : 4;
}

int Permutation::sign() const {
  const int c = cycle_class();
  return (c == 1 || c == 4) ? -1 : 1;
}

std::string Permutation::to_string() const {
  std::string out;
  std::array<bool, 4> seen{};
  for (int j = 0; j < 4; ++j) {
    if (seen[j] || img_[j] == j) continue;
    out += '(';
    for (int k = j; !seen[k]; k = img_[k]) {
      seen[k] = true;
      out += char('1' + k);
    }
    out += ')';
  }
  return out.empty() ? "(1)" : out;
}

const std::array<Permutation, 24>& all_permutations() { return perm_tables().perms; }

const Mat3& realize(const Permutation& sigma) {
  static const std::array<Mat3, 24> table = [] {
    const double s2 = std::sqrt(2.0);
    const double s3 = std::sqrt(3.0);
    Mat3 a12;
    a12 << 1.0 / 3.0, 0.0, 2.0 * s2 / 3.0, 0.0, 1.0, 0.0, 2.0 * s2 / 3.0, 0.0, -1.0 / 3.0;
    Mat3 a3;
    a3 << -0.5, s3 / 2.0, 0.0, -s3 / 2.0, -0.5, 0.0, 0.0, 0.0, 1.0;
    // The displayed 3-cycle matrix sends gamma_2 -> gamma_4 -> gamma_3, i.e. it realizes (243).
    const std::array<std::pair<Permutation, Mat3>, 2> gens{
        {{Permutation::parse("(12)"), a12}, {Permutation::parse("(243)"), a3}}};

    std::array<std::optional<Mat3>, 24> found;
    found[Permutation{}.index()] = Mat3::Identity();
    std::deque<Permutation> queue{Permutation{}};
    while (!queue.empty()) {
      const Permutation s = queue.front();
      queue.pop_front();
      for (const auto& [g, ag] : gens) {
        const Permutation t = g * s;
        const Mat3 at = ag * *found[s.index()];
        auto& slot = found[t.index()];
        if (!slot) {
          slot = at;
          queue.push_back(t);
        } else if ((*slot - at).norm() > 1e-12) {
          throw ConsistencyError("tetrahedral realization is not a homomorphism");
        }
      }
    }
    std::array<Mat3, 24> out;
    for (int i = 0; i < 24; ++i) {
      if (!found[i]) throw ConsistencyError("generators do not generate S4");
      out[i] = *found[i];
    }
    return out;
  }();
  return table[sigma.index()];
}

Mat12 action_matrix(const Permutation& sigma, const Mat3& A) {
  Mat12 m = Mat12::Zero();
  // (g u)_j = A u_{sigma^-1(j)}, equivalently (g u)_{sigma(k)} = A u_k.
  for (int k = 0; k < 4; ++k) m.block<3, 3>(3 * sigma(k), 3 * k) = A;
  return m;
}

const Mat12& action_matrix(const Permutation& sigma) {
  static const std::array<Mat12, 24> table = [] {
    std::array<Mat12, 24> t;
    for (const auto& s : all_permutations()) t[s.index()] = action_matrix(s, realize(s));
    return t;
  }();
  return table[sigma.index()];
}

forcefield::Configuration act(const Permutation& sigma, const Mat3& A, const forcefield::Configuration& c) {
  if ((A.transpose() * A - Mat3::Identity()).norm() > 1e-10) throw DomainError("act: matrix is not orthogonal");
  return forcefield::Configuration::from_vector(action_matrix(sigma, A) * c.to_vector());
}

int CharacterTable::weighted_inner(const std::array<int, 5>& a, const std::array<int, 5>& b) {
  int s = 0;
  for (int c = 0; c < 5; ++c) s += class_sizes[c] * a[c] * b[c];
  return s;
}

int CharacterTable::multiplicity(const std::array<int, 5>& character, int j) {
  const int s = weighted_inner(character, chi[j]);
  if (s % 24 != 0) throw ConsistencyError("non-integral multiplicity");
  return s / 24;
}

const Mat12& isotypic_projector(int j) {
  static const std::array<Mat12, 5> table = [] {
    std::array<Mat12, 5> t;
    for (int i = 0; i < 5; ++i) {
      t[i].setZero();
      for (const auto& s : all_permutations()) t[i] += CharacterTable::character(i, s) * action_matrix(s);
      t[i] *= CharacterTable::dim(i) / 24.0;
    }
    return t;
  }();
  if (j < 0 || j > 4) throw DomainError("isotypic component index must be in 0..4");
  return table[j];
}

Vec12 isotypic_projection(int j, const Vec12& v) { return isotypic_projector(j) * v; }

const Mat12& center_of_mass_projector() {
  static const Mat12 p = [] {
    Mat12 m = Mat12::Identity();
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) m.block<3, 3>(3 * j, 3 * k) -= 0.25 * Mat3::Identity();
    return m;
  }();
  return p;
}

const std::array<Mat3, 3>& rotation_generators() {
  static const std::array<Mat3, 3> J = [] {
    std::array<Mat3, 3> j;
    j[0] << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    j[1] << 0, 0, 1, 0, 0, 0, -1, 0, 0;
    j[2] << 0, -1, 0, 1, 0, 0, 0, 0, 0;
    return j;
  }();
  return J;
}

std::array<Vec12, 3> tangent_basis(const forcefield::Configuration& u) {
  std::array<Vec12, 3> t;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 4; ++j) t[k].segment<3>(3 * j) = rotation_generators()[k] * u.positions[j];
  return t;
}

std::array<Vec12, 3> reference_vectors() {
  const auto& g = forcefield::tetrahedron_vertices();
  std::array<Vec12, 3> v;
  v[0] << g[0], g[1], g[2], g[3];
  v[1] << -2.0 * g[0], g[0] + g[1], g[0] + g[2], g[0] + g[3];
  v[2] << g[1] - g[2], g[0] - g[3], g[3] - g[0], g[2] - g[1];
  return v;
}

SliceSpectrum slice_spectrum(const Mat12& M) {
  SliceSpectrum out;
  const auto refs = reference_vectors();
  const Mat12& Pc = center_of_mass_projector();
  double scale = 0.0;
  for (int j = 0; j < 3; ++j) {
    const Mat12 P = isotypic_projector(j) * Pc;
    const Eigen::MatrixXd Q = range_basis(P);
    const Eigen::MatrixXd block = Q.transpose() * M * Q;
    const double mu = block.trace() / static_cast<double>(Q.cols());
    out.mu[j] = mu;
    out.block_residual = std::max(out.block_residual, (M * Q - mu * Q).norm());
    const Vec12 v = P * refs[j];
    out.rayleigh[j] = v.dot(M * v) / v.squaredNorm();
    scale = std::max(scale, std::abs(mu));
  }
  for (int j = 0; j < 3; ++j) {
    if (std::abs(out.rayleigh[j] - out.mu[j]) > 1e-8 * scale)
      throw ConsistencyError("slice spectrum: Rayleigh quotient disagrees with isotypic block eigenvalue");
  }
  if (out.block_residual > 1e-8 * scale)
    throw ConsistencyError("slice spectrum: M is not scalar on an isotypic component");

  // Full decomposition: nonzero eigenvalues must be mu_0 (x1), mu_1 (x3), mu_2 (x2).
  Eigen::SelfAdjointEigenSolver<Mat12> es(Pc * M * Pc);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 12);
  std::sort(ev.begin(), ev.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  std::vector<double> nonzero(ev.begin() + 6, ev.end());
  std::vector<double> expect{out.mu[0], out.mu[1], out.mu[1], out.mu[1], out.mu[2], out.mu[2]};
  std::sort(nonzero.begin(), nonzero.end());
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < 6; ++i) {
    if (std::abs(ev[i]) > 1e-8 * scale || std::abs(nonzero[i] - expect[i]) > 1e-8 * scale)
      throw ConsistencyError("slice spectrum: full eigen-decomposition disagrees with isotypic eigenvalues");
  }
  return out;
}

}  // namespace tetra::grouprep
