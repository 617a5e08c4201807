#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "tetra/forcefield.hpp"
#include "tetra/types.hpp"

namespace tetra::grouprep {

/// A permutation of {1,2,3,4}, stored 0-based. Composition is right-to-left:
/// (s * t)(j) = s(t(j)).
class Permutation {
 public:
  constexpr Permutation() : img_{0, 1, 2, 3} {}

  /// images[j] = sigma(j+1) - 1; throws DomainError unless bijective.
  static Permutation from_images(const std::array<int, 4>& images);
  /// Cycle notation with 1-based points, e.g. "(1)", "(12)(34)", "(1324)".
  static Permutation parse(std::string_view cycles);
  static Permutation from_index(int index);

  int operator()(int j) const { return img_[j]; }
  Permutation operator*(const Permutation& o) const;
  Permutation inverse() const;
  bool is_identity() const { return *this == Permutation{}; }

  /// Position in the lexicographic list of all 24 permutations.
  int index() const;
  /// Conjugacy class index in the order (1), (12), (12)(34), (123), (1234).
  int cycle_class() const;
  int sign() const;
  std::string to_string() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::array<std::uint8_t, 4> img_;
};

const std::array<Permutation, 24>& all_permutations();

/// Orthogonal 3x3 matrix A_sigma with A_sigma gamma_j = gamma_{sigma(j)}.
/// Generated from the two displayed generators and cached.
const Mat3& realize(const Permutation& sigma);

/// 12x12 matrix of the action (sigma, A): u_j -> A u_{sigma^-1(j)}.
Mat12 action_matrix(const Permutation& sigma, const Mat3& A);
/// action_matrix(sigma, realize(sigma)), cached.
const Mat12& action_matrix(const Permutation& sigma);

/// Throws DomainError if A is not orthogonal.
forcefield::Configuration act(const Permutation& sigma, const Mat3& A, const forcefield::Configuration& c);

/// Real character table of S4; all five irreducibles are of real type.
struct CharacterTable {
  static constexpr std::array<int, 5> class_sizes{1, 6, 3, 8, 6};
  static constexpr std::array<std::string_view, 5> class_labels{"(1)", "(12)", "(12)(34)", "(123)", "(1234)"};
  static constexpr std::array<std::array<int, 5>, 5> chi{{
      {1, 1, 1, 1, 1},
      {3, 1, -1, 0, -1},
      {2, 0, 2, -1, 0},
      {3, -1, -1, 0, 1},
      {1, -1, 1, 1, -1},
  }};
  /// Character of R^12 under (sigma, A_sigma).
  static constexpr std::array<int, 5> chi_config{12, 2, 0, 0, 0};

  static int dim(int j) { return chi[j][0]; }
  static int character(int j, const Permutation& sigma) { return chi[j][sigma.cycle_class()]; }
  /// 24 * <a, b> over class-weighted sums; integer exact.
  static int weighted_inner(const std::array<int, 5>& a, const std::array<int, 5>& b);
  /// Multiplicity of irreducible j in a representation with the given character; throws ConsistencyError if not integral.
  static int multiplicity(const std::array<int, 5>& character, int j);
};

/// P_j = dim(V_j)/24 * sum_sigma chi_j(sigma) (sigma, A_sigma); cached.
const Mat12& isotypic_projector(int j);
Vec12 isotypic_projection(int j, const Vec12& v);

/// Orthogonal projector onto the center-of-mass-free subspace.
const Mat12& center_of_mass_projector();

/// Infinitesimal rotations (J_k u_1, ..., J_k u_4), k = 1, 2, 3.
std::array<Vec12, 3> tangent_basis(const forcefield::Configuration& u);

/// The three rotation generators J_1, J_2, J_3.
const std::array<Mat3, 3>& rotation_generators();

struct SliceSpectrum {
  /// Eigenvalue of M on V_0, V_1, V_2 inside the center-of-mass-free space.
  std::array<double, 3> mu{};
  /// Rayleigh quotients on the projected reference vectors.
  std::array<double, 3> rayleigh{};
  /// max_j || M Q_j - mu_j Q_j || over an orthonormal basis Q_j of V_j.
  double block_residual = 0.0;
};

/// Reference test vectors v_0, v_1, v_2 built from the tetrahedron vertices.
std::array<Vec12, 3> reference_vectors();

/// Throws ConsistencyError if the Rayleigh quotients, block eigenvalues and full spectrum disagree beyond 1e-8 relative.
SliceSpectrum slice_spectrum(const Mat12& M);

}  // namespace tetra::grouprep
