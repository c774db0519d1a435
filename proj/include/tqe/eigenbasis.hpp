#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tqe/lattice.hpp"
#include "tqe/trigpoly.hpp"

namespace tqe {

enum class BasisKind { Standard, HaarRandom, CosinePaired };

BasisKind basis_kind_from_name(const std::string& name);
const char* basis_kind_name(BasisKind k);

/// Unit vector in one shell eigenspace: psi = sum_i c_i e_{k_i} over the
/// shell's canonical ordering.
struct Eigenfunction {
  std::shared_ptr<const Shell> shell;
  Eigen::VectorXcd c;
};

/// Orthonormal eigenbasis of a shell eigenspace. Row j of the unitary holds
/// the coefficients of psi_j over the shell's canonical vector ordering.
class ShellBasis {
 public:
  static ShellBasis standard(Shell shell);
  /// Haar measure on U(r): complex Ginibre matrix + Householder QR with the
  /// column phases fixed so the triangular factor has positive real diagonal.
  /// Deterministic in seed.
  static ShellBasis haar_random(Shell shell, std::uint64_t seed);
  /// Rows (e_k + e_{-k})/sqrt(2) and (e_k - e_{-k})/(i sqrt(2)) per +- pair,
  /// pairs ordered by the lexicographically larger member. Requires n >= 1.
  static ShellBasis cosine_paired(Shell shell);

  static ShellBasis make(BasisKind kind, Shell shell, std::uint64_t seed);

  const Shell& shell() const { return *shell_; }
  std::shared_ptr<const Shell> shell_ptr() const { return shell_; }
  const Eigen::MatrixXcd& matrix() const { return u_; }
  BasisKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return static_cast<std::size_t>(u_.rows()); }

  Eigenfunction eigenfunction(std::size_t j) const;
  double unitarity_residual() const;  // max |U* U - I|

  std::string to_json() const;  // debugging dump: n, kind, seed, row-major (re, im)

 private:
  ShellBasis(std::shared_ptr<const Shell> shell, Eigen::MatrixXcd u, BasisKind kind,
             std::uint64_t seed);

  std::shared_ptr<const Shell> shell_;
  Eigen::MatrixXcd u_;
  BasisKind kind_ = BasisKind::Standard;
  std::uint64_t seed_ = 0;
};

/// <psi, a psi> = sum_{k,k' in shell} a_{k'-k} c_k conj(c_{k'}), by direct
/// double loop over shell pairs with coefficient lookup.
Cplx matrix_element(const TrigPoly& a, const Eigenfunction& psi);

/// Matrix element of the time-averaged observable between two exponentials:
/// <e_{k2}, A(T,hbar) e_k> = abar_{k2-k} * D(omega T) with
/// omega = 2 pi^2 hbar (|k2|^2 - |k|^2) and D(t) = (e^{it}-1)/(it), D(0) = 1.
/// The zero mode of a is treated as absent.
Cplx avg_operator_element(const TrigPoly& a, double hbar, double time_horizon,
                          const LatticeVector& k, const LatticeVector& k2);

/// Fourier coefficients b_q of |psi|^2 (finite support inside the doubled
/// shell box); b_0 equals 1 for a unit vector.
TrigPoly density_coeffs(const Eigenfunction& psi);

/// int |psi|^4 = sum_q |b_q|^2. Checks b_0 == 1 within 1e-12.
double l4_norm_4(const Eigenfunction& psi);

/// Cached radial ball transforms at fixed (dim, radius).
class BallTransform {
 public:
  BallTransform(int dim, double r);
  double radial(std::int64_t norm_sq) const;
  double radius() const { return r_; }
  double volume() const { return volume_; }
  int dim() const { return dim_; }

 private:
  int dim_;
  double r_;
  double volume_;
  mutable std::map<std::int64_t, double> cache_;
};

/// int_{B(x0,r)} |psi|^2 via the density coefficients paired with the ball
/// indicator transform, truncated to |q| <= cutoff (exact when cutoff covers
/// the support of b). Requires 0 < r < 1/2.
double ball_mass(const Eigenfunction& psi, const std::vector<double>& x0, double r,
                 std::int32_t cutoff);
double ball_mass(const TrigPoly& density, const std::vector<double>& x0,
                 const BallTransform& transform, std::int32_t cutoff);

}  // namespace tqe
