#pragma once

#include <cstdint>
#include <vector>

namespace tqe {

/// Frequency vector in Z^d.
using LatticeVector = std::vector<std::int32_t>;

std::int64_t norm_sq(const LatticeVector& k);

/// All integer vectors with squared norm n, in lexicographic order.
/// One eigenspace of the (4*pi^2-normalized) torus Laplacian.
struct Shell {
  int dim = 0;
  std::int64_t n = 0;
  std::vector<std::int32_t> coords;  // size() * dim, lexicographic

  std::size_t size() const {
    return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0;
  }
  const std::int32_t* at(std::size_t i) const {
    return coords.data() + i * static_cast<std::size_t>(dim);
  }
  LatticeVector vector(std::size_t i) const {
    return LatticeVector(at(i), at(i) + dim);
  }
  /// Index of the vector equal to v, or npos.
  std::size_t find(const std::int32_t* v) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

inline constexpr std::int64_t kDefaultEnumBudget = 400'000'000;

/// Exact enumeration of {k in Z^d : |k|^2 = n} by recursive descent with
/// residual pruning. Throws BudgetError when the bounding box of the search
/// exceeds `budget` candidate prefixes.
Shell enumerate_shell(int dim, std::int64_t n, std::int64_t budget = kDefaultEnumBudget);

/// How a window's edges were specified; fixes the exact floating-point form
/// of the membership predicate.
enum class WindowForm {
  Semiclassical,  // 4*pi^2*hbar^2*n in [1 - alpha*hbar, 1 + alpha*hbar]
  Eigenvalue,     // 4*pi^2*n in [lambda - sqrt(lambda), lambda + sqrt(lambda)]
};

/// An energy window together with every (non-empty) Laplacian eigenspace it
/// contains. n_min/n_max delimit the integers passing the membership
/// predicate (n_min > n_max when there are none).
struct SpectralWindow {
  int dim = 0;
  double hbar = 0.0;
  double alpha = 0.0;
  WindowForm form = WindowForm::Semiclassical;
  std::vector<Shell> shells;  // non-empty shells only, ascending n
  std::int64_t n_states = 0;
  std::int64_t n_min = 0;
  std::int64_t n_max = -1;

  double lambda() const { return 1.0 / (hbar * hbar); }
  bool empty() const { return shells.empty(); }
  bool contains(std::int64_t n) const;
};

/// Window of the semiclassical operator: eigenvalues of -hbar^2*Laplacian in
/// [1 - alpha*hbar, 1 + alpha*hbar]. Requires 0 < hbar <= 1, alpha > 0 and a
/// positive lower edge.
SpectralWindow shells_in_window(int dim, double hbar, double alpha,
                                std::int64_t budget = kDefaultEnumBudget);

/// Eigenvalue-convention window [lambda - sqrt(lambda), lambda + sqrt(lambda)]
/// for -Laplacian; corresponds to hbar = lambda^{-1/2}, alpha = 1.
SpectralWindow window_from_lambda(int dim, double lambda,
                                  std::int64_t budget = kDefaultEnumBudget);

struct WeylCount {
  std::int64_t count = 0;
  double predicted = 0.0;
  double ratio = 0.0;
};

/// Direct lattice count of eigenvalues (with multiplicity) in
/// [lambda - sqrt(lambda), lambda + sqrt(lambda)], against the annulus-volume
/// prediction C_d * lambda^{(d-1)/2}. Independent of the shell enumeration
/// code path. Requires lambda >= 4.
WeylCount weyl_count(int dim, double lambda);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int dim);

/// Weyl constant for the [lambda - sqrt(lambda), lambda + sqrt(lambda)]
/// window. The window is the annulus |x| in [sqrt(lambda - sqrt(lambda))/2pi,
/// sqrt(lambda + sqrt(lambda))/2pi]; its volume V_d*(R+^d - R-^d) expands to
/// d*V_d*(2pi)^{-d}*lambda^{(d-1)/2} + lower order, which is the coefficient
/// returned here.
double weyl_constant(int dim);

}  // namespace tqe
