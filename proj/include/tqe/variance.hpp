#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tqe/eigenbasis.hpp"
#include "tqe/lattice.hpp"
#include "tqe/symbols.hpp"
#include "tqe/trigpoly.hpp"

namespace tqe {

inline constexpr std::int64_t kDefaultQuadBudget = 40'000'000;

/// Normalized sphere average of the squared time-average phase factor:
/// M_d(m,T) = avg over xi in S^{d-1} of |(1/T) int_0^T e^{2 pi i m t xi_1} dt|^2
///          = (1/W_d) int_0^pi sinc^2(pi m T cos phi) sin^{d-2}(phi) dphi.
struct ModeIntegral {
  int dim = 0;
  double m = 0.0;
  double time_horizon = 0.0;
  double value = 0.0;
  std::size_t nodes = 0;
};

ModeIntegral mode_integral(int dim, double m, double time_horizon,
                           std::int64_t quad_budget = kDefaultQuadBudget);

struct BirkhoffVarianceResult {
  std::string symbol_id;
  double time_horizon = 0.0;
  double v_modes = 0.0;
  double bound_ratio = 0.0;  // T * V / ||abar||_L2^2 (0 for the zero symbol)
  std::size_t mode_count = 0;
  double v_mc = std::numeric_limits<double>::quiet_NaN();
  double mc_stderr = std::numeric_limits<double>::quiet_NaN();
};

/// Exact-to-quadrature mode sum V(a,T) = sum_{k != 0} |a_k|^2 M_d(|k|,T)
/// under the normalized sphere measure.
BirkhoffVarianceResult birkhoff_variance_modes(const TrigPoly& a, double time_horizon,
                                               std::int64_t quad_budget = kDefaultQuadBudget);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of the same variance: x uniform on T^d, xi uniform on
/// S^{d-1}, the time integral evaluated in closed form per mode. Deterministic
/// in seed. Requires n_samples >= 100.
McEstimate birkhoff_variance_mc(const TrigPoly& a, double time_horizon, std::size_t n_samples,
                                std::uint64_t seed);

struct ShellContribution {
  std::int64_t n = 0;
  std::size_t multiplicity = 0;
  double sum_sq = 0.0;  // sum over j of |<psi_j, abar psi_j>|^2
  std::vector<Cplx> elements;
};

struct QuantumVarianceResult {
  int dim = 0;
  double hbar = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  std::int64_t n_states = 0;
  std::size_t shell_count = 0;
  BasisKind kind = BasisKind::Standard;
  std::uint64_t seed = 0;
  std::string symbol_id;
  double v = 0.0;
  std::vector<ShellContribution> breakdown;
};

/// (1/N) sum_j |<psi_j, abar psi_j>|^2 over the requested basis of the window.
/// Per-shell basis seeds derive deterministically from (seed, shell n).
/// Throws ValidationError on an empty window.
QuantumVarianceResult quantum_variance(const TrigPoly& a, const SpectralWindow& window,
                                       BasisKind kind, std::uint64_t seed, int threads = 1);

struct SmallBallOptions {
  double band_lo = 0.5;
  double band_hi = 1.5;
  bool clamp_radius = true;  // clamp hbar^{nu1} below 1/2 instead of erroring
  double radius_max = 0.45;
  std::int32_t cutoff = 1 << 20;  // effectively untruncated
  int threads = 1;
};

struct SmallBallRow {
  std::int64_t n = 0;
  std::size_t j = 0;  // running eigenfunction index within the window
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

struct SmallBallReport {
  int dim = 0;
  double lambda = 0.0;
  double nu1 = 0.0;
  BasisKind kind = BasisKind::Standard;
  std::uint64_t seed = 0;
  double radius = 0.0;
  bool clamped = false;
  std::vector<SmallBallRow> rows;
  double fraction_in_band = 0.0;  // all center ratios inside [band_lo, band_hi]
};

/// Min/max over centers of ball_mass/ball_volume per eigenfunction, plus the
/// fraction of eigenfunctions whose ratios all sit inside the band.
SmallBallReport small_ball_report(const SpectralWindow& window, BasisKind kind,
                                  std::uint64_t seed, double nu1,
                                  const std::vector<std::vector<double>>& centers,
                                  const SmallBallOptions& options = {});

/// Default center set: the uniform axis lattice {0, 1/side, ...}^d (contains
/// the corner of the fundamental domain).
std::vector<std::vector<double>> default_center_grid(int dim, int per_axis = 10);

struct DensitySubsequence {
  std::vector<std::size_t> indices;
  double density = 0.0;
};

/// Indices with deviation <= epsilon and their share of the total.
DensitySubsequence density_subsequence(const std::vector<double>& deviations, double epsilon);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  std::size_t n_used = 0;
};

/// Least squares of log(value) against log(scale). With drop_zeros,
/// non-positive values are discarded first; fewer than 3 usable points is a
/// ValidationError.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& points, bool drop_zeros);

struct Theorem2Row {
  double hbar = 0.0;
  double lambda = 0.0;
  std::int64_t n_states = 0;
  double v = 0.0;
  double term_l2 = 0.0;       // ||a||_L2^2 * hbar^{nu0}
  double term_sobolev = 0.0;  // ||abar||_{H^s}^2 * hbar^{2-2 nu0}
  double term_symbol = 0.0;   // hbar^{2-2(nu0+nu1)}
  double ratio = 0.0;         // v / max(term)
};

struct Theorem2Report {
  double nu0 = 0.0;
  double nu1 = 0.0;
  double s = 0.0;
  double slack = 0.0;
  std::vector<Theorem2Row> rows;      // ascending lambda
  std::vector<double> skipped_lambdas;  // empty windows
  bool ratio_bounded = false;  // every ratio <= ratio at the largest hbar * slack
};

/// Three-term bound bookkeeping across a window sequence. Requires
/// s > (d+4)/2 and nu0 >= 0.
Theorem2Report theorem2_bound_report(const SymbolFamily& family,
                                     const std::vector<SpectralWindow>& windows, double nu0,
                                     double s, BasisKind kind, std::uint64_t seed,
                                     double slack = 2.0, int threads = 1);

}  // namespace tqe
