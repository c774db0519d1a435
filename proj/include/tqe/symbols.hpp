#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tqe/trigpoly.hpp"

namespace tqe {

/// 1D compactly supported templates for tensor-product bumps.
///  - One:    the constant function 1 on all of R (no localization)
///  - Cos2:   cos^2(pi u / 2) on [-1,1]  (C^1)
///  - Smooth: e * exp(-1/(1-u^2)) on (-1,1)  (C^infinity)
enum class BumpProfile { One, Cos2, Smooth };

BumpProfile bump_profile_from_name(const std::string& name);
const char* bump_profile_name(BumpProfile p);

/// Template value at u (zero outside the support).
double profile_value(BumpProfile p, double u);
/// Integrals over [-1,1] of the template and its square.
double profile_mass(BumpProfile p);
double profile_mass_sq(BumpProfile p);

struct RescaledBump {
  TrigPoly poly;           // truncated to |p| <= cutoff (Euclidean)
  double tail_l2_sq = 0.0; // L^2 mass beyond the cutoff, by Parseval
  double full_l2_sq = 0.0; // exact L^2 mass of the untruncated bump
  double scale = 0.0;      // hbar^{nu1}
  // per-axis 1D Fourier coefficients g_m for |m| <= cutoff, index m + cutoff;
  // tensor structure makes these sufficient for derivative sup measurements
  std::vector<std::vector<Cplx>> axis_coeffs;
  std::int32_t cutoff = 0;
};

/// Fourier coefficients of x -> prod_i profile((x_i - x0_i)/hbar^{nu1}),
/// computed by per-axis Gauss-Legendre quadrature and truncated to
/// |p| <= cutoff. With l1_normalize the symbol is divided by its mass so the
/// zero mode becomes exactly 1.
///
/// Requires hbar^{nu1} < 1/4 (the bump must sit strictly inside a fundamental
/// domain). Throws ToleranceError when the relative truncation tail exceeds
/// tail_tol.
RescaledBump rescaled_bump(const std::vector<double>& x0, double nu1, double hbar,
                           BumpProfile profile, std::int32_t cutoff, double tail_tol = 1e-6,
                           bool l1_normalize = false);

/// Radial Fourier transform rho_d(r, m) of the ball indicator:
/// integral over B(0,r) of e^{-2 pi i q x} for |q| = m, via the single 1D
/// quadrature V_{d-1} r^d int_0^pi cos(2 pi m r cos(phi)) sin(phi)^d dphi.
double ball_radial_transform(int dim, double r, double m);

/// Fourier coefficients of the indicator of B(x0, r): coefficient at q is
/// e^{-2 pi i <q,x0>} * rho_d(r, |q|), truncated to |q| <= cutoff.
/// Requires 0 < r < 1/2.
TrigPoly ball_indicator_coeffs(int dim, double r, const std::vector<double>& x0,
                               std::int32_t cutoff);

struct SeminormSample {
  std::vector<int> beta;
  double hbar = 0.0;
  double sup_derivative = 0.0;  // sup |d^beta a_hbar|
  double scaled = 0.0;          // sup |d^beta a_hbar| * hbar^{nu1 |beta|}
};

/// An hbar-indexed family of symbols with its derivative-growth exponent.
/// seminorm_constants holds measured growth proxies when a measurement ran
/// (see measure_bump_seminorms); empty until then.
struct SymbolFamily {
  std::function<TrigPoly(double)> generator;
  double nu1 = 0.0;
  std::string label;
  std::vector<SeminormSample> seminorm_constants;
};

/// Constant-in-hbar family around a fixed symbol.
SymbolFamily fixed_symbol_family(TrigPoly a, std::string label = "fixed");

/// Tensor bump family a_hbar = prod profile((x - x0)/hbar^{nu1}).
SymbolFamily bump_family(std::vector<double> x0, double nu1, BumpProfile profile,
                         std::int32_t cutoff, double tail_tol = 1e-6, bool l1_normalize = false);

/// Measured C_beta proxies for a tensor bump across an hbar grid: per-axis
/// derivative sups on a fine 1D grid, tensored. Covers all |beta| <= max_order.
std::vector<SeminormSample> measure_bump_seminorms(const std::vector<double>& x0, double nu1,
                                                   BumpProfile profile, std::int32_t cutoff,
                                                   const std::vector<double>& hbars, int max_order,
                                                   std::size_t grid_points = 4096);

/// Random real-valued mean-zero trigonometric polynomial: n_pairs conjugate
/// mode pairs with frequencies in [-max_freq, max_freq]^dim \ {0} and unit-scale
/// Gaussian amplitudes. Deterministic in seed.
TrigPoly random_real_symbol(int dim, int n_pairs, std::int32_t max_freq, std::uint64_t seed);

}  // namespace tqe
