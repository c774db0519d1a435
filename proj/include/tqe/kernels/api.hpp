#pragma once

#include <cstddef>
#include <vector>

namespace tqe::kernels {

enum class Integrand { SincSq, Cos };

/// A kernel set: the arithmetic inner loops of the project. The scalar set is
/// the reference semantics; SIMD sets must agree with it to ~1e-12 relative
/// and are selected at runtime (see active_ops).
struct Ops {
  const char* name;

  /// out[i] = sum_j (re_j + i*im_j) * exp(2*pi*i * <freqs_j, pts_i>) for each
  /// of n_pts points; freqs is n_modes x dim row-major, pts is n_pts x dim.
  /// Points are torus coordinates (order-1 magnitudes); the SIMD range
  /// reduction covers phases up to ~1.5e6.
  void (*trig_eval_batch)(int dim, std::size_t n_modes, const double* freqs,
                          const double* coeff_re, const double* coeff_im, std::size_t n_pts,
                          const double* pts, double* out_re, double* out_im);

  /// sum_i w[i] * f(c * cos(phi[i])) * sin(phi[i])^sin_pow, with
  /// f = sinc^2 (SincSq) or f = cos (Cos). Core of the sphere-average
  /// quadratures (mode integrals, ball transforms).
  double (*oscillatory_weighted_sum)(const double* phi, const double* w, std::size_t n, double c,
                                     int sin_pow, Integrand kind);

  /// Squared modulus of the deviation of a time-averaged trigonometric
  /// polynomial from its mean, per (x, xi) sample:
  ///   out[s] = | sum_j c_j * exp(2*pi*i <p_j,x_s>) * D(2*pi*T <p_j,xi_s>) |^2
  /// with D(t) = exp(i t/2) * sinc(t/2). The zero mode must not be present.
  void (*birkhoff_dev_sq)(int dim, std::size_t n_modes, const double* freqs,
                          const double* coeff_re, const double* coeff_im, double time_horizon,
                          std::size_t n_samples, const double* xs, const double* xis, double* out);
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
const Ops& avx2_ops();
#endif
#if defined(__aarch64__)
const Ops& neon_ops();
#endif

/// Runtime-selected kernel set. Honors the TORUSQE_KERNEL environment
/// variable ("scalar", "avx2", "neon", "auto"); defaults to the widest set
/// the CPU supports.
const Ops& active_ops();

/// All kernel sets compiled into this binary (for equivalence tests).
std::vector<const Ops*> available_ops();

}  // namespace tqe::kernels
