#include <cmath>
#include <complex>

#include "tqe/kernels/api.hpp"

// Reference kernels: plain loops over libm. All SIMD variants are tested
// against these.

namespace tqe::kernels {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double sinc(double x) {
  if (std::abs(x) < 1e-6) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

void trig_eval_batch_scalar(int dim, std::size_t n_modes, const double* freqs,
                            const double* coeff_re, const double* coeff_im, std::size_t n_pts,
                            const double* pts, double* out_re, double* out_im) {
  for (std::size_t i = 0; i < n_pts; ++i) {
    const double* x = pts + i * static_cast<std::size_t>(dim);
    double acc_re = 0.0, acc_im = 0.0;
    for (std::size_t j = 0; j < n_modes; ++j) {
      const double* p = freqs + j * static_cast<std::size_t>(dim);
      double dot = 0.0;
      for (int d = 0; d < dim; ++d) dot += p[d] * x[d];
      double s = std::sin(kTwoPi * dot);
      double c = std::cos(kTwoPi * dot);
      acc_re += coeff_re[j] * c - coeff_im[j] * s;
      acc_im += coeff_re[j] * s + coeff_im[j] * c;
    }
    out_re[i] = acc_re;
    out_im[i] = acc_im;
  }
}

double oscillatory_weighted_sum_scalar(const double* phi, const double* w, std::size_t n, double c,
                                       int sin_pow, Integrand kind) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sp = std::sin(phi[i]);
    double cp = std::cos(phi[i]);
    double weight = 1.0;
    for (int k = 0; k < sin_pow; ++k) weight *= sp;
    double u = c * cp;
    double f;
    if (kind == Integrand::SincSq) {
      double s = sinc(u);
      f = s * s;
    } else {
      f = std::cos(u);
    }
    acc += w[i] * f * weight;
  }
  return acc;
}

void birkhoff_dev_sq_scalar(int dim, std::size_t n_modes, const double* freqs,
                            const double* coeff_re, const double* coeff_im, double time_horizon,
                            std::size_t n_samples, const double* xs, const double* xis,
                            double* out) {
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double* x = xs + s * static_cast<std::size_t>(dim);
    const double* xi = xis + s * static_cast<std::size_t>(dim);
    std::complex<double> dev(0.0, 0.0);
    for (std::size_t j = 0; j < n_modes; ++j) {
      const double* p = freqs + j * static_cast<std::size_t>(dim);
      double dotx = 0.0, dotxi = 0.0;
      for (int d = 0; d < dim; ++d) {
        dotx += p[d] * x[d];
        dotxi += p[d] * xi[d];
      }
      // (1/T) int_0^T exp(2*pi*i <p,xi> t) dt = exp(i h) * sinc(h), h = pi*T*<p,xi>
      double h = M_PI * time_horizon * dotxi;
      std::complex<double> avg = sinc(h) * std::complex<double>(std::cos(h), std::sin(h));
      std::complex<double> mode(coeff_re[j], coeff_im[j]);
      double a = kTwoPi * dotx;
      dev += mode * std::complex<double>(std::cos(a), std::sin(a)) * avg;
    }
    out[s] = std::norm(dev);
  }
}

constexpr Ops kScalarOps{"scalar", trig_eval_batch_scalar, oscillatory_weighted_sum_scalar,
                         birkhoff_dev_sq_scalar};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

}  // namespace tqe::kernels
