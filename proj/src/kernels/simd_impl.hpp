#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tqe/kernels/api.hpp"

// Width-generic SIMD kernels. V is a small wrapper over a native vector of
// doubles providing: W (lane count), set1, load, store, arithmetic, fma,
// round (nearest), floor, cmp_eq (all-ones mask on equality), blend, abs,
// cmp_lt. Each ISA translation unit instantiates these templates with its
// wrapper and registers the resulting Ops.

namespace tqe::kernels::simd {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// pi/2 split for Cody-Waite reduction: A and B carry 33 significant bits each
// so n*A and n*B are exact for |n| < 2^20; C mops up the rest. Arguments up
// to ~1.5e6 in magnitude stay well inside that range; larger arguments fall
// back to libm (handled by the chunk dispatch below).
constexpr double kPio2A = 1.57079632673412561417e+00;
constexpr double kPio2B = 6.07710050630396597660e-11;
constexpr double kPio2C = 2.02226624879595063154e-21;
constexpr double kMaxFastArg = 1.5e6;

constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;

constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

template <class V>
inline void vsincos(V x, V& s_out, V& c_out) {
  const V two_over_pi = V::set1(0x1.45f306dc9c883p-1);
  V n = V::round(x * two_over_pi);
  V r = V::fma(n, V::set1(-kPio2A), x);
  r = V::fma(n, V::set1(-kPio2B), r);
  r = V::fma(n, V::set1(-kPio2C), r);
  V r2 = r * r;

  V sp = V::set1(kS6);
  sp = V::fma(sp, r2, V::set1(kS5));
  sp = V::fma(sp, r2, V::set1(kS4));
  sp = V::fma(sp, r2, V::set1(kS3));
  sp = V::fma(sp, r2, V::set1(kS2));
  sp = V::fma(sp, r2, V::set1(kS1));
  sp = V::fma(sp * r2, r, r);  // r + r^3*(...)

  V cp = V::set1(kC6);
  cp = V::fma(cp, r2, V::set1(kC5));
  cp = V::fma(cp, r2, V::set1(kC4));
  cp = V::fma(cp, r2, V::set1(kC3));
  cp = V::fma(cp, r2, V::set1(kC2));
  cp = V::fma(cp, r2, V::set1(kC1));
  cp = V::fma(cp, r2 * r2, V::fma(r2, V::set1(-0.5), V::set1(1.0)));

  // quadrant q = n mod 4 in {0,1,2,3}
  V q = V::fma(V::floor(n * V::set1(0.25)), V::set1(-4.0), n);
  V m1 = V::cmp_eq(q, V::set1(1.0));
  V m2 = V::cmp_eq(q, V::set1(2.0));
  V m3 = V::cmp_eq(q, V::set1(3.0));

  V neg_sp = V::set1(0.0) - sp;
  V neg_cp = V::set1(0.0) - cp;
  // sin: q0 -> sp, q1 -> cp, q2 -> -sp, q3 -> -cp
  V s = sp;
  s = V::blend(m1, cp, s);
  s = V::blend(m2, neg_sp, s);
  s = V::blend(m3, neg_cp, s);
  // cos: q0 -> cp, q1 -> -sp, q2 -> -cp, q3 -> sp
  V c = cp;
  c = V::blend(m1, neg_sp, c);
  c = V::blend(m2, neg_cp, c);
  c = V::blend(m3, sp, c);
  s_out = s;
  c_out = c;
}

// sinc with series switch near zero; reuses a precomputed sin(x) lane.
template <class V>
inline V vsinc_from_sin(V x, V sin_x) {
  V x2 = x * x;
  V series = V::fma(x2 * V::set1(1.0 / 120.0), x2, V::fma(x2, V::set1(-1.0 / 6.0), V::set1(1.0)));
  V small = V::cmp_lt(V::abs(x), V::set1(1e-6));
  // guard the division against x == 0 lanes
  V denom = V::blend(small, V::set1(1.0), x);
  return V::blend(small, series, sin_x / denom);
}

template <class V>
void trig_eval_batch_impl(int dim, std::size_t n_modes, const double* freqs,
                          const double* coeff_re, const double* coeff_im, std::size_t n_pts,
                          const double* pts, double* out_re, double* out_im) {
  if (dim > 3) {
    scalar_ops().trig_eval_batch(dim, n_modes, freqs, coeff_re, coeff_im, n_pts, pts, out_re,
                                 out_im);
    return;
  }
  constexpr int W = V::W;
  std::size_t i = 0;
  double xbuf[3][static_cast<std::size_t>(W)];
  for (; i + W <= n_pts; i += W) {
    for (int d = 0; d < dim; ++d)
      for (int l = 0; l < W; ++l) xbuf[d][l] = pts[(i + static_cast<std::size_t>(l)) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
    V acc_re = V::set1(0.0), acc_im = V::set1(0.0);
    for (std::size_t j = 0; j < n_modes; ++j) {
      const double* p = freqs + j * static_cast<std::size_t>(dim);
      V dot = V::set1(0.0);
      for (int d = 0; d < dim; ++d) dot = V::fma(V::load(xbuf[d]), V::set1(p[d]), dot);
      V s, c;
      vsincos(dot * V::set1(kTwoPi), s, c);
      V cre = V::set1(coeff_re[j]), cim = V::set1(coeff_im[j]);
      acc_re = acc_re + cre * c - cim * s;
      acc_im = acc_im + cre * s + cim * c;
    }
    acc_re.store(out_re + i);
    acc_im.store(out_im + i);
  }
  if (i < n_pts) {
    // remainder: run the same vector path on a zero-padded tail
    double tail_pts[3 * static_cast<std::size_t>(W)] = {0};
    double tre[static_cast<std::size_t>(W)], tim[static_cast<std::size_t>(W)];
    std::size_t rem = n_pts - i;
    for (std::size_t l = 0; l < rem; ++l)
      for (int d = 0; d < dim; ++d)
        tail_pts[l * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] =
            pts[(i + l) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
    trig_eval_batch_impl<V>(dim, n_modes, freqs, coeff_re, coeff_im, static_cast<std::size_t>(W),
                            tail_pts, tre, tim);
    for (std::size_t l = 0; l < rem; ++l) {
      out_re[i + l] = tre[l];
      out_im[i + l] = tim[l];
    }
  }
}

template <class V>
double oscillatory_weighted_sum_impl(const double* phi, const double* w, std::size_t n, double c,
                                     int sin_pow, Integrand kind) {
  if (std::abs(c) > kMaxFastArg) {
    return scalar_ops().oscillatory_weighted_sum(phi, w, n, c, sin_pow, kind);
  }
  constexpr int W = V::W;
  V acc = V::set1(0.0);
  const V vc = V::set1(c);
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    V vphi = V::load(phi + i);
    V sp, cp;
    vsincos(vphi, sp, cp);
    V weight = V::set1(1.0);
    for (int k = 0; k < sin_pow; ++k) weight = weight * sp;
    V u = vc * cp;
    V f;
    V su, cu;
    vsincos(u, su, cu);
    if (kind == Integrand::SincSq) {
      V snc = vsinc_from_sin(u, su);
      f = snc * snc;
    } else {
      f = cu;
    }
    acc = V::fma(V::load(w + i) * f, weight, acc);
  }
  double total = acc.hsum();
  if (i < n) {
    // zero-weight padding keeps the tail on the same code path
    double tphi[static_cast<std::size_t>(W)] = {0};
    double tw[static_cast<std::size_t>(W)] = {0};
    for (std::size_t l = 0; i + l < n; ++l) {
      tphi[l] = phi[i + l];
      tw[l] = w[i + l];
    }
    total += oscillatory_weighted_sum_impl<V>(tphi, tw, static_cast<std::size_t>(W), c, sin_pow, kind);
  }
  return total;
}

template <class V>
void birkhoff_dev_sq_impl(int dim, std::size_t n_modes, const double* freqs,
                          const double* coeff_re, const double* coeff_im, double time_horizon,
                          std::size_t n_samples, const double* xs, const double* xis, double* out) {
  double max_abs = 0.0;
  for (std::size_t j = 0; j < n_modes * static_cast<std::size_t>(dim); ++j)
    max_abs = std::max(max_abs, std::abs(freqs[j]));
  if (dim > 3 || M_PI * std::abs(time_horizon) * max_abs * dim > kMaxFastArg) {
    scalar_ops().birkhoff_dev_sq(dim, n_modes, freqs, coeff_re, coeff_im, time_horizon, n_samples,
                                 xs, xis, out);
    return;
  }
  constexpr int W = V::W;
  const V pi_T = V::set1(M_PI * time_horizon);
  std::size_t s = 0;
  double xbuf[3][static_cast<std::size_t>(W)], xibuf[3][static_cast<std::size_t>(W)];
  for (; s + W <= n_samples; s += W) {
    for (int d = 0; d < dim; ++d)
      for (int l = 0; l < W; ++l) {
        xbuf[d][l] = xs[(s + static_cast<std::size_t>(l)) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
        xibuf[d][l] = xis[(s + static_cast<std::size_t>(l)) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
      }
    V dev_re = V::set1(0.0), dev_im = V::set1(0.0);
    for (std::size_t j = 0; j < n_modes; ++j) {
      const double* p = freqs + j * static_cast<std::size_t>(dim);
      V dotx = V::set1(0.0), dotxi = V::set1(0.0);
      for (int d = 0; d < dim; ++d) {
        dotx = V::fma(V::load(xbuf[d]), V::set1(p[d]), dotx);
        dotxi = V::fma(V::load(xibuf[d]), V::set1(p[d]), dotxi);
      }
      V sx, cx;
      vsincos(dotx * V::set1(kTwoPi), sx, cx);
      V h = pi_T * dotxi;
      V sh, ch;
      vsincos(h, sh, ch);
      V snc = vsinc_from_sin(h, sh);
      // mode * cis(2pi dotx) * cis(h) * sinc(h)
      V ere = cx * ch - sx * sh;
      V eim = cx * sh + sx * ch;
      V cre = V::set1(coeff_re[j]), cim = V::set1(coeff_im[j]);
      V term_re = (cre * ere - cim * eim) * snc;
      V term_im = (cre * eim + cim * ere) * snc;
      dev_re = dev_re + term_re;
      dev_im = dev_im + term_im;
    }
    V nrm = dev_re * dev_re + dev_im * dev_im;
    nrm.store(out + s);
  }
  if (s < n_samples) {
    double txs[3 * static_cast<std::size_t>(W)] = {0};
    double txis[3 * static_cast<std::size_t>(W)] = {0};
    double tout[static_cast<std::size_t>(W)];
    std::size_t rem = n_samples - s;
    for (std::size_t l = 0; l < rem; ++l)
      for (int d = 0; d < dim; ++d) {
        txs[l * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] =
            xs[(s + l) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
        txis[l * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] =
            xis[(s + l) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
      }
    birkhoff_dev_sq_impl<V>(dim, n_modes, freqs, coeff_re, coeff_im, time_horizon,
                            static_cast<std::size_t>(W), txs, txis, tout);
    for (std::size_t l = 0; l < rem; ++l) out[s + l] = tout[l];
  }
}

}  // namespace tqe::kernels::simd
