#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace tqe {

using Freq = std::vector<std::int32_t>;
using Cplx = std::complex<double>;

/// Sparse trigonometric polynomial sum_p a_p e^{2 pi i <p,x>} on the torus.
/// Modes are stored in lexicographic frequency order (the canonical summation
/// order); exact zero amplitudes are dropped. Immutable after construction.
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(int dim, std::vector<std::pair<Freq, Cplx>> entries);

  static TrigPoly single_mode(int dim, const Freq& p, Cplx amp);
  static TrigPoly zero(int dim) { return TrigPoly(dim, {}); }

  int dim() const { return dim_; }
  std::size_t n_modes() const { return amps_.size(); }
  const std::int32_t* freq(std::size_t i) const {
    return freqs_.data() + i * static_cast<std::size_t>(dim_);
  }
  Freq freq_vec(std::size_t i) const { return Freq(freq(i), freq(i) + dim_); }
  Cplx amp(std::size_t i) const { return amps_[i]; }

  /// Coefficient at p (0 when absent).
  Cplx coeff(const std::int32_t* p) const;
  Cplx coeff(const Freq& p) const { return coeff(p.data()); }

  /// Whether a_{-p} == conj(a_p) for every mode (within 1e-12 of the largest
  /// amplitude), i.e. the polynomial is real-valued.
  bool real_valued() const { return real_valued_; }

  /// Largest Euclidean frequency norm in the support (0 for the zero poly).
  double support_radius() const { return support_radius_; }
  /// Largest |p_i| over all modes and axes.
  std::int32_t max_abs_freq() const { return max_abs_freq_; }

  /// Direct summation in canonical order.
  Cplx evaluate(const double* x) const;
  Cplx evaluate(const std::vector<double>& x) const { return evaluate(x.data()); }

  /// Batched evaluation through the active SIMD kernel set.
  void evaluate_batch(const double* pts, std::size_t n_pts, double* out_re, double* out_im) const;

  double l2_norm_sq() const;
  /// Sobolev norm with the <p>^2 = 1 + 4 pi^2 |p|^2 convention.
  double sobolev_norm_sq(double s) const;

  /// Same polynomial with the p = 0 coefficient removed.
  TrigPoly mean_zero() const;

  /// Coefficient-wise derivative: multiplies a_p by prod_j (2 pi i p_j)^beta_j.
  TrigPoly derivative(const std::vector<int>& beta) const;

  TrigPoly scaled(Cplx factor) const;

  /// Flat frequency array as doubles (n_modes x dim), for kernel calls.
  const std::vector<double>& freqs_as_double() const { return freqs_d_; }
  const std::vector<double>& amps_re() const { return amps_re_; }
  const std::vector<double>& amps_im() const { return amps_im_; }

 private:
  void finalize();

  int dim_ = 0;
  std::vector<std::int32_t> freqs_;  // n_modes * dim, lexicographic
  std::vector<Cplx> amps_;
  std::vector<double> freqs_d_;
  std::vector<double> amps_re_, amps_im_;
  bool real_valued_ = true;
  double support_radius_ = 0.0;
  std::int32_t max_abs_freq_ = 0;
};

/// Optional descriptive metadata carried by symbol files.
struct SymbolMeta {
  std::string profile;  // empty = absent
  double nu1 = std::numeric_limits<double>::quiet_NaN();
  double hbar = std::numeric_limits<double>::quiet_NaN();
  double tail_l2_sq = std::numeric_limits<double>::quiet_NaN();
};

/// JSON serialization: {"d": ..., "entries": [[[p...], re, im], ...],
/// "metadata": {...}}. Round trips are bit-exact on amplitudes.
std::string symbol_to_json(const TrigPoly& poly, const SymbolMeta* meta = nullptr);
TrigPoly symbol_from_json(const std::string& text, SymbolMeta* meta_out = nullptr);
void write_symbol_file(const std::string& path, const TrigPoly& poly,
                       const SymbolMeta* meta = nullptr);
TrigPoly read_symbol_file(const std::string& path, SymbolMeta* meta_out = nullptr);

}  // namespace tqe
