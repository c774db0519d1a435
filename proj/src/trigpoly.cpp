#include "tqe/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "tqe/error.hpp"
#include "tqe/kernels/api.hpp"
#include "tqe/quadrature.hpp"

namespace tqe {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kFourPiSq = 39.478417604357434475337963999505;

int lex_cmp(const std::int32_t* a, const std::int32_t* b, int dim) {
  for (int i = 0; i < dim; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}
}  // namespace

TrigPoly::TrigPoly(int dim, std::vector<std::pair<Freq, Cplx>> entries) : dim_(dim) {
  if (dim < 1) throw ValidationError("TrigPoly: dimension must be >= 1");
  for (const auto& [p, amp] : entries) {
    if (static_cast<int>(p.size()) != dim)
      throw ValidationError("TrigPoly: frequency arity does not match dimension");
    (void)amp;
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < entries.size();) {
    Cplx total = entries[i].second;
    std::size_t j = i + 1;
    while (j < entries.size() && entries[j].first == entries[i].first) {
      total += entries[j].second;
      ++j;
    }
    if (total != Cplx(0.0, 0.0)) {
      freqs_.insert(freqs_.end(), entries[i].first.begin(), entries[i].first.end());
      amps_.push_back(total);
    }
    i = j;
  }
  finalize();
}

void TrigPoly::finalize() {
  const std::size_t m = amps_.size();
  freqs_d_.resize(freqs_.size());
  for (std::size_t i = 0; i < freqs_.size(); ++i) freqs_d_[i] = static_cast<double>(freqs_[i]);
  amps_re_.resize(m);
  amps_im_.resize(m);
  double max_amp = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    amps_re_[i] = amps_[i].real();
    amps_im_[i] = amps_[i].imag();
    max_amp = std::max(max_amp, std::abs(amps_[i]));
  }
  support_radius_ = 0.0;
  max_abs_freq_ = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double r2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
      std::int32_t c = freq(i)[d];
      r2 += static_cast<double>(c) * c;
      max_abs_freq_ = std::max(max_abs_freq_, std::abs(c));
    }
    support_radius_ = std::max(support_radius_, std::sqrt(r2));
  }
  // reality check: every mode needs a conjugate partner at -p
  real_valued_ = true;
  double tol = 1e-12 * std::max(1.0, max_amp);
  Freq neg(static_cast<std::size_t>(dim_));
  for (std::size_t i = 0; i < m && real_valued_; ++i) {
    for (int d = 0; d < dim_; ++d) neg[static_cast<std::size_t>(d)] = -freq(i)[d];
    Cplx partner = coeff(neg);
    if (std::abs(partner - std::conj(amps_[i])) > tol) real_valued_ = false;
  }
}

TrigPoly TrigPoly::single_mode(int dim, const Freq& p, Cplx amp) {
  return TrigPoly(dim, {{p, amp}});
}

Cplx TrigPoly::coeff(const std::int32_t* p) const {
  std::size_t lo = 0, hi = n_modes();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    int c = lex_cmp(freq(mid), p, dim_);
    if (c == 0) return amps_[mid];
    if (c < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return Cplx(0.0, 0.0);
}

Cplx TrigPoly::evaluate(const double* x) const {
  Cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < n_modes(); ++i) {
    double dot = 0.0;
    for (int d = 0; d < dim_; ++d) dot += static_cast<double>(freq(i)[d]) * x[d];
    double a = kTwoPi * dot;
    acc += amps_[i] * Cplx(std::cos(a), std::sin(a));
  }
  return acc;
}

void TrigPoly::evaluate_batch(const double* pts, std::size_t n_pts, double* out_re,
                              double* out_im) const {
  kernels::active_ops().trig_eval_batch(dim_, n_modes(), freqs_d_.data(), amps_re_.data(),
                                        amps_im_.data(), n_pts, pts, out_re, out_im);
}

double TrigPoly::l2_norm_sq() const {
  CompensatedSum s;
  for (const Cplx& a : amps_) s.add(std::norm(a));
  return s.value();
}

double TrigPoly::sobolev_norm_sq(double s) const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < n_modes(); ++i) {
    double r2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
      double c = static_cast<double>(freq(i)[d]);
      r2 += c * c;
    }
    acc.add(std::pow(1.0 + kFourPiSq * r2, s) * std::norm(amps_[i]));
  }
  return acc.value();
}

TrigPoly TrigPoly::mean_zero() const {
  std::vector<std::pair<Freq, Cplx>> entries;
  entries.reserve(n_modes());
  for (std::size_t i = 0; i < n_modes(); ++i) {
    bool zero = true;
    for (int d = 0; d < dim_; ++d) zero = zero && freq(i)[d] == 0;
    if (!zero) entries.emplace_back(freq_vec(i), amps_[i]);
  }
  return TrigPoly(dim_, std::move(entries));
}

TrigPoly TrigPoly::derivative(const std::vector<int>& beta) const {
  if (static_cast<int>(beta.size()) != dim_)
    throw ValidationError("TrigPoly::derivative: multi-index arity mismatch");
  std::vector<std::pair<Freq, Cplx>> entries;
  entries.reserve(n_modes());
  for (std::size_t i = 0; i < n_modes(); ++i) {
    Cplx factor(1.0, 0.0);
    for (int d = 0; d < dim_; ++d) {
      Cplx base(0.0, kTwoPi * static_cast<double>(freq(i)[d]));
      for (int k = 0; k < beta[static_cast<std::size_t>(d)]; ++k) factor *= base;
    }
    entries.emplace_back(freq_vec(i), amps_[i] * factor);
  }
  return TrigPoly(dim_, std::move(entries));
}

TrigPoly TrigPoly::scaled(Cplx factor) const {
  std::vector<std::pair<Freq, Cplx>> entries;
  entries.reserve(n_modes());
  for (std::size_t i = 0; i < n_modes(); ++i) entries.emplace_back(freq_vec(i), amps_[i] * factor);
  return TrigPoly(dim_, std::move(entries));
}

std::string symbol_to_json(const TrigPoly& poly, const SymbolMeta* meta) {
  nlohmann::json j;
  j["d"] = poly.dim();
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < poly.n_modes(); ++i) {
    nlohmann::json p = nlohmann::json::array();
    for (int d = 0; d < poly.dim(); ++d) p.push_back(poly.freq(i)[d]);
    entries.push_back(nlohmann::json::array({p, poly.amp(i).real(), poly.amp(i).imag()}));
  }
  j["entries"] = entries;
  if (meta) {
    nlohmann::json m = nlohmann::json::object();
    if (!meta->profile.empty()) m["profile"] = meta->profile;
    if (!std::isnan(meta->nu1)) m["nu1"] = meta->nu1;
    if (!std::isnan(meta->hbar)) m["hbar"] = meta->hbar;
    if (!std::isnan(meta->tail_l2_sq)) m["tail_l2_sq"] = meta->tail_l2_sq;
    if (!m.empty()) j["metadata"] = m;
  }
  return j.dump(2);
}

TrigPoly symbol_from_json(const std::string& text, SymbolMeta* meta_out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("symbol JSON parse error: ") + e.what());
  }
  if (!j.contains("d") || !j.contains("entries"))
    throw ValidationError("symbol JSON: missing required field 'd' or 'entries'");
  int dim = j.at("d").get<int>();
  std::vector<std::pair<Freq, Cplx>> entries;
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3)
      throw ValidationError("symbol JSON: each entry must be [[p...], re, im]");
    Freq p;
    for (const auto& c : e.at(0)) p.push_back(c.get<std::int32_t>());
    entries.emplace_back(std::move(p), Cplx(e.at(1).get<double>(), e.at(2).get<double>()));
  }
  if (meta_out && j.contains("metadata")) {
    const auto& m = j.at("metadata");
    if (m.contains("profile")) meta_out->profile = m.at("profile").get<std::string>();
    if (m.contains("nu1")) meta_out->nu1 = m.at("nu1").get<double>();
    if (m.contains("hbar")) meta_out->hbar = m.at("hbar").get<double>();
    if (m.contains("tail_l2_sq")) meta_out->tail_l2_sq = m.at("tail_l2_sq").get<double>();
  }
  return TrigPoly(dim, std::move(entries));
}

void write_symbol_file(const std::string& path, const TrigPoly& poly, const SymbolMeta* meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open symbol file for writing: " + path);
  out << symbol_to_json(poly, meta) << "\n";
}

TrigPoly read_symbol_file(const std::string& path, SymbolMeta* meta_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open symbol file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return symbol_from_json(text, meta_out);
}

}  // namespace tqe
