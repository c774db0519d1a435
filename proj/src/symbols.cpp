#include "tqe/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tqe/error.hpp"
#include "tqe/lattice.hpp"
#include "tqe/quadrature.hpp"
#include "tqe/rng.hpp"
#include "tqe/sphere_quad.hpp"

namespace tqe {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double quad_mass(BumpProfile p, bool squared) {
  // smooth profile has no elementary antiderivative; both templates are
  // analytic on [-1,1], so a single high-order panel set is exact to rounding
  return integrate_composite(
      [&](double u) {
        double v = profile_value(p, u);
        return squared ? v * v : v;
      },
      -1.0, 1.0, 8, 24);
}

/// F(omega) = int_{-1}^{1} profile(v) cos(omega v) dv (profiles are even).
double profile_transform(BumpProfile p, double omega) {
  std::size_t panels = static_cast<std::size_t>(std::ceil(std::abs(omega) / M_PI)) + 2;
  return integrate_composite([&](double v) { return profile_value(p, v) * std::cos(omega * v); },
                             -1.0, 1.0, panels, 12);
}

/// 1D coefficients g_m = rho * F(2 pi m rho) * e^{-2 pi i m x0}, |m| <= cutoff.
std::vector<Cplx> axis_fourier(BumpProfile profile, double x0, double rho, std::int32_t cutoff) {
  std::vector<Cplx> g(static_cast<std::size_t>(2 * cutoff + 1));
  for (std::int32_t m = 0; m <= cutoff; ++m) {
    double f = rho * profile_transform(profile, kTwoPi * m * rho);
    double a = -kTwoPi * m * x0;
    Cplx pos = f * Cplx(std::cos(a), std::sin(a));
    g[static_cast<std::size_t>(cutoff + m)] = pos;
    g[static_cast<std::size_t>(cutoff - m)] = std::conj(pos);
  }
  return g;
}

void tensor_modes(int dim, std::int32_t cutoff, std::int64_t cutoff_sq, Freq& p,
                  std::vector<Freq>& out) {
  if (static_cast<int>(p.size()) == dim) {
    out.push_back(p);
    return;
  }
  std::int64_t used = 0;
  for (std::int32_t c : p) used += static_cast<std::int64_t>(c) * c;
  for (std::int32_t c = -cutoff; c <= cutoff; ++c) {
    if (used + static_cast<std::int64_t>(c) * c > cutoff_sq) continue;
    p.push_back(c);
    tensor_modes(dim, cutoff, cutoff_sq, p, out);
    p.pop_back();
  }
}

}  // namespace

BumpProfile bump_profile_from_name(const std::string& name) {
  if (name == "one" || name == "const") return BumpProfile::One;
  if (name == "cos2") return BumpProfile::Cos2;
  if (name == "smooth") return BumpProfile::Smooth;
  throw ValidationError("unknown bump profile '" + name + "' (expected one|cos2|smooth)");
}

const char* bump_profile_name(BumpProfile p) {
  switch (p) {
    case BumpProfile::One: return "one";
    case BumpProfile::Cos2: return "cos2";
    case BumpProfile::Smooth: return "smooth";
  }
  return "?";
}

double profile_value(BumpProfile p, double u) {
  switch (p) {
    case BumpProfile::One:
      return 1.0;
    case BumpProfile::Cos2: {
      if (std::abs(u) >= 1.0) return 0.0;
      double c = std::cos(0.5 * M_PI * u);
      return c * c;
    }
    case BumpProfile::Smooth: {
      if (std::abs(u) >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u * u));
    }
  }
  return 0.0;
}

double profile_mass(BumpProfile p) {
  if (p == BumpProfile::Cos2) return 1.0;  // int cos^2(pi u/2) over [-1,1]
  static std::map<BumpProfile, double> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, quad_mass(p, false)).first;
  return it->second;
}

double profile_mass_sq(BumpProfile p) {
  if (p == BumpProfile::Cos2) return 0.75;  // int cos^4(pi u/2) over [-1,1]
  static std::map<BumpProfile, double> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, quad_mass(p, true)).first;
  return it->second;
}

RescaledBump rescaled_bump(const std::vector<double>& x0, double nu1, double hbar,
                           BumpProfile profile, std::int32_t cutoff, double tail_tol,
                           bool l1_normalize) {
  const int dim = static_cast<int>(x0.size());
  if (dim < 1) throw ValidationError("rescaled_bump: empty center point");
  if (!(hbar > 0.0) || hbar > 1.0) throw ValidationError("rescaled_bump: hbar must be in (0,1]");
  if (nu1 < 0.0) throw ValidationError("rescaled_bump: nu1 must be >= 0");
  if (cutoff < 0) throw ValidationError("rescaled_bump: cutoff must be >= 0");

  RescaledBump out;
  out.cutoff = cutoff;

  if (profile == BumpProfile::One) {
    // no localization: the symbol is identically 1
    out.poly = TrigPoly::single_mode(dim, Freq(static_cast<std::size_t>(dim), 0), Cplx(1.0, 0.0));
    out.full_l2_sq = 1.0;
    out.scale = 1.0;
    return out;
  }

  const double rho = std::pow(hbar, nu1);
  // nu1 = 0 means rho = 1: the (self-overlapping) periodization is still
  // well-defined and its coefficients are still the full-line transform
  // samples, so only genuinely localized bumps enforce the 1/4 bound.
  if (nu1 > 0.0 && !(rho < 0.25))
    throw ValidationError("rescaled_bump: hbar^nu1 must be < 1/4 to fit a fundamental domain");
  out.scale = rho;

  double est = 1.0;
  for (int d = 0; d < dim; ++d) est *= 2.0 * cutoff + 1.0;
  if (est > 2e7) throw BudgetError("rescaled_bump: tensor cutoff box too large");

  out.axis_coeffs.reserve(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d)
    out.axis_coeffs.push_back(axis_fourier(profile, x0[static_cast<std::size_t>(d)], rho, cutoff));

  std::vector<Freq> modes;
  Freq scratch;
  tensor_modes(dim, cutoff, static_cast<std::int64_t>(cutoff) * cutoff, scratch, modes);

  std::vector<std::pair<Freq, Cplx>> entries;
  entries.reserve(modes.size());
  CompensatedSum kept;
  for (const Freq& p : modes) {
    Cplx amp(1.0, 0.0);
    for (int d = 0; d < dim; ++d)
      amp *= out.axis_coeffs[static_cast<std::size_t>(d)]
                            [static_cast<std::size_t>(cutoff + p[static_cast<std::size_t>(d)])];
    kept.add(std::norm(amp));
    entries.emplace_back(p, amp);
  }

  out.full_l2_sq = 1.0;
  for (int d = 0; d < dim; ++d) out.full_l2_sq *= rho * profile_mass_sq(profile);
  out.tail_l2_sq = std::max(0.0, out.full_l2_sq - kept.value());
  if (out.tail_l2_sq > tail_tol * out.full_l2_sq)
    throw ToleranceError("rescaled_bump: truncation tail " + std::to_string(out.tail_l2_sq) +
                         " exceeds tolerance at cutoff " + std::to_string(cutoff));

  if (l1_normalize) {
    double mass = 1.0;
    for (int d = 0; d < dim; ++d) mass *= rho * profile_mass(profile);
    for (auto& e : entries) e.second /= mass;
    out.full_l2_sq /= mass * mass;
    out.tail_l2_sq /= mass * mass;
    // keep the tensor identity poly = prod(axis) by folding the factor into axis 0
    for (auto& c : out.axis_coeffs.front()) c /= mass;
  }

  out.poly = TrigPoly(dim, std::move(entries));
  return out;
}

double ball_radial_transform(int dim, double r, double m) {
  if (dim < 2) throw ValidationError("ball_radial_transform: dimension must be >= 2");
  if (!(r > 0.0)) throw ValidationError("ball_radial_transform: radius must be positive");
  if (m == 0.0) return unit_ball_volume(dim) * std::pow(r, dim);
  double c = kTwoPi * m * r;
  double integral =
      sphere_phi_integral(c, dim, kernels::Integrand::Cos, sphere_panel_count(c) + 2, 12);
  return unit_ball_volume(dim - 1) * std::pow(r, dim) * integral;
}

TrigPoly ball_indicator_coeffs(int dim, double r, const std::vector<double>& x0,
                               std::int32_t cutoff) {
  if (dim < 2) throw ValidationError("ball_indicator_coeffs: dimension must be >= 2");
  if (!(r > 0.0 && r < 0.5))
    throw ValidationError("ball_indicator_coeffs: radius must satisfy 0 < r < 1/2");
  if (static_cast<int>(x0.size()) != dim)
    throw ValidationError("ball_indicator_coeffs: center arity mismatch");
  if (cutoff < 0) throw ValidationError("ball_indicator_coeffs: cutoff must be >= 0");

  double est = 1.0;
  for (int d = 0; d < dim; ++d) est *= 2.0 * cutoff + 1.0;
  if (est > 2e7) throw BudgetError("ball_indicator_coeffs: cutoff box too large");

  std::vector<Freq> modes;
  Freq scratch;
  tensor_modes(dim, cutoff, static_cast<std::int64_t>(cutoff) * cutoff, scratch, modes);

  std::map<std::int64_t, double> radial;  // |q|^2 -> rho_d(r, |q|)
  std::vector<std::pair<Freq, Cplx>> entries;
  entries.reserve(modes.size());
  for (const Freq& q : modes) {
    std::int64_t nsq = 0;
    double dot = 0.0;
    for (int d = 0; d < dim; ++d) {
      nsq += static_cast<std::int64_t>(q[static_cast<std::size_t>(d)]) * q[static_cast<std::size_t>(d)];
      dot += static_cast<double>(q[static_cast<std::size_t>(d)]) * x0[static_cast<std::size_t>(d)];
    }
    auto it = radial.find(nsq);
    if (it == radial.end())
      it = radial.emplace(nsq, ball_radial_transform(dim, r, std::sqrt(static_cast<double>(nsq))))
               .first;
    double a = -kTwoPi * dot;
    entries.emplace_back(q, it->second * Cplx(std::cos(a), std::sin(a)));
  }
  return TrigPoly(dim, std::move(entries));
}

SymbolFamily fixed_symbol_family(TrigPoly a, std::string label) {
  SymbolFamily f;
  f.nu1 = 0.0;
  f.label = std::move(label);
  f.generator = [a = std::move(a)](double) { return a; };
  return f;
}

SymbolFamily bump_family(std::vector<double> x0, double nu1, BumpProfile profile,
                         std::int32_t cutoff, double tail_tol, bool l1_normalize) {
  SymbolFamily f;
  f.nu1 = nu1;
  f.label = std::string("bump_") + bump_profile_name(profile);
  f.generator = [=](double hbar) {
    return rescaled_bump(x0, nu1, hbar, profile, cutoff, tail_tol, l1_normalize).poly;
  };
  return f;
}

namespace {

void multi_indices(int dim, int max_order, std::vector<int>& beta, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(beta.size()) == dim) {
    out.push_back(beta);
    return;
  }
  int used = 0;
  for (int b : beta) used += b;
  for (int b = 0; b + used <= max_order; ++b) {
    beta.push_back(b);
    multi_indices(dim, max_order, beta, out);
    beta.pop_back();
  }
}

}  // namespace

std::vector<SeminormSample> measure_bump_seminorms(const std::vector<double>& x0, double nu1,
                                                   BumpProfile profile, std::int32_t cutoff,
                                                   const std::vector<double>& hbars, int max_order,
                                                   std::size_t grid_points) {
  const int dim = static_cast<int>(x0.size());
  std::vector<std::vector<int>> betas;
  std::vector<int> scratch;
  multi_indices(dim, max_order, scratch, betas);

  std::vector<SeminormSample> samples;
  for (double hbar : hbars) {
    RescaledBump bump = rescaled_bump(x0, nu1, hbar, profile, cutoff);
    // per-axis derivative sups on a uniform grid; exact for tensor products
    std::vector<std::vector<double>> axis_sup(static_cast<std::size_t>(dim),
                                              std::vector<double>(static_cast<std::size_t>(max_order + 1)));
    for (int d = 0; d < dim; ++d) {
      const auto& g = bump.axis_coeffs[static_cast<std::size_t>(d)];
      for (int o = 0; o <= max_order; ++o) {
        double sup = 0.0;
        for (std::size_t gp = 0; gp < grid_points; ++gp) {
          double x = static_cast<double>(gp) / static_cast<double>(grid_points);
          Cplx acc(0.0, 0.0);
          for (std::int32_t mm = -cutoff; mm <= cutoff; ++mm) {
            Cplx factor(1.0, 0.0);
            for (int k = 0; k < o; ++k) factor *= Cplx(0.0, kTwoPi * mm);
            double a = kTwoPi * mm * x;
            acc += g[static_cast<std::size_t>(cutoff + mm)] * factor * Cplx(std::cos(a), std::sin(a));
          }
          sup = std::max(sup, std::abs(acc));
        }
        axis_sup[static_cast<std::size_t>(d)][static_cast<std::size_t>(o)] = sup;
      }
    }
    for (const auto& beta : betas) {
      SeminormSample s;
      s.beta = beta;
      s.hbar = hbar;
      double sup = 1.0;
      int order_total = 0;
      for (int d = 0; d < dim; ++d) {
        sup *= axis_sup[static_cast<std::size_t>(d)][static_cast<std::size_t>(beta[static_cast<std::size_t>(d)])];
        order_total += beta[static_cast<std::size_t>(d)];
      }
      s.sup_derivative = sup;
      s.scaled = sup * std::pow(hbar, nu1 * order_total);
      samples.push_back(std::move(s));
    }
  }
  return samples;
}

TrigPoly random_real_symbol(int dim, int n_pairs, std::int32_t max_freq, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("random_real_symbol: dimension must be >= 1");
  if (n_pairs < 1) throw ValidationError("random_real_symbol: need at least one mode pair");
  if (max_freq < 1) throw ValidationError("random_real_symbol: max_freq must be >= 1");
  Rng rng(seed);
  std::set<Freq> chosen;
  std::vector<std::pair<Freq, Cplx>> entries;
  double amp_scale = 0.5 / std::sqrt(static_cast<double>(n_pairs));
  int guard = 0;
  while (static_cast<int>(chosen.size()) < n_pairs) {
    if (++guard > 100000)
      throw ValidationError("random_real_symbol: frequency box too small for requested pairs");
    Freq p(static_cast<std::size_t>(dim));
    bool zero = true;
    for (int d = 0; d < dim; ++d) {
      auto c = static_cast<std::int32_t>(
          std::floor(rng.uniform() * (2.0 * max_freq + 1.0)) - max_freq);
      c = std::clamp(c, -max_freq, max_freq);
      p[static_cast<std::size_t>(d)] = c;
      zero = zero && c == 0;
    }
    if (zero) continue;
    // canonicalize to the lexicographically positive representative
    Freq neg(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) neg[i] = -p[i];
    if (neg > p) p.swap(neg);
    if (!chosen.insert(p).second) continue;
    Cplx amp = amp_scale * Cplx(rng.gaussian(), rng.gaussian());
    Freq pneg(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) pneg[i] = -p[i];
    entries.emplace_back(p, amp);
    entries.emplace_back(pneg, std::conj(amp));
  }
  return TrigPoly(dim, std::move(entries));
}

}  // namespace tqe
