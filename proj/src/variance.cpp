#include "tqe/variance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tqe/error.hpp"
#include "tqe/kernels/api.hpp"
#include "tqe/parallel.hpp"
#include "tqe/quadrature.hpp"
#include "tqe/rng.hpp"
#include "tqe/sphere_quad.hpp"

namespace tqe {

namespace {

constexpr int kPhiOrder = 12;

/// int_0^pi sin^{d-2}(phi) dphi = sqrt(pi) Gamma((d-1)/2) / Gamma(d/2):
/// total mass of the pushforward of the normalized sphere measure.
double sin_power_mass(int dim) {
  return std::sqrt(M_PI) * std::tgamma(0.5 * (dim - 1)) / std::tgamma(0.5 * dim);
}

}  // namespace

ModeIntegral mode_integral(int dim, double m, double time_horizon, std::int64_t quad_budget) {
  if (dim < 2) throw ValidationError("mode_integral: dimension must be >= 2");
  if (!(m > 0.0)) throw ValidationError("mode_integral: m must be positive");
  if (!(time_horizon > 0.0)) throw ValidationError("mode_integral: T must be positive");

  double c = M_PI * m * time_horizon;
  std::size_t panels = sphere_panel_count(c);
  std::size_t nodes = panels * static_cast<std::size_t>(kPhiOrder);
  if (static_cast<std::int64_t>(nodes) > quad_budget)
    throw BudgetError("mode_integral: " + std::to_string(nodes) +
                      " quadrature nodes exceed budget " + std::to_string(quad_budget) +
                      " at m*T = " + std::to_string(m * time_horizon));

  ModeIntegral out;
  out.dim = dim;
  out.m = m;
  out.time_horizon = time_horizon;
  out.nodes = nodes;
  out.value =
      sphere_phi_integral(c, dim - 2, kernels::Integrand::SincSq, panels, kPhiOrder) /
      sin_power_mass(dim);
  return out;
}

BirkhoffVarianceResult birkhoff_variance_modes(const TrigPoly& a, double time_horizon,
                                               std::int64_t quad_budget) {
  if (!(time_horizon > 0.0)) throw ValidationError("birkhoff_variance_modes: T must be positive");
  TrigPoly abar = a.mean_zero();

  BirkhoffVarianceResult out;
  out.time_horizon = time_horizon;
  out.mode_count = abar.n_modes();

  std::map<std::int64_t, double> cache;  // |k|^2 -> M_d(|k|, T)
  CompensatedSum v;
  for (std::size_t i = 0; i < abar.n_modes(); ++i) {
    std::int64_t nsq = 0;
    for (int d = 0; d < abar.dim(); ++d)
      nsq += static_cast<std::int64_t>(abar.freq(i)[d]) * abar.freq(i)[d];
    auto it = cache.find(nsq);
    if (it == cache.end()) {
      double m = std::sqrt(static_cast<double>(nsq));
      it = cache.emplace(nsq, mode_integral(abar.dim(), m, time_horizon, quad_budget).value).first;
    }
    v.add(std::norm(abar.amp(i)) * it->second);
  }
  out.v_modes = v.value();
  double l2 = abar.l2_norm_sq();
  out.bound_ratio = l2 > 0.0 ? time_horizon * out.v_modes / l2 : 0.0;
  return out;
}

McEstimate birkhoff_variance_mc(const TrigPoly& a, double time_horizon, std::size_t n_samples,
                                std::uint64_t seed) {
  if (!(time_horizon > 0.0)) throw ValidationError("birkhoff_variance_mc: T must be positive");
  if (n_samples < 100) throw ValidationError("birkhoff_variance_mc: need at least 100 samples");
  TrigPoly abar = a.mean_zero();
  const int dim = abar.dim();

  Rng rng(seed);
  std::vector<double> xs(n_samples * static_cast<std::size_t>(dim));
  std::vector<double> xis(n_samples * static_cast<std::size_t>(dim));
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (int d = 0; d < dim; ++d) xs[s * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] = rng.uniform();
    rng.sphere(dim, &xis[s * static_cast<std::size_t>(dim)]);
  }

  std::vector<double> dev_sq(n_samples);
  kernels::active_ops().birkhoff_dev_sq(dim, abar.n_modes(), abar.freqs_as_double().data(),
                                        abar.amps_re().data(), abar.amps_im().data(), time_horizon,
                                        n_samples, xs.data(), xis.data(), dev_sq.data());

  CompensatedSum sum, sum_sq;
  for (double v : dev_sq) {
    sum.add(v);
    sum_sq.add(v * v);
  }
  double n = static_cast<double>(n_samples);
  double mean = sum.value() / n;
  double var = std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

QuantumVarianceResult quantum_variance(const TrigPoly& a, const SpectralWindow& window,
                                       BasisKind kind, std::uint64_t seed, int threads) {
  if (a.dim() != window.dim) throw ValidationError("quantum_variance: dimension mismatch");
  if (window.empty()) throw ValidationError("quantum_variance: empty spectral window");
  TrigPoly abar = a.mean_zero();

  QuantumVarianceResult out;
  out.dim = window.dim;
  out.hbar = window.hbar;
  out.alpha = window.alpha;
  out.lambda = window.lambda();
  out.n_states = window.n_states;
  out.shell_count = window.shells.size();
  out.kind = kind;
  out.seed = seed;
  out.breakdown.resize(window.shells.size());

  parallel_for(window.shells.size(), threads, [&](std::size_t si) {
    const Shell& shell = window.shells[si];
    const std::size_t r = shell.size();
    std::uint64_t shell_seed = derive_seed(seed, static_cast<std::uint64_t>(shell.n));
    ShellBasis basis = ShellBasis::make(kind, shell, shell_seed);

    ShellContribution contrib;
    contrib.n = shell.n;
    contrib.multiplicity = r;
    contrib.elements.reserve(r);

    // compression of abar to the shell: A(k',k) = abar_{k'-k}
    Eigen::MatrixXcd compression(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    Freq diff(static_cast<std::size_t>(shell.dim));
    for (std::size_t ip = 0; ip < r; ++ip) {
      const std::int32_t* kp = shell.at(ip);
      for (std::size_t i = 0; i < r; ++i) {
        const std::int32_t* k = shell.at(i);
        for (int d = 0; d < shell.dim; ++d) diff[static_cast<std::size_t>(d)] = kp[d] - k[d];
        compression(static_cast<Eigen::Index>(ip), static_cast<Eigen::Index>(i)) =
            abar.coeff(diff);
      }
    }
    // <psi_j, abar psi_j> = conj(row_j) . A . row_j^T
    const Eigen::MatrixXcd& u = basis.matrix();
    Eigen::MatrixXcd right = compression * u.transpose();
    CompensatedSum sum_sq;
    for (std::size_t j = 0; j < r; ++j) {
      Cplx me = u.row(static_cast<Eigen::Index>(j)).conjugate() *
                right.col(static_cast<Eigen::Index>(j));
      contrib.elements.push_back(me);
      sum_sq.add(std::norm(me));
    }
    contrib.sum_sq = sum_sq.value();
    out.breakdown[si] = std::move(contrib);
  });

  CompensatedSum total;
  for (const auto& c : out.breakdown) total.add(c.sum_sq);
  out.v = total.value() / static_cast<double>(window.n_states);
  return out;
}

std::vector<std::vector<double>> default_center_grid(int dim, int per_axis) {
  std::vector<std::vector<double>> centers;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    std::vector<double> pt(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d)
      pt[static_cast<std::size_t>(d)] =
          static_cast<double>(idx[static_cast<std::size_t>(d)]) / static_cast<double>(per_axis);
    centers.push_back(std::move(pt));
    int d = 0;
    while (d < dim && ++idx[static_cast<std::size_t>(d)] == per_axis) {
      idx[static_cast<std::size_t>(d)] = 0;
      ++d;
    }
    if (d == dim) break;
  }
  return centers;
}

SmallBallReport small_ball_report(const SpectralWindow& window, BasisKind kind, std::uint64_t seed,
                                  double nu1, const std::vector<std::vector<double>>& centers,
                                  const SmallBallOptions& options) {
  if (nu1 < 0.0) throw ValidationError("small_ball_report: nu1 must be >= 0");
  if (centers.empty()) throw ValidationError("small_ball_report: need at least one center");
  if (window.empty()) throw ValidationError("small_ball_report: empty spectral window");

  SmallBallReport report;
  report.dim = window.dim;
  report.lambda = window.lambda();
  report.nu1 = nu1;
  report.kind = kind;
  report.seed = seed;

  double r = std::pow(window.hbar, nu1);
  if (!(r < 0.5)) {
    if (!options.clamp_radius)
      throw ValidationError("small_ball_report: radius hbar^nu1 = " + std::to_string(r) +
                            " is not below 1/2 (clamp mode off)");
    r = options.radius_max;
    report.clamped = true;
  }
  report.radius = r;

  const std::size_t n_centers = centers.size();
  std::vector<double> flat(n_centers * static_cast<std::size_t>(window.dim));
  for (std::size_t i = 0; i < n_centers; ++i) {
    if (static_cast<int>(centers[i].size()) != window.dim)
      throw ValidationError("small_ball_report: center arity mismatch");
    for (int d = 0; d < window.dim; ++d)
      flat[i * static_cast<std::size_t>(window.dim) + static_cast<std::size_t>(d)] =
          centers[i][static_cast<std::size_t>(d)];
  }

  std::vector<std::vector<SmallBallRow>> per_shell(window.shells.size());
  parallel_for(window.shells.size(), options.threads, [&](std::size_t si) {
    const Shell& shell = window.shells[si];
    BallTransform transform(window.dim, r);
    std::uint64_t shell_seed = derive_seed(seed, static_cast<std::uint64_t>(shell.n));
    ShellBasis basis = ShellBasis::make(kind, shell, shell_seed);
    const double volume = transform.volume();
    const std::int64_t cutoff_sq =
        static_cast<std::int64_t>(options.cutoff) * options.cutoff;

    std::vector<SmallBallRow> rows;
    rows.reserve(basis.size());
    std::vector<double> out_re(n_centers), out_im(n_centers);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      TrigPoly b = density_coeffs(basis.eigenfunction(j));
      // weight the density coefficients by the radial transform; evaluating
      // the weighted series at a center gives the ball mass there
      std::vector<std::pair<Freq, Cplx>> weighted;
      weighted.reserve(b.n_modes());
      for (std::size_t mi = 0; mi < b.n_modes(); ++mi) {
        const std::int32_t* q = b.freq(mi);
        std::int64_t nsq = 0;
        for (int d = 0; d < window.dim; ++d) nsq += static_cast<std::int64_t>(q[d]) * q[d];
        if (nsq > cutoff_sq) continue;
        weighted.emplace_back(b.freq_vec(mi), b.amp(mi) * transform.radial(nsq));
      }
      TrigPoly wpoly(window.dim, std::move(weighted));
      wpoly.evaluate_batch(flat.data(), n_centers, out_re.data(), out_im.data());

      SmallBallRow row;
      row.n = shell.n;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t ci = 0; ci < n_centers; ++ci) {
        double ratio = out_re[ci] / volume;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      row.ratio_min = lo;
      row.ratio_max = hi;
      rows.push_back(row);
    }
    per_shell[si] = std::move(rows);
  });

  std::size_t j_running = 0;
  std::size_t in_band = 0;
  for (auto& rows : per_shell) {
    for (auto& row : rows) {
      row.j = j_running++;
      if (row.ratio_min >= options.band_lo && row.ratio_max <= options.band_hi) ++in_band;
      report.rows.push_back(row);
    }
  }
  report.fraction_in_band =
      report.rows.empty() ? 0.0 : static_cast<double>(in_band) / static_cast<double>(report.rows.size());
  return report;
}

DensitySubsequence density_subsequence(const std::vector<double>& deviations, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("density_subsequence: epsilon must be positive");
  DensitySubsequence out;
  for (std::size_t i = 0; i < deviations.size(); ++i)
    if (deviations[i] <= epsilon) out.indices.push_back(i);
  out.density = deviations.empty()
                    ? 0.0
                    : static_cast<double>(out.indices.size()) / static_cast<double>(deviations.size());
  return out;
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& points, bool drop_zeros) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [scale, value] : points) {
    if (!(scale > 0.0)) throw ValidationError("fit_decay: scales must be positive");
    if (value <= 0.0) {
      if (drop_zeros) continue;
      throw ValidationError("fit_decay: non-positive value with drop_zeros off");
    }
    logs.emplace_back(std::log(scale), std::log(value));
  }
  if (logs.size() < 3)
    throw ValidationError("fit_decay: degenerate fit, need at least 3 positive points");

  double n = static_cast<double>(logs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : logs) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-14 * std::max(1.0, sxx))
    throw ValidationError("fit_decay: degenerate fit, scales are collinear");

  DecayFit fit;
  fit.n_used = logs.size();
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (const auto& [x, y] : logs)
    fit.max_residual = std::max(fit.max_residual, std::abs(y - (fit.slope * x + fit.intercept)));
  return fit;
}

Theorem2Report theorem2_bound_report(const SymbolFamily& family,
                                     const std::vector<SpectralWindow>& windows, double nu0,
                                     double s, BasisKind kind, std::uint64_t seed, double slack,
                                     int threads) {
  if (windows.empty()) throw ValidationError("theorem2_bound_report: no windows");
  int dim = windows.front().dim;
  if (!(s > 0.5 * (dim + 4)))
    throw ValidationError("theorem2_bound_report: s must exceed (d+4)/2");
  if (nu0 < 0.0 || family.nu1 < 0.0)
    throw ValidationError("theorem2_bound_report: nu0 and nu1 must be >= 0");

  Theorem2Report report;
  report.nu0 = nu0;
  report.nu1 = family.nu1;
  report.s = s;
  report.slack = slack;

  for (const SpectralWindow& w : windows) {
    if (w.dim != dim) throw ValidationError("theorem2_bound_report: mixed dimensions");
    if (w.empty()) {
      report.skipped_lambdas.push_back(w.lambda());
      continue;
    }
    TrigPoly a = family.generator(w.hbar);
    QuantumVarianceResult qv = quantum_variance(a, w, kind, seed, threads);
    Theorem2Row row;
    row.hbar = w.hbar;
    row.lambda = w.lambda();
    row.n_states = w.n_states;
    row.v = qv.v;
    row.term_l2 = a.l2_norm_sq() * std::pow(w.hbar, nu0);
    row.term_sobolev = a.mean_zero().sobolev_norm_sq(s) * std::pow(w.hbar, 2.0 - 2.0 * nu0);
    row.term_symbol = std::pow(w.hbar, 2.0 - 2.0 * (nu0 + family.nu1));
    double max_term = std::max({row.term_l2, row.term_sobolev, row.term_symbol});
    row.ratio = max_term > 0.0 ? row.v / max_term : 0.0;
    report.rows.push_back(row);
  }

  std::sort(report.rows.begin(), report.rows.end(),
            [](const Theorem2Row& a, const Theorem2Row& b) { return a.lambda < b.lambda; });
  if (!report.rows.empty()) {
    double anchor = report.rows.front().ratio;  // largest hbar = smallest lambda
    report.ratio_bounded = true;
    for (const auto& row : report.rows) {
      // zero anchor (e.g. the zero symbol) stays bounded only if everything is zero
      if (row.ratio > anchor * slack || (anchor == 0.0 && row.ratio != 0.0))
        report.ratio_bounded = false;
    }
  }
  return report;
}

}  // namespace tqe
