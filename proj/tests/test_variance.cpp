#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "tqe/calibration.hpp"
#include "tqe/error.hpp"
#include "tqe/rng.hpp"
#include "tqe/symbols.hpp"
#include "tqe/variance.hpp"

using namespace tqe;

namespace {

double sinc(double x) { return std::abs(x) < 1e-9 ? 1.0 : std::sin(x) / x; }

// independent dense reference: midpoint rule with ~10x the production node
// count on the same phi integral
double mode_integral_reference(int dim, double m, double horizon, std::size_t n_nodes) {
  double c = M_PI * m * horizon;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    double phi = (static_cast<double>(i) + 0.5) * M_PI / static_cast<double>(n_nodes);
    double w = std::pow(std::sin(phi), dim - 2);
    double s = sinc(c * std::cos(phi));
    num += s * s * w;
    den += w;
  }
  return num / den;
}

}  // namespace

TEST_CASE("mode integral tends to 1 as mT -> 0") {
  ModeIntegral mi = mode_integral(2, 1e-4, 1.0);
  CHECK(std::abs(mi.value - 1.0) < 1e-6);
  ModeIntegral mi3 = mode_integral(3, 1e-4, 1.0);
  CHECK(std::abs(mi3.value - 1.0) < 1e-6);
}

TEST_CASE("mode integral never exceeds 1") {
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    int dim = rng.uniform() < 0.5 ? 2 : 3;
    double m = 1.0 + 10.0 * rng.uniform();
    double horizon = 0.1 + 50.0 * rng.uniform();
    CHECK(mode_integral(dim, m, horizon).value <= 1.0 + 1e-12);
  }
}

TEST_CASE("mode integral matches a dense reference quadrature") {
  ModeIntegral mi = mode_integral(2, 5.0, 100.0);
  double dense = mode_integral_reference(2, 5.0, 100.0, 10 * mi.nodes);
  CHECK(mi.value == doctest::Approx(dense).epsilon(1e-8));
  // frozen value for this configuration (independent quadrature)
  CHECK(mi.value == doctest::Approx(6.366177333e-4).epsilon(1e-6));

  ModeIntegral mi3 = mode_integral(3, 3.0, 47.0);
  double dense3 = mode_integral_reference(3, 3.0, 47.0, 10 * mi3.nodes);
  CHECK(mi3.value == doctest::Approx(dense3).epsilon(1e-8));
}

TEST_CASE("d=3 mode integral matches the closed sine-integral form") {
  // frozen from (1/theta)(Si(2 theta) - sin^2(theta)/theta), theta = pi m T,
  // evaluated with an independent special-function library
  CHECK(mode_integral(3, 1.0, 2.0).value == doctest::Approx(2.374848349418e-01).epsilon(1e-10));
  CHECK(mode_integral(3, 3.0, 47.0).value == doctest::Approx(3.543551105944e-03).epsilon(1e-10));
  CHECK(mode_integral(3, 5.0, 100.0).value == doctest::Approx(9.997973576738e-04).epsilon(1e-10));
}

TEST_CASE("mode integral budget error") {
  CHECK_THROWS_AS(mode_integral(2, 10.0, 1e6, 1000), BudgetError);
  CHECK_THROWS_AS(mode_integral(2, -1.0, 10.0), ValidationError);
}

TEST_CASE("mode factor satisfies the calibrated 1/(mT) envelope for T >= 2") {
  for (int dim : {2, 3}) {
    double cap = calibration::mode_factor_bound(dim);
    for (double m : {1.0, 2.0, 3.0, 5.0, 8.0, 12.0}) {
      for (double horizon : {2.0, 3.7, 10.0, 100.0, 10000.0}) {
        double v = mode_integral(dim, m, horizon).value;
        CHECK(v <= std::min(1.0, cap / (m * horizon)) + 1e-12);
      }
    }
  }
}

TEST_CASE("birkhoff mode sum: trivial symbols") {
  TrigPoly constant(2, {{{0, 0}, {3.5, 0.0}}});
  BirkhoffVarianceResult r = birkhoff_variance_modes(constant, 10.0);
  CHECK(r.v_modes == 0.0);
  CHECK(r.bound_ratio == 0.0);

  TrigPoly pair(2, {{{3, 4}, {1.0, 0.0}}, {{-3, -4}, {1.0, 0.0}}});
  BirkhoffVarianceResult rp = birkhoff_variance_modes(pair, 7.0);
  CHECK(rp.v_modes == doctest::Approx(2.0 * mode_integral(2, 5.0, 7.0).value).epsilon(1e-14));
}

TEST_CASE("mode sum is bounded by the total mean-zero energy") {
  Rng rng(88);
  for (int t = 0; t < 10; ++t) {
    int dim = rng.uniform() < 0.5 ? 2 : 3;
    TrigPoly a = random_real_symbol(dim, 15, 6, 400 + static_cast<std::uint64_t>(t));
    double horizon = 0.5 + 20.0 * rng.uniform();
    BirkhoffVarianceResult r = birkhoff_variance_modes(a, horizon);
    CHECK(r.v_modes >= 0.0);
    CHECK(r.v_modes <= a.mean_zero().l2_norm_sq() * (1.0 + 1e-12));
  }
}

TEST_CASE("mode sum agrees with Monte Carlo within 4 standard errors") {
  Rng rng(2718);
  int agree = 0, total = 0;
  for (int t = 0; t < 10; ++t) {
    int dim = t % 2 ? 3 : 2;
    TrigPoly a = random_real_symbol(dim, 15, 5, 5000 + static_cast<std::uint64_t>(t));
    for (double horizon : {2.0, 10.0, 100.0}) {
      BirkhoffVarianceResult modes = birkhoff_variance_modes(a, horizon);
      McEstimate mc = birkhoff_variance_mc(a, horizon, 40000, 100 + static_cast<std::uint64_t>(t));
      ++total;
      if (std::abs(modes.v_modes - mc.value) <= 4.0 * mc.std_error) ++agree;
    }
  }
  CHECK(agree >= total - 1);  // ~6e-5 miss probability per case
}

TEST_CASE("Monte Carlo estimator is bit-deterministic in the seed") {
  TrigPoly a = random_real_symbol(2, 10, 4, 31415);
  McEstimate m1 = birkhoff_variance_mc(a, 10.0, 5000, 7);
  McEstimate m2 = birkhoff_variance_mc(a, 10.0, 5000, 7);
  CHECK(m1.value == m2.value);
  CHECK(m1.std_error == m2.std_error);
  TrigPoly constant(2, {{{0, 0}, {2.0, 0.0}}});
  McEstimate mz = birkhoff_variance_mc(constant, 5.0, 500, 3);
  CHECK(mz.value == 0.0);
  CHECK_THROWS_AS(birkhoff_variance_mc(a, 10.0, 50, 1), ValidationError);
}

TEST_CASE("standard-error scaling: 4x samples halve the error") {
  TrigPoly a = random_real_symbol(2, 12, 5, 999);
  double ratio_sum = 0.0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    McEstimate small = birkhoff_variance_mc(a, 5.0, 4000, 100 + rep);
    McEstimate big = birkhoff_variance_mc(a, 5.0, 16000, 200 + rep);
    ratio_sum += small.std_error / big.std_error;
  }
  double mean_ratio = ratio_sum / 10.0;
  CHECK(mean_ratio > 2.0 * 0.8);
  CHECK(mean_ratio < 2.0 * 1.2);
}

TEST_CASE("time-average bound: T*V <= C*||abar||^2 with the frozen constant") {
  Rng rng(1311);
  for (int t = 0; t < 12; ++t) {
    int dim = t % 2 ? 3 : 2;
    TrigPoly a = random_real_symbol(dim, 20, 6, 7777 + static_cast<std::uint64_t>(t));
    for (double horizon : {2.0, 10.0, 100.0, 1000.0}) {
      BirkhoffVarianceResult r = birkhoff_variance_modes(a, horizon);
      CHECK(r.bound_ratio <= calibration::kTimeAverageBoundConstant);
    }
  }
}

TEST_CASE("quantum variance vanishes identically on standard bases") {
  SpectralWindow w = window_from_lambda(2, 4000.0);
  TrigPoly a = random_real_symbol(2, 10, 3, 5);
  QuantumVarianceResult qv = quantum_variance(a, w, BasisKind::Standard, 0);
  CHECK(qv.v == 0.0);
  for (const auto& c : qv.breakdown) CHECK(c.sum_sq == 0.0);
}

TEST_CASE("quantum variance: cosine-paired hand expansion") {
  // window covering exactly n = 25; a = e_{2k} + e_{-2k} for k = (3,4):
  // only the {k,-k} pair couples, with elements +1 and -1, so V = 2/12
  double hbar = 1.0 / (2.0 * M_PI * 5.0);
  SpectralWindow w = shells_in_window(2, hbar, 1.0);
  REQUIRE(w.n_states == 12);
  TrigPoly a(2, {{{6, 8}, {1.0, 0.0}}, {{-6, -8}, {1.0, 0.0}}});
  QuantumVarianceResult qv = quantum_variance(a, w, BasisKind::CosinePaired, 0);
  CHECK(qv.v == doctest::Approx(2.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("quantum variance bookkeeping: matmul path equals the double loop") {
  SpectralWindow w = window_from_lambda(2, 4816.37);
  TrigPoly a = random_real_symbol(2, 10, 3, 77);
  QuantumVarianceResult qv = quantum_variance(a, w, BasisKind::HaarRandom, 4);
  TrigPoly abar = a.mean_zero();
  double recomputed = 0.0;
  std::size_t shell_idx = 0;
  for (const auto& shell : w.shells) {
    ShellBasis basis = ShellBasis::haar_random(shell, derive_seed(4, static_cast<std::uint64_t>(shell.n)));
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      Cplx me = matrix_element(abar, basis.eigenfunction(j));
      sum_sq += std::norm(me);
      CHECK(std::abs(me - qv.breakdown[shell_idx].elements[j]) < 1e-12);
    }
    recomputed += sum_sq;
    ++shell_idx;
  }
  recomputed /= static_cast<double>(w.n_states);
  CHECK(qv.v == doctest::Approx(recomputed).epsilon(1e-12));
}

TEST_CASE("quantum variance scales quadratically in the symbol") {
  SpectralWindow w = window_from_lambda(2, 8922.06);
  TrigPoly a = random_real_symbol(2, 8, 3, 11);
  QuantumVarianceResult qv1 = quantum_variance(a, w, BasisKind::HaarRandom, 21);
  QuantumVarianceResult qv3 = quantum_variance(a.scaled({3.0, 0.0}), w, BasisKind::HaarRandom, 21);
  CHECK(qv3.v == doctest::Approx(9.0 * qv1.v).epsilon(1e-12));
}

TEST_CASE("quantum variance rejects empty windows and mismatched dims") {
  SpectralWindow empty = window_from_lambda(2, 10000.0);  // n in [251,255]: no shells
  REQUIRE(empty.empty());
  TrigPoly a = random_real_symbol(2, 4, 2, 1);
  CHECK_THROWS_AS(quantum_variance(a, empty, BasisKind::HaarRandom, 0), ValidationError);
  SpectralWindow w = window_from_lambda(3, 2000.0);
  CHECK_THROWS_AS(quantum_variance(a, w, BasisKind::HaarRandom, 0), ValidationError);
}

TEST_CASE("quantum variance is independent of the thread count") {
  SpectralWindow w = window_from_lambda(2, 17449.5);
  TrigPoly a = random_real_symbol(2, 10, 4, 3);
  QuantumVarianceResult q1 = quantum_variance(a, w, BasisKind::HaarRandom, 5, 1);
  QuantumVarianceResult q4 = quantum_variance(a, w, BasisKind::HaarRandom, 5, 4);
  CHECK(q1.v == q4.v);
}

TEST_CASE("small ball: standard basis gives ratio 1 everywhere") {
  SpectralWindow w = shells_in_window(2, 1.0 / (2.0 * M_PI * 5.0), 1.0);
  SmallBallOptions opt;
  auto centers = default_center_grid(2, 5);
  SmallBallReport rep = small_ball_report(w, BasisKind::Standard, 0, 0.25, centers, opt);
  REQUIRE(rep.rows.size() == 12);
  for (const auto& row : rep.rows) {
    CHECK(row.ratio_min == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(row.ratio_max == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(rep.fraction_in_band == 1.0);
  CHECK_FALSE(rep.clamped);  // hbar^{1/4} = 0.42 < 1/2 needs no clamp
}

TEST_CASE("small ball in d=3: flat densities stay at ratio 1") {
  double hbar = 1.0 / (2.0 * M_PI * 3.0);  // window pinned on n = 9, r = 30
  SpectralWindow w = shells_in_window(3, hbar, 1.0);
  REQUIRE(!w.empty());
  SmallBallOptions opt;
  auto centers = default_center_grid(3, 3);
  SmallBallReport rep = small_ball_report(w, BasisKind::Standard, 0, 0.3, centers, opt);
  for (const auto& row : rep.rows) {
    CHECK(row.ratio_min == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(row.ratio_max == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(rep.fraction_in_band == 1.0);
}

TEST_CASE("small ball: radius precondition and clamping") {
  SpectralWindow w = window_from_lambda(2, 4000.0);
  auto centers = default_center_grid(2, 3);
  SmallBallOptions opt;
  opt.clamp_radius = false;
  // nu1 = 0 gives radius 1: rejected when clamping is off
  CHECK_THROWS_AS(small_ball_report(w, BasisKind::Standard, 0, 0.0, centers, opt),
                  ValidationError);
  opt.clamp_radius = true;
  SmallBallReport rep = small_ball_report(w, BasisKind::Standard, 0, 0.0, centers, opt);
  CHECK(rep.clamped);
  CHECK(rep.radius == opt.radius_max);
}

TEST_CASE("density subsequence and the Chebyshev property") {
  DensitySubsequence all = density_subsequence({0.0, 0.0, 0.0}, 0.5);
  CHECK(all.density == 1.0);
  CHECK(all.indices.size() == 3);
  DensitySubsequence none = density_subsequence({2.0, 3.0}, 0.5);
  CHECK(none.density == 0.0);

  Rng rng(55);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> devs(200);
    double mean_sq = 0.0;
    for (auto& d : devs) {
      d = std::abs(rng.gaussian()) * 0.3;
      mean_sq += d * d;
    }
    mean_sq /= static_cast<double>(devs.size());
    double eps = 0.1 + rng.uniform();
    DensitySubsequence ds = density_subsequence(devs, eps);
    CHECK(ds.density >= 1.0 - mean_sq / (eps * eps) - 1e-12);
  }
  CHECK_THROWS_AS(density_subsequence({1.0}, 0.0), ValidationError);
}

TEST_CASE("decay fit recovers exact power laws") {
  std::vector<std::pair<double, double>> pts;
  for (double s : {10.0, 100.0, 1000.0, 5000.0, 20000.0})
    pts.emplace_back(s, std::pow(s, -1.0 / 3.0));
  DecayFit fit = fit_decay(pts, false);
  CHECK(std::abs(fit.slope + 1.0 / 3.0) < 1e-12);
  CHECK(fit.max_residual < 1e-12);

  std::vector<std::pair<double, double>> flat{{10.0, 2.5}, {100.0, 2.5}, {1000.0, 2.5}};
  DecayFit f2 = fit_decay(flat, false);
  CHECK(std::abs(f2.slope) < 1e-14);

  // 1% multiplicative noise on s^{-1/2}
  Rng rng(4);
  std::vector<std::pair<double, double>> noisy;
  for (int i = 0; i < 30; ++i) {
    double s = std::pow(10.0, 1.0 + 0.1 * i);
    noisy.emplace_back(s, std::pow(s, -0.5) * (1.0 + 0.01 * rng.gaussian()));
  }
  DecayFit f3 = fit_decay(noisy, false);
  CHECK(f3.slope > -0.55);
  CHECK(f3.slope < -0.45);
}

TEST_CASE("decay fit degenerate inputs") {
  CHECK_THROWS_AS(fit_decay({{1.0, 1.0}, {2.0, 0.5}}, false), ValidationError);
  CHECK_THROWS_AS(fit_decay({{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}, {4.0, 1.0}}, true),
                  ValidationError);
  // drop_zeros keeps the positive subset
  DecayFit fit = fit_decay({{1.0, 1.0}, {2.0, 0.0}, {4.0, 0.25}, {8.0, 1.0 / 9.0}, {16.0, 0.0}},
                           true);
  CHECK(fit.n_used == 3);
}

TEST_CASE("theorem-2 style report: fixed family bookkeeping") {
  // a fixed 10-mode symbol, nu1 = 0, nu0 = 1/2: the L2 term dominates as
  // hbar -> 0 (it decays slowest: h^{1/2} vs h^1 for both other terms)
  TrigPoly a = random_real_symbol(2, 5, 2, 12321);
  SymbolFamily family = fixed_symbol_family(a);
  std::vector<SpectralWindow> windows;
  for (double lambda : {4816.37, 17449.5, 63204.9}) windows.push_back(window_from_lambda(2, lambda));
  Theorem2Report rep = theorem2_bound_report(family, windows, 0.5, 3.5, BasisKind::HaarRandom, 9);
  REQUIRE(rep.rows.size() == 3);
  double sobolev = a.mean_zero().sobolev_norm_sq(3.5);
  for (const auto& row : rep.rows) {
    CHECK(row.term_l2 == doctest::Approx(a.l2_norm_sq() * std::sqrt(row.hbar)).epsilon(1e-12));
    CHECK(row.term_sobolev == doctest::Approx(sobolev * row.hbar).epsilon(1e-12));
    CHECK(row.term_symbol == doctest::Approx(row.hbar).epsilon(1e-12));
    double max_term = std::max({row.term_l2, row.term_sobolev, row.term_symbol});
    CHECK(row.ratio == doctest::Approx(row.v / max_term).epsilon(1e-12));
  }
  // the h^{1/2} envelope decays slowest: its share grows monotonically as
  // hbar shrinks (rows are sorted by ascending lambda = descending hbar)
  double prev_share = 0.0;
  for (const auto& row : rep.rows) {
    double share = row.term_l2 / (row.term_sobolev + row.term_symbol);
    CHECK(share > prev_share);
    prev_share = share;
  }
}

TEST_CASE("theorem-2 report: zero family and validation") {
  SymbolFamily zero = fixed_symbol_family(TrigPoly::zero(2));
  std::vector<SpectralWindow> windows{window_from_lambda(2, 4816.37)};
  Theorem2Report rep = theorem2_bound_report(zero, windows, 0.5, 3.5, BasisKind::HaarRandom, 1);
  CHECK(rep.rows[0].v == 0.0);
  CHECK(rep.rows[0].ratio == 0.0);
  CHECK(rep.ratio_bounded);
  CHECK_THROWS_AS(theorem2_bound_report(zero, windows, 0.5, 2.9, BasisKind::HaarRandom, 1),
                  ValidationError);  // s <= (d+4)/2
}

TEST_CASE("theorem-2 report: bump family ratios stay bounded") {
  // smooth profile keeps the Sobolev norms finite for s > 3
  SymbolFamily family = bump_family({0.31, 0.57}, 0.4, BumpProfile::Smooth, 220, 1e-5);
  std::vector<SpectralWindow> windows;
  for (double lambda : {4816.37, 17449.5, 63204.9}) windows.push_back(window_from_lambda(2, lambda));
  Theorem2Report rep =
      theorem2_bound_report(family, windows, 0.5, 3.5, BasisKind::HaarRandom, 31, 3.0);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.ratio_bounded);
}
