#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "tqe/error.hpp"
#include "tqe/lattice.hpp"
#include "tqe/rng.hpp"

using namespace tqe;

namespace {

constexpr double kFourPiSq = 39.478417604357434475337963999505;

// independent oracle: full box scan, no pruning, no recursion
std::set<std::vector<int>> brute_shell(int dim, std::int64_t n) {
  std::set<std::vector<int>> out;
  auto m = static_cast<int>(std::sqrt(static_cast<double>(n))) + 1;
  std::vector<int> v(static_cast<std::size_t>(dim), -m);
  while (true) {
    std::int64_t s = 0;
    for (int c : v) s += static_cast<std::int64_t>(c) * c;
    if (s == n) out.insert(v);
    int d = 0;
    while (d < dim && ++v[static_cast<std::size_t>(d)] > m) {
      v[static_cast<std::size_t>(d)] = -m;
      ++d;
    }
    if (d == dim) break;
  }
  return out;
}

std::int64_t brute_window_count(int dim, double lo, double hi) {
  auto m = static_cast<int>(std::sqrt(hi / kFourPiSq)) + 2;
  std::vector<int> v(static_cast<std::size_t>(dim), -m);
  std::int64_t count = 0;
  while (true) {
    std::int64_t s = 0;
    for (int c : v) s += static_cast<std::int64_t>(c) * c;
    double e = kFourPiSq * static_cast<double>(s);
    if (e >= lo && e <= hi) ++count;
    int d = 0;
    while (d < dim && ++v[static_cast<std::size_t>(d)] > m) {
      v[static_cast<std::size_t>(d)] = -m;
      ++d;
    }
    if (d == dim) break;
  }
  return count;
}

std::set<std::vector<int>> shell_as_set(const Shell& s) {
  std::set<std::vector<int>> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<int> v(s.at(i), s.at(i) + s.dim);
    out.insert(v);
  }
  return out;
}

}  // namespace

TEST_CASE("enumerate_shell d=2 n=25 gives the twelve known vectors") {
  Shell s = enumerate_shell(2, 25);
  REQUIRE(s.size() == 12);
  std::set<std::vector<int>> expected = {{-5, 0}, {5, 0}, {0, -5}, {0, 5},
                                         {-3, -4}, {-3, 4}, {3, -4}, {3, 4},
                                         {-4, -3}, {-4, 3}, {4, -3}, {4, 3}};
  CHECK(shell_as_set(s) == expected);
}

TEST_CASE("enumerate_shell edge cases") {
  CHECK(enumerate_shell(2, 3).size() == 0);  // 3 is not a sum of two squares
  Shell origin = enumerate_shell(2, 0);
  REQUIRE(origin.size() == 1);
  CHECK(origin.at(0)[0] == 0);
  CHECK(origin.at(0)[1] == 0);
  CHECK(enumerate_shell(3, 1).size() == 6);
}

TEST_CASE("enumerate_shell output is lexicographically sorted and deterministic") {
  for (std::int64_t n : {25, 100, 325, 1105}) {
    Shell s = enumerate_shell(2, n);
    Shell s2 = enumerate_shell(2, n);
    CHECK(s.coords == s2.coords);
    for (std::size_t i = 1; i < s.size(); ++i) {
      std::vector<int> a(s.at(i - 1), s.at(i - 1) + s.dim);
      std::vector<int> b(s.at(i), s.at(i) + s.dim);
      CHECK(a < b);
    }
  }
}

TEST_CASE("enumerate_shell matches the brute-force box scan") {
  Rng rng(20240901);
  for (int trial = 0; trial < 40; ++trial) {
    int dim = rng.uniform() < 0.5 ? 2 : 3;
    auto n = static_cast<std::int64_t>(rng.uniform() * 400.0);
    Shell s = enumerate_shell(dim, n);
    CHECK(shell_as_set(s) == brute_shell(dim, n));
    CHECK(s.n == n);
  }
}

TEST_CASE("shells are closed under negation and every signed permutation") {
  Rng rng(777);
  for (int trial = 0; trial < 25; ++trial) {
    int dim = rng.uniform() < 0.5 ? 2 : 3;
    auto n = 1 + static_cast<std::int64_t>(rng.uniform() * 500.0);
    Shell s = enumerate_shell(dim, n);
    auto set = shell_as_set(s);

    std::vector<int> axes(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) axes[static_cast<std::size_t>(i)] = i;
    do {
      for (int signs = 0; signs < (1 << dim); ++signs) {
        for (const auto& v : set) {
          std::vector<int> image(v.size());
          for (int i = 0; i < dim; ++i) {
            int c = v[static_cast<std::size_t>(axes[static_cast<std::size_t>(i)])];
            image[static_cast<std::size_t>(i)] = (signs >> i) & 1 ? -c : c;
          }
          CHECK(set.count(image) == 1);
        }
      }
    } while (std::next_permutation(axes.begin(), axes.end()));
  }
}

TEST_CASE("enumeration budget errors out on absurd boxes") {
  CHECK_THROWS_AS(enumerate_shell(6, 1'000'000, 1000), BudgetError);
}

TEST_CASE("shells_in_window covering exactly n=25") {
  // hbar centers the window on 4 pi^2 * 25; alpha = 1 keeps [24.2, 25.8]
  double hbar = 1.0 / (2.0 * M_PI * 5.0);
  SpectralWindow w = shells_in_window(2, hbar, 1.0);
  REQUIRE(w.shells.size() == 1);
  CHECK(w.shells[0].n == 25);
  CHECK(w.n_states == 12);
  CHECK(w.n_min == 25);
  CHECK(w.n_max == 25);
  CHECK(w.contains(25));
  CHECK_FALSE(w.contains(24));
}

TEST_CASE("window with no representable integer is empty") {
  // [5.5, 6.5]-ish in n units for d=2: n = 6 = 2*3 is not a sum of two squares
  double hbar = 1.0 / (2.0 * M_PI * std::sqrt(6.0));
  SpectralWindow w = shells_in_window(2, hbar, 0.1);
  CHECK(w.n_min == 6);
  CHECK(w.n_max == 6);
  CHECK(w.shells.empty());
  CHECK(w.n_states == 0);
}

TEST_CASE("d=3 window containing n=1 includes multiplicity 6") {
  double hbar = 1.0 / (2.0 * M_PI);
  SpectralWindow w = shells_in_window(3, hbar, 1.0);
  bool found = false;
  for (const auto& s : w.shells)
    if (s.n == 1) {
      found = true;
      CHECK(s.size() == 6);
    }
  CHECK(found);
}

TEST_CASE("window domain errors") {
  CHECK_THROWS_AS(shells_in_window(2, 0.5, 3.0), ValidationError);   // 1 - alpha*hbar <= 0
  CHECK_THROWS_AS(shells_in_window(2, 0.0, 1.0), ValidationError);   // hbar out of range
  CHECK_THROWS_AS(shells_in_window(2, 0.1, -1.0), ValidationError);  // alpha <= 0
  CHECK_THROWS_AS(window_from_lambda(2, 3.9), ValidationError);      // lambda < 4
  CHECK_THROWS_AS(weyl_count(2, 3.9), ValidationError);
}

TEST_CASE("window state count equals a brute-force box count") {
  Rng rng(31337);
  for (int trial = 0; trial < 15; ++trial) {
    int dim = rng.uniform() < 0.5 ? 2 : 3;
    double hbar = 0.02 + 0.08 * rng.uniform();
    double alpha = 0.5 + 2.0 * rng.uniform();
    if (1.0 - alpha * hbar <= 0.0) continue;
    SpectralWindow w = shells_in_window(dim, hbar, alpha);
    double inv_h2 = 1.0 / (hbar * hbar);
    std::int64_t brute =
        brute_window_count(dim, (1.0 - alpha * hbar) * inv_h2, (1.0 + alpha * hbar) * inv_h2);
    CHECK(w.n_states == brute);
  }
}

TEST_CASE("enlarging alpha never drops a shell") {
  Rng rng(99);
  for (int trial = 0; trial < 14; ++trial) {
    int dim = trial % 2 ? 3 : 2;
    double hbar = 0.02 + 0.05 * rng.uniform();
    double alpha = 0.4 + rng.uniform();
    SpectralWindow small = shells_in_window(dim, hbar, alpha);
    SpectralWindow big = shells_in_window(dim, hbar, alpha * 1.7);
    std::set<std::int64_t> big_ns;
    for (const auto& s : big.shells) big_ns.insert(s.n);
    for (const auto& s : small.shells) CHECK(big_ns.count(s.n) == 1);
  }
}

TEST_CASE("weyl_count equals the window state count on the same interval") {
  for (double lambda : {1000.0, 4816.37, 40000.0, 100000.0}) {
    WeylCount wc = weyl_count(2, lambda);
    SpectralWindow w = window_from_lambda(2, lambda);
    CHECK(wc.count == w.n_states);
  }
  for (double lambda : {2000.0, 10000.0}) {
    WeylCount wc = weyl_count(3, lambda);
    SpectralWindow w = window_from_lambda(3, lambda);
    CHECK(wc.count == w.n_states);
  }
  // window pinned on a single shell: the direct count sees exactly its 12 states
  double lambda25 = 39.478417604357434475337963999505 * 25.0 + 1e-9;
  CHECK(weyl_count(2, lambda25).count == 12);
}

TEST_CASE("weyl_count frozen desk-scale values") {
  // Frozen from the brute-force box scans (cross-checked above): the exact
  // boundary semantics put 4 pi^2 * 2525 = 99683.004 just below
  // lambda - sqrt(lambda) = 99683.772, so the d=2 count at 1e5 is 32.
  WeylCount w2 = weyl_count(2, 1e5);
  CHECK(w2.count == 32);
  CHECK(w2.predicted == doctest::Approx(50.3292121).epsilon(1e-6));
  CHECK(w2.ratio == doctest::Approx(0.63581365).epsilon(1e-6));

  WeylCount w3 = weyl_count(3, 1e4);
  CHECK(w3.count == 408);
  CHECK(w3.ratio == doctest::Approx(0.80535972).epsilon(1e-6));

  // larger aggregates smooth the fluctuations: d=2 averaged over a lambda
  // sweep sits near 1 (sanity that the constant C_d is right)
  double sum_ratio = 0.0;
  int cnt = 0;
  for (double lambda = 9.0e4; lambda <= 1.1e5; lambda += 1000.0) {
    sum_ratio += weyl_count(2, lambda).ratio;
    ++cnt;
  }
  CHECK(sum_ratio / cnt == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("weyl constant matches the unit ball volumes") {
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(weyl_constant(2) == doctest::Approx(1.0 / (2.0 * M_PI)));
  CHECK(weyl_constant(3) == doctest::Approx(1.0 / (2.0 * M_PI * M_PI)));
}

TEST_CASE("lambda window equals the alpha=1 semiclassical window away from edges") {
  for (double lambda : {5000.0, 12345.6, 80000.0}) {
    SpectralWindow a = window_from_lambda(2, lambda);
    SpectralWindow b = shells_in_window(2, 1.0 / std::sqrt(lambda), 1.0);
    CHECK(a.n_states == b.n_states);
    CHECK(a.n_min == b.n_min);
    CHECK(a.n_max == b.n_max);
  }
}
