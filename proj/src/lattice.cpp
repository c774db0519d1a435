#include "tqe/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tqe/error.hpp"

namespace tqe {

namespace {

constexpr double kFourPiSq = 39.478417604357434475337963999505;

std::int64_t isqrt64(std::int64_t n) {
  if (n < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void descend(int dim, int depth, std::int64_t residual, std::vector<std::int32_t>& prefix,
             std::vector<std::int32_t>& out) {
  if (depth == dim - 1) {
    std::int64_t s = isqrt64(residual);
    if (s * s != residual) return;
    if (s == 0) {
      out.insert(out.end(), prefix.begin(), prefix.end());
      out.push_back(0);
      return;
    }
    out.insert(out.end(), prefix.begin(), prefix.end());
    out.push_back(static_cast<std::int32_t>(-s));
    out.insert(out.end(), prefix.begin(), prefix.end());
    out.push_back(static_cast<std::int32_t>(s));
    return;
  }
  std::int64_t m = isqrt64(residual);
  for (std::int64_t c = -m; c <= m; ++c) {
    prefix.push_back(static_cast<std::int32_t>(c));
    descend(dim, depth + 1, residual - c * c, prefix, out);
    prefix.pop_back();
  }
}

struct EigenInterval {
  double lo;
  double hi;
  bool contains(std::int64_t n) const {
    double e = kFourPiSq * static_cast<double>(n);
    return e >= lo && e <= hi;
  }
};

EigenInterval interval_semiclassical(double hbar, double alpha) {
  // edges of the -Laplacian eigenvalue window, rescaled from
  // [1 - alpha*hbar, 1 + alpha*hbar] on -hbar^2*Laplacian
  double inv_h2 = 1.0 / (hbar * hbar);
  return {(1.0 - alpha * hbar) * inv_h2, (1.0 + alpha * hbar) * inv_h2};
}

EigenInterval interval_eigenvalue(double lambda) {
  double s = std::sqrt(lambda);
  return {lambda - s, lambda + s};
}

SpectralWindow build_window(int dim, double hbar, double alpha, WindowForm form,
                            const EigenInterval& iv, std::int64_t budget) {
  SpectralWindow w;
  w.dim = dim;
  w.hbar = hbar;
  w.alpha = alpha;
  w.form = form;

  // outward-rounded candidate range, then the exact predicate at each integer
  auto lo_guess = static_cast<std::int64_t>(std::floor(iv.lo / kFourPiSq)) - 1;
  auto hi_guess = static_cast<std::int64_t>(std::ceil(iv.hi / kFourPiSq)) + 1;
  lo_guess = std::max<std::int64_t>(lo_guess, 0);

  w.n_min = 0;
  w.n_max = -1;
  bool any = false;
  for (std::int64_t n = lo_guess; n <= hi_guess; ++n) {
    if (!iv.contains(n)) continue;
    if (!any) {
      w.n_min = n;
      any = true;
    }
    w.n_max = n;
    Shell s = enumerate_shell(dim, n, budget);
    if (s.size() > 0) {
      w.n_states += static_cast<std::int64_t>(s.size());
      w.shells.push_back(std::move(s));
    }
  }
  if (!any) {
    w.n_min = 1;
    w.n_max = 0;
  }
  return w;
}

}  // namespace

std::int64_t norm_sq(const LatticeVector& k) {
  std::int64_t s = 0;
  for (std::int32_t c : k) s += static_cast<std::int64_t>(c) * c;
  return s;
}

std::size_t Shell::find(const std::int32_t* v) const {
  const std::size_t d = static_cast<std::size_t>(dim);
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    const std::int32_t* m = at(mid);
    int cmp = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (m[i] != v[i]) {
        cmp = m[i] < v[i] ? -1 : 1;
        break;
      }
    }
    if (cmp == 0) return mid;
    if (cmp < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return npos;
}

Shell enumerate_shell(int dim, std::int64_t n, std::int64_t budget) {
  if (dim < 2) throw ValidationError("enumerate_shell: dimension must be >= 2");
  if (n < 0) throw ValidationError("enumerate_shell: n must be >= 0");

  // cost proxy: candidate prefixes (2*floor(sqrt(n)) + 1)^(dim-1)
  double cost = 1.0;
  double side = 2.0 * static_cast<double>(isqrt64(n)) + 1.0;
  for (int i = 0; i < dim - 1; ++i) cost *= side;
  if (cost > static_cast<double>(budget))
    throw BudgetError("enumerate_shell: bounding box of " + std::to_string(static_cast<double>(cost)) +
                      " prefixes exceeds budget " + std::to_string(budget));

  Shell s;
  s.dim = dim;
  s.n = n;
  std::vector<std::int32_t> prefix;
  prefix.reserve(static_cast<std::size_t>(dim));
  descend(dim, 0, n, prefix, s.coords);
  return s;
}

bool SpectralWindow::contains(std::int64_t n) const {
  EigenInterval iv = form == WindowForm::Semiclassical ? interval_semiclassical(hbar, alpha)
                                                       : interval_eigenvalue(lambda());
  return iv.contains(n);
}

SpectralWindow shells_in_window(int dim, double hbar, double alpha, std::int64_t budget) {
  if (dim < 2) throw ValidationError("shells_in_window: dimension must be >= 2");
  if (!(hbar > 0.0) || hbar > 1.0) throw ValidationError("shells_in_window: hbar must be in (0,1]");
  if (!(alpha > 0.0)) throw ValidationError("shells_in_window: alpha must be positive");
  if (!(1.0 - alpha * hbar > 0.0))
    throw ValidationError("shells_in_window: window lower edge 1 - alpha*hbar must be positive");
  return build_window(dim, hbar, alpha, WindowForm::Semiclassical,
                      interval_semiclassical(hbar, alpha), budget);
}

SpectralWindow window_from_lambda(int dim, double lambda, std::int64_t budget) {
  if (dim < 2) throw ValidationError("window_from_lambda: dimension must be >= 2");
  if (!(lambda >= 4.0)) throw ValidationError("window_from_lambda: lambda must be >= 4");
  double hbar = 1.0 / std::sqrt(lambda);
  return build_window(dim, hbar, 1.0, WindowForm::Eigenvalue, interval_eigenvalue(lambda), budget);
}

double unit_ball_volume(int dim) {
  return std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double weyl_constant(int dim) {
  return dim * unit_ball_volume(dim) * std::pow(2.0 * M_PI, -dim);
}

namespace {

// count integers c with iv.contains(partial + c^2), by symmetry in c;
// the admissible c >= 0 form a contiguous range [a, b]
std::int64_t count_last_coord(const EigenInterval& iv, std::int64_t partial) {
  double hi_n = iv.hi / kFourPiSq - static_cast<double>(partial);
  if (hi_n < -1.0) return 0;

  // b: largest c >= 0 with 4*pi^2*(partial + c^2) <= hi
  std::int64_t b = (hi_n > 0.0 ? isqrt64(static_cast<std::int64_t>(std::floor(hi_n))) : 0) + 2;
  while (b > 0 && kFourPiSq * static_cast<double>(partial + b * b) > iv.hi) --b;

  // a: smallest c >= 0 with 4*pi^2*(partial + c^2) >= lo
  double lo_n = iv.lo / kFourPiSq - static_cast<double>(partial);
  std::int64_t a = 0;
  if (lo_n > 0.0) {
    a = isqrt64(static_cast<std::int64_t>(std::ceil(lo_n)));
    while (a > 0 && kFourPiSq * static_cast<double>(partial + (a - 1) * (a - 1)) >= iv.lo) --a;
    while (kFourPiSq * static_cast<double>(partial + a * a) < iv.lo) ++a;
  }

  if (b < a) return 0;
  if (!iv.contains(partial + a * a) || !iv.contains(partial + b * b)) return 0;
  return a == 0 ? 2 * b + 1 : 2 * (b - a + 1);
}

void count_descend(int dim, int depth, const EigenInterval& iv, std::int64_t partial,
                   std::int64_t max_coord, std::int64_t& total) {
  if (depth == dim - 1) {
    total += count_last_coord(iv, partial);
    return;
  }
  for (std::int64_t c = -max_coord; c <= max_coord; ++c) {
    std::int64_t p = partial + c * c;
    if (kFourPiSq * static_cast<double>(p) > iv.hi) continue;
    count_descend(dim, depth + 1, iv, p, max_coord, total);
  }
}

}  // namespace

WeylCount weyl_count(int dim, double lambda) {
  if (dim < 2) throw ValidationError("weyl_count: dimension must be >= 2");
  if (!(lambda >= 4.0)) throw ValidationError("weyl_count: lambda must be >= 4");

  EigenInterval iv = interval_eigenvalue(lambda);
  std::int64_t max_coord = isqrt64(static_cast<std::int64_t>(std::ceil(iv.hi / kFourPiSq)) + 1) + 1;
  std::int64_t total = 0;
  count_descend(dim, 0, iv, 0, max_coord, total);

  WeylCount r;
  r.count = total;
  r.predicted = weyl_constant(dim) * std::pow(lambda, 0.5 * (dim - 1));
  r.ratio = static_cast<double>(r.count) / r.predicted;
  return r;
}

}  // namespace tqe
