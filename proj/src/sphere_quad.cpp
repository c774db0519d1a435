#include "tqe/sphere_quad.hpp"

#include <cmath>
#include <vector>

#include "tqe/quadrature.hpp"

namespace tqe {

std::size_t sphere_panel_count(double c) {
  double p = std::ceil(std::abs(c) * 0.5);
  if (p < 2.0) p = 2.0;
  return static_cast<std::size_t>(p);
}

double sphere_phi_integral(double c, int sin_pow, kernels::Integrand kind, std::size_t panels,
                           int order) {
  const GaussRule& rule = gauss_legendre(order);
  const kernels::Ops& ops = kernels::active_ops();

  const double h = M_PI / static_cast<double>(panels);
  const std::size_t chunk_panels = 1024;
  std::vector<double> phi(chunk_panels * static_cast<std::size_t>(order));
  std::vector<double> w(chunk_panels * static_cast<std::size_t>(order));

  CompensatedSum total;
  for (std::size_t p0 = 0; p0 < panels; p0 += chunk_panels) {
    std::size_t pc = std::min(chunk_panels, panels - p0);
    std::size_t nn = 0;
    for (std::size_t p = 0; p < pc; ++p) {
      double mid = (static_cast<double>(p0 + p) + 0.5) * h;
      double half = 0.5 * h;
      for (int i = 0; i < order; ++i) {
        phi[nn] = mid + half * rule.node[static_cast<std::size_t>(i)];
        w[nn] = half * rule.weight[static_cast<std::size_t>(i)];
        ++nn;
      }
    }
    total.add(ops.oscillatory_weighted_sum(phi.data(), w.data(), nn, c, sin_pow, kind));
  }
  return total.value();
}

}  // namespace tqe
