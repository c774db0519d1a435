#include "tqe/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace tqe {

namespace {

GaussRule compute_rule(int order) {
  if (order < 1 || order > 64) throw std::invalid_argument("gauss_legendre: order out of range");
  GaussRule rule;
  rule.node.resize(static_cast<std::size_t>(order));
  rule.weight.resize(static_cast<std::size_t>(order));
  const int n = order;
  // Newton iteration on P_n with the Tricomi initial guess; symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        // one last refinement pass to settle dp at the converged node
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = pk;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.node[static_cast<std::size_t>(i)] = -x;
    rule.weight[static_cast<std::size_t>(i)] = w;
    rule.node[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weight[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.node[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

}  // namespace tqe
