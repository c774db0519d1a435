#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace tqe {

/// Gauss-Legendre rule on [-1,1].
struct GaussRule {
  std::vector<double> node;
  std::vector<double> weight;
};

/// Nodes/weights for the given order, computed once (Newton on P_n) and cached.
const GaussRule& gauss_legendre(int order);

/// Composite Gauss-Legendre integration of f over [a,b].
template <class F>
double integrate_composite(F&& f, double a, double b, std::size_t panels, int order) {
  const GaussRule& rule = gauss_legendre(order);
  double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0, comp = 0.0;  // Neumaier
  for (std::size_t p = 0; p < panels; ++p) {
    double mid = a + (static_cast<double>(p) + 0.5) * h;
    double half = 0.5 * h;
    double local = 0.0;
    for (int i = 0; i < order; ++i) {
      local += rule.weight[static_cast<std::size_t>(i)] * f(mid + half * rule.node[static_cast<std::size_t>(i)]);
    }
    local *= half;
    double t = sum + local;
    if (std::abs(sum) >= std::abs(local))
      comp += (sum - t) + local;
    else
      comp += (local - t) + sum;
    sum = t;
  }
  return sum + comp;
}

/// Kahan-Neumaier accumulator for order-stable long reductions.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace tqe
