#include "quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace hvf {

double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi, int points) {
  const int n = static_cast<int>(lo.size());
  if (points < 2) throw std::invalid_argument("quadrature needs at least 2 points per axis");
  double cell = 1.0;
  std::vector<double> step(n);
  for (int i = 0; i < n; ++i) {
    step[i] = (hi[i] - lo[i]) / points;
    cell *= step[i];
  }
  if (cell <= 0.0) return 0.0;
  std::vector<int> idx(n, 0);
  std::vector<double> x(n);
  double acc = 0.0;
  while (true) {
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (idx[i] + 0.5) * step[i];
    acc += f(x);
    int c = n - 1;
    while (c >= 0 && ++idx[c] == points) idx[c--] = 0;
    if (c < 0) break;
  }
  return acc * cell;
}

QuadValue integrate_checked(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> lo, std::span<const double> hi,
                            const QuadPlan& plan) {
  QuadValue out;
  out.value = integrate_box(f, lo, hi, plan.points);
  out.refined = integrate_box(f, lo, hi, plan.points * plan.refine_factor);
  double scale = std::max(std::fabs(out.refined), 1e-300);
  out.drift = std::fabs(out.refined - out.value) / scale;
  out.flagged = out.drift > plan.flag_drift;
  return out;
}

}  // namespace hvf
