#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hvf {

struct QuadPlan {
  int points = 129;      // midpoint nodes per axis
  int refine_factor = 2; // second pass resolution multiplier
  double flag_drift = 0.005;
};

// Tensor midpoint rule over a box. The integrands here are smooth and
// compactly supported inside the box, where midpoint converges fast.
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi, int points);

struct QuadValue {
  double value = 0.0;
  double refined = 0.0;
  double drift = 0.0;  // |refined - value| / max(|refined|, tiny)
  bool flagged = false;
};

QuadValue integrate_checked(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> lo, std::span<const double> hi,
                            const QuadPlan& plan);

}  // namespace hvf
