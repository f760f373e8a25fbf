#pragma once

#include <random>
#include <vector>

#include "expr.hpp"
#include "system.hpp"

namespace hvf::testing {

inline std::vector<double> random_point(std::mt19937& rng, int n, double lo = -1.0,
                                        double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> p(n);
  for (double& v : p) v = u(rng);
  return p;
}

// Central finite difference, the independent oracle for symbolic derivatives.
inline double fd_partial(const Expr& e, std::vector<double> x, int axis, double h = 1e-5) {
  x[axis] += h;
  double up = evaluate(e, x);
  x[axis] -= 2 * h;
  double dn = evaluate(e, x);
  return (up - dn) / (2 * h);
}

inline double rel_err(double got, double want) {
  double scale = std::max({1.0, std::abs(got), std::abs(want)});
  return std::abs(got - want) / scale;
}

// Evaluates a vector field at a point.
inline std::vector<double> eval_field(const VectorField& f, const std::vector<double>& x) {
  std::vector<double> out;
  out.reserve(f.size());
  for (const auto& c : f) out.push_back(evaluate(c, x));
  return out;
}

}  // namespace hvf::testing
