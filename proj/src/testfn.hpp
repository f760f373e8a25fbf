#pragma once

#include <map>
#include <string>
#include <vector>

#include "lie.hpp"
#include "system.hpp"

namespace hvf {

// Smooth compactly supported test function: a closed-form expression on an
// ellipsoidal support q(x) = sum ((x_i-c_i)/r_i)^2 < 1, extended by zero.
// All bumps vanish with every derivative at the support shell, so the same
// gate is valid for the symbolic derivatives too.
struct TestFunction {
  Expr expression;
  std::vector<double> center;
  std::vector<double> radii;
  double amplitude = 1.0;
  std::map<std::string, double> params;  // family bookkeeping for reports
  std::string label;

  int dim() const { return static_cast<int>(center.size()); }
  bool inside(std::span<const double> x) const;
  std::vector<double> support_lo() const;
  std::vector<double> support_hi() const;
};

// Support-gated compiled evaluator for a test function or one of its
// symbolic derivatives.
class GatedEval {
 public:
  GatedEval(const TestFunction& tf, const Expr& expr);
  double operator()(std::span<const double> x) const;

 private:
  CompiledExpr compiled_;
  std::vector<double> center_, radii_;
  double amplitude_;
};

// X_{j1} X_{j2} ... X_{jl} u, applied as first-order operators in sequence.
// J holds 0-based field indices; empty J returns u. node_budget guards
// against expression blow-up at higher orders.
Expr horizontal_derivative(const VectorFieldSystem& sys, const Expr& u, std::span<const int> J,
                           std::size_t node_budget = 200'000);

// Radial bump exp(-1/(1 - q)) with q built from exact rational geometry.
TestFunction bump(const std::vector<Rational>& center, const std::vector<Rational>& radii);
// Plateau variant exp(-eps/(1 - q)): interior value ~ e^-eps, steep shell.
TestFunction plateau_bump(const std::vector<Rational>& center, const std::vector<Rational>& radii,
                          const Rational& eps);

// Families ordered from tame to adversarial (scale decreasing).
// Anisotropic members scale axis i by s^(weights[i]*kappa).
std::vector<TestFunction> radial_family(const std::vector<Rational>& center,
                                        const std::vector<Rational>& base_radii, int count);
std::vector<TestFunction> aniso_family(const std::vector<Rational>& center,
                                       const std::vector<Rational>& base_radii,
                                       const std::vector<int>& weights, int kappa, int count);
std::vector<TestFunction> plateau_family(const std::vector<Rational>& center,
                                         const std::vector<Rational>& base_radii, int count);

// Axis dilation weights at a point: the commutator depth at which each
// coordinate direction enters the spanned filtration (fallback: s0).
std::vector<int> axis_weights(const CommutatorBasis& basis, std::span<const double> x,
                              double tol = 1e-7);

}  // namespace hvf
