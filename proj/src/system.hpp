#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expr.hpp"

namespace hvf {

// A vector field on R^n as its n coefficient expressions.
using VectorField = std::vector<Expr>;

struct VectorFieldSystem {
  int n = 0;  // ambient dimension
  int m = 0;  // number of fields
  std::vector<VectorField> fields;  // m entries, each of length n
  std::optional<int> s0_hint;       // declared Hörmander step
  std::vector<std::string> names;   // as written in the source

  const Expr& coefficient(int field, int axis) const { return fields[field][axis]; }
};

std::string to_string(const VectorFieldSystem& sys);

// Per-system compiled coefficient table for hot evaluation paths.
class CompiledSystem {
 public:
  CompiledSystem() = default;
  explicit CompiledSystem(const VectorFieldSystem& sys);

  int n() const { return n_; }
  int m() const { return m_; }
  // out is m*n row-major: out[j*n + k] = b_{jk}(x).
  void eval_fields(std::span<const double> x, double* out) const;
  // velocity = sum_j a_j X_j(x); a has length m, velocity length n.
  void velocity(std::span<const double> x, std::span<const double> a, double* out) const;

 private:
  int n_ = 0, m_ = 0;
  std::vector<CompiledExpr> coeffs_;  // m*n row-major
  mutable std::vector<double> scratch_;
};

struct DomainSpec {
  std::vector<double> lo, hi;     // closed box [lo_i, hi_i]
  Expr indicator;                 // optional: Omega = {x in box : g(x) < 0}
  std::string label;

  int dim() const { return static_cast<int>(lo.size()); }
  bool in_box(std::span<const double> x) const;
  // Membership in the closure of Omega (g <= 0 when an indicator is present).
  bool in_closure(std::span<const double> x) const;
  double box_volume() const;
};

}  // namespace hvf
