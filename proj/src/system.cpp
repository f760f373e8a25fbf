#include "system.hpp"

namespace hvf {

std::string to_string(const VectorFieldSystem& sys) {
  std::string out = "dim " + std::to_string(sys.n);
  for (int j = 0; j < sys.m; ++j) {
    out += "; ";
    out += (j < static_cast<int>(sys.names.size()) && !sys.names[j].empty())
               ? sys.names[j]
               : "X" + std::to_string(j + 1);
    out += " = ";
    bool first = true;
    for (int k = 0; k < sys.n; ++k) {
      const Expr& c = sys.fields[j][k];
      if (c->kind == ExprKind::Constant && c->value.is_zero()) continue;
      if (!first) out += " + ";
      first = false;
      if (c->kind == ExprKind::Constant && c->value.is_one()) {
        out += "D" + std::to_string(k + 1);
      } else {
        out += "(" + to_string(c) + ")*D" + std::to_string(k + 1);
      }
    }
    if (first) out += "0*D1";
  }
  if (sys.s0_hint) out += "; step " + std::to_string(*sys.s0_hint);
  return out;
}

CompiledSystem::CompiledSystem(const VectorFieldSystem& sys) : n_(sys.n), m_(sys.m) {
  coeffs_.reserve(static_cast<std::size_t>(m_) * n_);
  for (int j = 0; j < m_; ++j)
    for (int k = 0; k < n_; ++k) coeffs_.emplace_back(sys.fields[j][k]);
  scratch_.resize(static_cast<std::size_t>(m_) * n_);
}

void CompiledSystem::eval_fields(std::span<const double> x, double* out) const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i].eval(x);
}

void CompiledSystem::velocity(std::span<const double> x, std::span<const double> a,
                              double* out) const {
  double* b = scratch_.data();
  eval_fields(x, b);
  for (int k = 0; k < n_; ++k) out[k] = 0.0;
  for (int j = 0; j < m_; ++j)
    for (int k = 0; k < n_; ++k) out[k] += a[j] * b[j * n_ + k];
}

bool DomainSpec::in_box(std::span<const double> x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

bool DomainSpec::in_closure(std::span<const double> x) const {
  if (!in_box(x)) return false;
  if (!indicator) return true;
  return evaluate(indicator, x) <= 0.0;
}

double DomainSpec::box_volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

}  // namespace hvf
