#include "testfn.hpp"

#include <cmath>

namespace hvf {

namespace {

constexpr double kGate = 1.0 - 1e-12;

double support_q(std::span<const double> x, const std::vector<double>& center,
                 const std::vector<double>& radii) {
  double q = 0.0;
  for (std::size_t i = 0; i < center.size(); ++i) {
    double t = (x[i] - center[i]) / radii[i];
    q += t * t;
  }
  return q;
}

Expr q_expression(const std::vector<Rational>& center, const std::vector<Rational>& radii) {
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < center.size(); ++i) {
    Expr d = sub(variable(static_cast<int>(i)), constant(center[i]));
    // ((x-c)/r)^2 with the square kept symbolic: r^2 for the most
    // concentrated members would overflow an int64 rational.
    terms.push_back(pow_int(div(d, constant(radii[i])), 2));
  }
  return add(std::move(terms));
}

TestFunction make_bump(const std::vector<Rational>& center, const std::vector<Rational>& radii,
                       const Rational& eps) {
  TestFunction tf;
  Expr q = q_expression(center, radii);
  tf.expression = fn(FnKind::Exp, neg(div(constant(eps), sub(constant(1), q))));
  for (const auto& c : center) tf.center.push_back(c.to_double());
  for (const auto& r : radii) tf.radii.push_back(r.to_double());
  return tf;
}

}  // namespace

bool TestFunction::inside(std::span<const double> x) const {
  return support_q(x, center, radii) < kGate;
}

std::vector<double> TestFunction::support_lo() const {
  std::vector<double> lo(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) lo[i] = center[i] - radii[i];
  return lo;
}

std::vector<double> TestFunction::support_hi() const {
  std::vector<double> hi(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) hi[i] = center[i] + radii[i];
  return hi;
}

GatedEval::GatedEval(const TestFunction& tf, const Expr& expr)
    : compiled_(expr), center_(tf.center), radii_(tf.radii), amplitude_(tf.amplitude) {}

double GatedEval::operator()(std::span<const double> x) const {
  if (support_q(x, center_, radii_) >= kGate) return 0.0;
  return amplitude_ * compiled_.eval(x);
}

Expr horizontal_derivative(const VectorFieldSystem& sys, const Expr& u, std::span<const int> J,
                           std::size_t node_budget) {
  Expr cur = u;
  for (std::size_t pos = J.size(); pos-- > 0;) {
    int j = J[pos];
    if (j < 0 || j >= sys.m) throw std::invalid_argument("field index out of range");
    std::vector<Expr> terms;
    for (int k = 0; k < sys.n; ++k) terms.push_back(mul(sys.fields[j][k], differentiate(cur, k)));
    cur = add(std::move(terms));
    if (node_count(cur) > node_budget)
      throw BudgetError("horizontal derivative expression exceeds the node budget");
  }
  return cur;
}

TestFunction bump(const std::vector<Rational>& center, const std::vector<Rational>& radii) {
  TestFunction tf = make_bump(center, radii, Rational(1));
  tf.label = "bump";
  return tf;
}

TestFunction plateau_bump(const std::vector<Rational>& center, const std::vector<Rational>& radii,
                          const Rational& eps) {
  TestFunction tf = make_bump(center, radii, eps);
  tf.label = "plateau";
  tf.params["eps"] = eps.to_double();
  return tf;
}

std::vector<TestFunction> radial_family(const std::vector<Rational>& center,
                                        const std::vector<Rational>& base_radii, int count) {
  std::vector<TestFunction> fam;
  Rational s(1);
  for (int k = 0; k < count; ++k) {
    std::vector<Rational> radii;
    for (const auto& r : base_radii) radii.push_back(r * s);
    TestFunction tf = bump(center, radii);
    tf.label = "radial";
    tf.params["scale"] = s.to_double();
    fam.push_back(std::move(tf));
    s = s / Rational(2);
  }
  return fam;
}

std::vector<TestFunction> aniso_family(const std::vector<Rational>& center,
                                       const std::vector<Rational>& base_radii,
                                       const std::vector<int>& weights, int kappa, int count) {
  std::vector<TestFunction> fam;
  Rational s(1);
  for (int k = 0; k < count; ++k) {
    std::vector<Rational> radii;
    for (std::size_t i = 0; i < base_radii.size(); ++i)
      radii.push_back(base_radii[i] * s.pow(weights[i] * kappa));
    TestFunction tf = bump(center, radii);
    tf.label = "aniso";
    tf.params["scale"] = s.to_double();
    tf.params["kappa"] = kappa;
    fam.push_back(std::move(tf));
    s = s / Rational(2);
  }
  return fam;
}

std::vector<TestFunction> plateau_family(const std::vector<Rational>& center,
                                         const std::vector<Rational>& base_radii, int count) {
  std::vector<TestFunction> fam;
  Rational eps(1);
  for (int k = 0; k < count; ++k) {
    fam.push_back(plateau_bump(center, base_radii, eps));
    eps = eps / Rational(3);
  }
  return fam;
}

std::vector<int> axis_weights(const CommutatorBasis& basis, std::span<const double> x,
                              double tol) {
  const int n = basis.n();
  std::vector<int> w(n, basis.s0());
  std::vector<double> cols;
  std::vector<double> v(n);
  std::vector<bool> assigned(n, false);
  int last_deg = 0;
  auto assign_for_depth = [&](int depth) {
    // e_i is in the span iff its residual after projecting on an orthonormal
    // basis of the accumulated columns is negligible.
    std::vector<std::vector<double>> ortho;
    int ncols = static_cast<int>(cols.size()) / n;
    for (int c = 0; c < ncols; ++c) {
      std::vector<double> col(cols.begin() + static_cast<std::size_t>(c) * n,
                              cols.begin() + static_cast<std::size_t>(c + 1) * n);
      double norm0 = 0.0;
      for (double t : col) norm0 += t * t;
      norm0 = std::sqrt(norm0);
      if (norm0 < 1e-12) continue;
      for (const auto& qv : ortho) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += col[i] * qv[i];
        for (int i = 0; i < n; ++i) col[i] -= dot * qv[i];
      }
      double res = 0.0;
      for (double t : col) res += t * t;
      res = std::sqrt(res);
      if (res > 1e-9 * norm0) {
        for (double& t : col) t /= res;
        ortho.push_back(std::move(col));
      }
    }
    for (int i = 0; i < n; ++i) {
      if (assigned[i]) continue;
      double res = 1.0;
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      for (const auto& qv : ortho) {
        double dot = qv[i];
        for (int k = 0; k < n; ++k) e[k] -= dot * qv[k];
      }
      res = 0.0;
      for (double t : e) res += t * t;
      if (std::sqrt(res) < tol) {
        w[i] = depth;
        assigned[i] = true;
      }
    }
  };
  for (int idx = 0; idx < basis.size(); ++idx) {
    const auto& e = basis.entry(idx);
    if (e.degree != last_deg && last_deg > 0) assign_for_depth(last_deg);
    last_deg = e.degree;
    basis.eval_entry(idx, x, v.data());
    cols.insert(cols.end(), v.begin(), v.end());
  }
  if (last_deg > 0) assign_for_depth(last_deg);
  return w;
}

}  // namespace hvf
