#include "lie.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

namespace hvf {

VectorField lie_bracket(const VectorField& a, const VectorField& b) {
  if (a.size() != b.size()) throw std::invalid_argument("bracket of fields of different dimension");
  const int n = static_cast<int>(a.size());
  VectorField out(a.size(), constant(0));
  for (int k = 0; k < n; ++k) {
    std::vector<Expr> terms;
    terms.reserve(2 * n);
    for (int i = 0; i < n; ++i) {
      terms.push_back(mul(a[i], differentiate(b[k], i)));
      terms.push_back(neg(mul(b[i], differentiate(a[k], i))));
    }
    out[k] = add(std::move(terms));
  }
  return out;
}

CommutatorBasis::CommutatorBasis(const VectorFieldSystem& sys, int max_len,
                                 std::size_t node_budget)
    : n_(sys.n), m_(sys.m), s0_(max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be at least 1");
  std::size_t nodes = 0;
  auto push = [&](BasisEntry e) {
    for (const auto& c : e.field) nodes += node_count(c);
    if (nodes > node_budget)
      throw BudgetError("commutator enumeration exceeds the expression budget; lower max_len");
    entries_.push_back(std::move(e));
  };
  int group_begin = 0;
  for (int j = 0; j < m_; ++j) push({sys.fields[j], 1, {j + 1}});
  for (int len = 2; len <= max_len; ++len) {
    int group_end = static_cast<int>(entries_.size());
    for (int j = 0; j < m_; ++j) {
      for (int i = group_begin; i < group_end; ++i) {
        BasisEntry e;
        e.degree = len;
        e.multi_index.reserve(len);
        e.multi_index.push_back(j + 1);
        e.multi_index.insert(e.multi_index.end(), entries_[i].multi_index.begin(),
                             entries_[i].multi_index.end());
        e.field = lie_bracket(sys.fields[j], entries_[i].field);
        push(std::move(e));
      }
    }
    group_begin = group_end;
  }
  // Lexicographic order within each degree group: regroup the (j, prev) loop.
  std::stable_sort(entries_.begin(), entries_.end(), [](const BasisEntry& a, const BasisEntry& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.multi_index < b.multi_index;
  });
  compiled_.reserve(entries_.size() * n_);
  for (const auto& e : entries_)
    for (int k = 0; k < n_; ++k) compiled_.emplace_back(e.field[k]);
}

void CommutatorBasis::eval_entry(int i, std::span<const double> x, double* out) const {
  for (int k = 0; k < n_; ++k) out[k] = compiled_[static_cast<std::size_t>(i) * n_ + k].eval(x);
}

void CommutatorBasis::eval_all(std::span<const double> x, double* out) const {
  for (std::size_t i = 0; i < compiled_.size(); ++i) out[i] = compiled_[i].eval(x);
}

namespace linalg {

double det_inplace(std::vector<double>& a, int n) {
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::fabs(a[c * n + c]);
    for (int r = c + 1; r < n; ++r) {
      double v = std::fabs(a[c * n + r]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != c) {
      for (int k = c; k < n; ++k) std::swap(a[k * n + c], a[k * n + piv]);
      det = -det;
    }
    det *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      double f = a[c * n + r] / a[c * n + c];
      for (int k = c + 1; k < n; ++k) a[k * n + r] -= f * a[k * n + c];
    }
  }
  return det;
}

int rank(const std::vector<double>& cols, int n, int ncols, double tol) {
  std::vector<std::vector<double>> ortho;
  int r = 0;
  for (int c = 0; c < ncols; ++c) {
    std::vector<double> v(cols.begin() + static_cast<std::size_t>(c) * n,
                          cols.begin() + static_cast<std::size_t>(c + 1) * n);
    double norm0 = 0.0;
    for (double t : v) norm0 += t * t;
    norm0 = std::sqrt(norm0);
    if (norm0 == 0.0) continue;
    for (const auto& q : ortho) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += v[i] * q[i];
      for (int i = 0; i < n; ++i) v[i] -= dot * q[i];
    }
    double res = 0.0;
    for (double t : v) res += t * t;
    res = std::sqrt(res);
    if (res > tol * norm0) {
      for (double& t : v) t /= res;
      ortho.push_back(std::move(v));
      ++r;
      if (r == n) break;
    }
  }
  return r;
}

}  // namespace linalg

double lambda_det(const CommutatorBasis& basis, std::span<const int> I,
                  std::span<const double> x) {
  const int n = basis.n();
  if (static_cast<int>(I.size()) != n)
    throw std::invalid_argument("lambda_det needs exactly n entry indices");
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int c = 0; c < n; ++c) {
    if (I[c] < 0 || I[c] >= basis.size()) throw std::invalid_argument("entry index out of range");
    basis.eval_entry(I[c], x, a.data() + static_cast<std::size_t>(c) * n);
  }
  return linalg::det_inplace(a, n);
}

TupleScan scan_tuples(const CommutatorBasis& basis, std::span<const double> x, double tol,
                      std::size_t tuple_budget) {
  const int n = basis.n();
  const int l = basis.size();
  double tuples = std::pow(static_cast<double>(l), n);
  if (tuples > static_cast<double>(tuple_budget))
    throw BudgetError("tuple enumeration exceeds the configured budget");

  std::vector<double> vals(static_cast<std::size_t>(l) * n);
  basis.eval_all(x, vals.data());
  std::vector<double> norms(l);
  for (int i = 0; i < l; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      double v = vals[static_cast<std::size_t>(i) * n + k];
      s += v * v;
    }
    norms[i] = std::sqrt(s);
  }

  TupleScan out;
  std::vector<int> idx(n, 0);
  std::vector<double> mat(static_cast<std::size_t>(n) * n);
  while (true) {
    int deg = 0;
    double scale = 1.0;
    for (int c = 0; c < n; ++c) {
      deg += basis.entry(idx[c]).degree;
      scale *= norms[idx[c]];
    }
    for (int c = 0; c < n; ++c)
      std::memcpy(mat.data() + static_cast<std::size_t>(c) * n,
                  vals.data() + static_cast<std::size_t>(idx[c]) * n, sizeof(double) * n);
    double det = linalg::det_inplace(mat, n);
    double mag = std::fabs(det);
    if (mag > 0.0) out.lambda_by_degree[deg] += mag;
    if (mag > tol * scale) {
      if (!out.nu || deg < *out.nu) {
        out.nu = deg;
        out.nu_witness = idx;
      }
      if (!out.max_degree || deg > *out.max_degree) {
        out.max_degree = deg;
        out.max_degree_witness = idx;
      }
    }
    int c = n - 1;
    while (c >= 0 && ++idx[c] == l) idx[c--] = 0;
    if (c < 0) break;
  }
  return out;
}

double nsw_polynomial(const CommutatorBasis& basis, std::span<const double> x, double r,
                      double tol, std::size_t tuple_budget) {
  if (r <= 0.0) throw std::invalid_argument("radius must be positive");
  TupleScan scan = scan_tuples(basis, x, tol, tuple_budget);
  double sum = 0.0;
  for (const auto& [deg, coeff] : scan.lambda_by_degree) sum += coeff * std::pow(r, deg);
  return sum;
}

int pointwise_nu(const CommutatorBasis& basis, std::span<const double> x, double tol) {
  TupleScan scan = scan_tuples(basis, x, tol);
  if (!scan.nu)
    throw NoSpanError("no spanning tuple at the tolerance: Hörmander condition fails numerically");
  return *scan.nu;
}

int spanning_depth(const CommutatorBasis& basis, std::span<const double> x, double tol) {
  const int n = basis.n();
  std::vector<double> cols;
  int last_deg = 0;
  std::vector<double> v(n);
  for (int i = 0; i < basis.size(); ++i) {
    const auto& e = basis.entry(i);
    if (e.degree != last_deg && !cols.empty()) {
      if (linalg::rank(cols, n, static_cast<int>(cols.size()) / n, tol) == n) return last_deg;
    }
    last_deg = e.degree;
    basis.eval_entry(i, x, v.data());
    cols.insert(cols.end(), v.begin(), v.end());
  }
  if (!cols.empty() && linalg::rank(cols, n, static_cast<int>(cols.size()) / n, tol) == n)
    return last_deg;
  return 0;
}

std::vector<std::vector<double>> sampling_points(const DomainSpec& domain,
                                                 const SamplingPlan& plan) {
  const int n = domain.dim();
  const int g = std::max(2, plan.grid);
  std::vector<std::vector<double>> pts;
  std::set<std::vector<double>> seen;
  auto emit = [&](const std::vector<double>& p) {
    if (!domain.in_closure(p)) return;
    if (seen.insert(p).second) pts.push_back(p);
  };

  std::vector<int> idx(n, 0);
  std::vector<double> p(n);
  while (true) {
    for (int i = 0; i < n; ++i)
      p[i] = domain.lo[i] + (domain.hi[i] - domain.lo[i]) * idx[i] / (g - 1);
    emit(p);
    int c = n - 1;
    while (c >= 0 && ++idx[c] == g) idx[c--] = 0;
    if (c < 0) break;
  }

  if (plan.coordinate_hyperplanes) {
    for (int axis = 0; axis < n; ++axis) {
      if (domain.lo[axis] > 0.0 || domain.hi[axis] < 0.0) continue;
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        for (int i = 0; i < n; ++i)
          p[i] = i == axis ? 0.0
                           : domain.lo[i] + (domain.hi[i] - domain.lo[i]) * idx[i] / (g - 1);
        emit(p);
        int c = n - 1;
        while (c >= 0) {
          if (c == axis) {
            --c;
            continue;
          }
          if (++idx[c] < g) break;
          idx[c--] = 0;
        }
        if (c < 0) break;
      }
    }
  }

  for (const auto& s : plan.suspect_points) emit(s);
  return pts;
}

IndexReport metivier_index(const CommutatorBasis& basis, const DomainSpec& domain,
                           const SamplingPlan& plan) {
  IndexReport rep;
  auto pts = sampling_points(domain, plan);
  if (pts.empty()) throw DomainError("sampling plan produced no points inside the domain");
  int min_nu = 0;
  for (const auto& x : pts) {
    TupleScan scan = scan_tuples(basis, x, plan.tol);
    if (!scan.nu)
      throw NoSpanError("no spanning tuple at sample point while computing the Métivier index");
    rep.nu_samples.emplace_back(x, *scan.nu);
    rep.s_max = std::max(rep.s_max, spanning_depth(basis, x, plan.tol));
    if (*scan.nu > rep.nu_tilde) {
      rep.nu_tilde = *scan.nu;
      rep.nu_tilde_witness_tuple = scan.nu_witness;
      rep.nu_tilde_witness_point = x;
    }
    if (*scan.max_degree > rep.local_q) {
      rep.local_q = *scan.max_degree;
      rep.q_witness_tuple = scan.max_degree_witness;
      rep.q_witness_point = x;
    }
    min_nu = min_nu == 0 ? *scan.nu : std::min(min_nu, *scan.nu);
  }
  for (const auto& [x, nu] : rep.nu_samples)
    if (nu > min_nu) rep.singular_points.push_back(x);
  if (rep.nu_tilde > rep.local_q)
    throw std::logic_error("nu_tilde exceeds Q; tuple scan is inconsistent");
  return rep;
}

HormanderResult hormander_check(const CommutatorBasis& basis, const DomainSpec& domain,
                                const SamplingPlan& plan) {
  HormanderResult res;
  res.ok = true;
  for (const auto& x : sampling_points(domain, plan)) {
    int s = spanning_depth(basis, x, plan.tol);
    if (s == 0) {
      res.ok = false;
      res.witness = x;
      res.s_max = 0;
      return res;
    }
    res.s_max = std::max(res.s_max, s);
  }
  return res;
}

}  // namespace hvf
