#include "metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace hvf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Small dense solve A x = b, column-major, partial pivoting. Returns false on
// a numerically singular pivot.
bool solve_dense(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
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
    if (best < 1e-300) return false;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(a[k * n + c], a[k * n + piv]);
      std::swap(b[c], b[piv]);
    }
    for (int r = c + 1; r < n; ++r) {
      double f = a[c * n + r] / a[c * n + c];
      b[r] -= f * b[c];
      for (int k = c; k < n; ++k) a[k * n + r] -= f * a[k * n + c];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[k * n + r] * x[k];
    x[r] = s / a[r * n + r];
  }
  return true;
}

struct BinWriter {
  std::ofstream out;
  explicit BinWriter(const std::string& path) : out(path, std::ios::binary) {}
  template <class T>
  void pod(const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  template <class T>
  void vec(const std::vector<T>& v) {
    std::uint64_t sz = v.size();
    pod(sz);
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(sizeof(T) * v.size()));
  }
};

struct BinReader {
  std::ifstream in;
  explicit BinReader(const std::string& path) : in(path, std::ios::binary) {}
  template <class T>
  void pod(T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
  }
  template <class T>
  void vec(std::vector<T>& v) {
    std::uint64_t sz = 0;
    pod(sz);
    v.resize(sz);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sizeof(T) * sz));
  }
};

}  // namespace

std::uint64_t system_fingerprint(const VectorFieldSystem& sys) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : to_string(sys)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::vector<double>> control_directions(int m, int count) {
  std::vector<std::vector<double>> dirs;
  if (m == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  if (m == 2) {
    int k = std::max(4, count);
    dirs.reserve(k);
    for (int i = 0; i < k; ++i) {
      double th = 2.0 * M_PI * i / k;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  // m >= 3: coordinate axes plus an antipodal golden-spiral fill.
  for (int j = 0; j < m; ++j) {
    std::vector<double> e(m, 0.0);
    e[j] = 1.0;
    dirs.push_back(e);
    e[j] = -1.0;
    dirs.push_back(e);
  }
  int want = std::max(count, 2 * m + 2);
  int half = (want - 2 * m + 1) / 2;
  if (m == 3) {
    for (int i = 0; i < half; ++i) {
      double z = (i + 0.5) / half;  // upper half sphere
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = 2.0 * M_PI * i / 1.618033988749895;
      std::vector<double> d{r * std::cos(th), r * std::sin(th), z};
      dirs.push_back(d);
      for (double& v : d) v = -v;
      dirs.push_back(d);
    }
  } else {
    // Deterministic low-discrepancy fill via a Weyl sequence, normalized.
    double alpha = 0.6180339887498949;
    double x = 0.5;
    for (int i = 0; i < half; ++i) {
      std::vector<double> d(m);
      double norm = 0.0;
      for (int j = 0; j < m; ++j) {
        x = std::fmod(x + alpha * (j + 1), 1.0);
        d[j] = 2.0 * x - 1.0;
        norm += d[j] * d[j];
      }
      norm = std::sqrt(norm);
      if (norm < 1e-9) continue;
      for (double& v : d) v /= norm;
      dirs.push_back(d);
      for (double& v : d) v = -v;
      dirs.push_back(d);
    }
  }
  return dirs;
}

DistanceOracle::DistanceOracle(const VectorFieldSystem& sys, const DomainSpec& domain,
                               OracleParams params)
    : sys_(sys), compiled_(sys), domain_(domain), params_(std::move(params)) {
  n_ = sys.n;
  m_ = sys.m;
  if (domain.dim() != n_) throw DomainError("domain dimension does not match the system");
  s_max_ = params_.s_max > 0 ? params_.s_max : sys.s0_hint.value_or(2);
  fingerprint_ = system_fingerprint(sys);
  init_lattice(domain);
  dirs_ = control_directions(m_, params_.directions);
  build_moves();
}

void DistanceOracle::init_lattice(const DomainSpec& domain) {
  spacing_.resize(n_);
  dims_.resize(n_);
  nodes_ = 1;
  for (int i = 0; i < n_; ++i) {
    double scale = i < static_cast<int>(params_.axis_scales.size()) ? params_.axis_scales[i] : 1.0;
    if (params_.h <= 0.0 || scale <= 0.0) throw DomainError("lattice spacing must be positive");
    double want = params_.h * scale;
    double extent = domain.hi[i] - domain.lo[i];
    if (extent <= 0.0) throw DomainError("domain box is empty");
    int d = static_cast<int>(std::lround(extent / want)) + 1;
    if (d < 8)
      throw DomainError("h too coarse: fewer than 8 nodes along axis " + std::to_string(i + 1));
    dims_[i] = d;
    spacing_[i] = extent / (d - 1);
    nodes_ *= static_cast<std::size_t>(d);
    if (nodes_ > params_.node_budget)
      throw BudgetError("lattice exceeds the node budget; raise h or the budget");
  }
  strides_.assign(n_, 1);
  for (int i = n_ - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * static_cast<std::size_t>(dims_[i + 1]);
  h_step_ = *std::max_element(spacing_.begin(), spacing_.end());
}

bool DistanceOracle::in_box(std::span<const double> x) const { return domain_.in_box(x); }

void DistanceOracle::integrate(std::span<const double> x0, std::span<const double> a, double tau,
                               int substeps, double* out) const {
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> k1(n_), k2(n_), k3(n_), k4(n_), tmp(n_);
  double dt = tau / substeps;
  for (int s = 0; s < substeps; ++s) {
    compiled_.velocity(x, a, k1.data());
    for (int i = 0; i < n_; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    compiled_.velocity(tmp, a, k2.data());
    for (int i = 0; i < n_; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    compiled_.velocity(tmp, a, k3.data());
    for (int i = 0; i < n_; ++i) tmp[i] = x[i] + dt * k3[i];
    compiled_.velocity(tmp, a, k4.data());
    for (int i = 0; i < n_; ++i) x[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  std::copy(x.begin(), x.end(), out);
}

std::vector<double> DistanceOracle::node_point(std::size_t idx) const {
  std::vector<double> p(n_);
  for (int i = 0; i < n_; ++i) {
    std::size_t q = idx / strides_[i];
    idx %= strides_[i];
    p[i] = domain_.lo[i] + spacing_[i] * static_cast<double>(q);
  }
  return p;
}

void DistanceOracle::build_moves() {
  const int ntau = static_cast<int>(params_.tau_factors.size());
  moves_per_node_ = static_cast<int>(dirs_.size()) * ntau;
  move_cost_.assign(nodes_ * static_cast<std::size_t>(moves_per_node_), -1.0f);
  move_dz_.assign(nodes_ * static_cast<std::size_t>(moves_per_node_) * n_, 0.0f);

  std::vector<double> p(n_), z(n_), v0(n_);
  for (std::size_t u = 0; u < nodes_; ++u) {
    std::size_t rem = u;
    for (int i = 0; i < n_; ++i) {
      std::size_t q = rem / strides_[i];
      rem %= strides_[i];
      p[i] = domain_.lo[i] + spacing_[i] * static_cast<double>(q);
    }
    for (std::size_t d = 0; d < dirs_.size(); ++d) {
      // Segment time is normalized by the local speed so every move advances
      // about tau_factor cells in arc length; slow coefficient regions would
      // otherwise land inside their own cell and never leave the inf state.
      compiled_.velocity(p, dirs_[d], v0.data());
      double speed = 0.0;
      for (int i = 0; i < n_; ++i) speed += v0[i] * v0[i];
      speed = std::sqrt(speed);
      if (speed < 0.02) continue;  // effectively degenerate direction here
      for (int t = 0; t < ntau; ++t) {
        double tau = params_.tau_factors[t] * h_step_ / speed;
        integrate(p, dirs_[d], tau, params_.steps_per_edge, z.data());
        std::size_t mi = u * static_cast<std::size_t>(moves_per_node_) +
                         d * static_cast<std::size_t>(ntau) + static_cast<std::size_t>(t);
        if (!in_box(z)) continue;
        double dist2 = 0.0;
        for (int i = 0; i < n_; ++i) dist2 += (z[i] - p[i]) * (z[i] - p[i]);
        if (dist2 < 1e-28) continue;
        move_cost_[mi] = static_cast<float>(tau);
        for (int i = 0; i < n_; ++i)
          move_dz_[mi * n_ + i] = static_cast<float>(z[i] - p[i]);
      }
    }
  }
}

std::size_t DistanceOracle::move_count() const {
  std::size_t c = 0;
  for (float v : move_cost_)
    if (v >= 0.0f) ++c;
  return c;
}

double DistanceOracle::interpolate(const std::vector<double>& f, std::span<const double> y) const {
  std::size_t cell = 0;
  double weights[32];
  for (int i = 0; i < n_; ++i) {
    double t = (y[i] - domain_.lo[i]) / spacing_[i];
    int i0 = static_cast<int>(std::floor(t));
    i0 = std::clamp(i0, 0, dims_[i] - 2);
    double wi = std::clamp(t - i0, 0.0, 1.0);
    cell += strides_[i] * static_cast<std::size_t>(i0);
    weights[i] = wi;
  }
  double acc = 0.0;
  const int corners = 1 << n_;
  for (int c = 0; c < corners; ++c) {
    double wgt = 1.0;
    std::size_t idx = cell;
    for (int i = 0; i < n_; ++i) {
      if (c & (1 << i)) {
        wgt *= weights[i];
        idx += strides_[i];
      } else {
        wgt *= 1.0 - weights[i];
      }
    }
    if (wgt == 0.0) continue;
    double v = f[idx];
    if (v == kInf) return kInf;
    acc += wgt * v;
  }
  return acc;
}

void DistanceOracle::solve(std::vector<double>& f) const {
  double diam = 0.0;
  for (int i = 0; i < n_; ++i) diam = std::max(diam, domain_.hi[i] - domain_.lo[i]);
  const double tol = params_.sweep_tol * diam;
  const int orders = 1 << n_;
  std::vector<int> idx(n_);
  std::vector<double> p(n_), z(n_);

  for (int sweep = 0; sweep < params_.max_sweeps; ++sweep) {
    int order = sweep % orders;
    for (int i = 0; i < n_; ++i) idx[i] = (order & (1 << i)) ? dims_[i] - 1 : 0;
    double maxdelta = 0.0;
    while (true) {
      std::size_t u = 0;
      for (int i = 0; i < n_; ++i) {
        u += strides_[i] * static_cast<std::size_t>(idx[i]);
        p[i] = domain_.lo[i] + spacing_[i] * static_cast<double>(idx[i]);
      }
      double best = f[u];
      const std::size_t mbase = u * static_cast<std::size_t>(moves_per_node_);
      for (int mv = 0; mv < moves_per_node_; ++mv) {
        float cost = move_cost_[mbase + mv];
        if (cost < 0.0f) continue;
        const float* dz = &move_dz_[(mbase + mv) * n_];
        for (int i = 0; i < n_; ++i) z[i] = p[i] + dz[i];
        double v = interpolate(f, z);
        if (v == kInf) continue;
        v += cost;
        if (v < best) best = v;
      }
      if (best < f[u]) {
        double delta = f[u] == kInf ? kInf : f[u] - best;
        f[u] = best;
        maxdelta = std::max(maxdelta, delta);
      }
      int c = n_ - 1;
      while (c >= 0) {
        bool up = !(order & (1 << c));
        idx[c] += up ? 1 : -1;
        if (idx[c] >= 0 && idx[c] < dims_[c]) break;
        idx[c] = up ? 0 : dims_[c] - 1;
        --c;
      }
      if (c < 0) break;
    }
    if (sweep >= orders && maxdelta < tol) break;
  }
}

std::optional<double> DistanceOracle::shoot(std::span<const double> from,
                                            std::span<const double> to, int legs) const {
  const int dof = legs * m_;
  const double tau = 1.0 / legs;
  const int substeps = std::max(params_.steps_per_edge, 8);

  std::vector<double> target(to.begin(), to.end());
  double scale = 0.0;
  for (int i = 0; i < n_; ++i) scale = std::max(scale, std::fabs(target[i] - from[i]));
  scale = std::max(scale, 1e-9);
  const double land_tol = 1e-9 * std::max(1.0, scale);

  auto endpoint = [&](const std::vector<double>& u, std::vector<double>& out) -> bool {
    std::vector<double> x(from.begin(), from.end());
    std::vector<double> nx(n_);
    for (int l = 0; l < legs; ++l) {
      std::span<const double> a(u.data() + static_cast<std::size_t>(l) * m_, m_);
      integrate(x, a, tau, substeps, nx.data());
      if (!in_box(nx)) return false;
      x = nx;
    }
    out = x;
    return true;
  };

  // Straight least-squares init: B a ~= to - from with a ridge term.
  std::vector<double> b(static_cast<std::size_t>(m_) * n_);
  compiled_.eval_fields(from, b.data());
  std::vector<double> gram(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) {
      double s = 0.0;
      for (int j = 0; j < m_; ++j) s += b[j * n_ + r] * b[j * n_ + c];
      gram[c * n_ + r] = s;
    }
  double tr = 0.0;
  for (int i = 0; i < n_; ++i) tr += gram[i * n_ + i];
  for (int i = 0; i < n_; ++i) gram[i * n_ + i] += 1e-10 * std::max(tr, 1.0);
  std::vector<double> rhs(n_), dual;
  for (int i = 0; i < n_; ++i) rhs[i] = target[i] - from[i];
  if (!solve_dense(gram, rhs, n_, dual)) return std::nullopt;
  std::vector<double> u(dof, 0.0);
  for (int l = 0; l < legs; ++l)
    for (int j = 0; j < m_; ++j) {
      double s = 0.0;
      for (int i = 0; i < n_; ++i) s += b[j * n_ + i] * dual[i];
      u[static_cast<std::size_t>(l) * m_ + j] = s;
    }

  std::vector<double> endpt(n_), res(n_);
  if (!endpoint(u, endpt)) return std::nullopt;
  double err = 0.0;
  for (int i = 0; i < n_; ++i) {
    res[i] = endpt[i] - target[i];
    err = std::max(err, std::fabs(res[i]));
  }

  std::vector<double> jac(static_cast<std::size_t>(dof) * n_);
  std::vector<double> up(dof), pendpt(n_);
  for (int iter = 0; iter < 15 && err > land_tol; ++iter) {
    double unorm = 0.0;
    for (double v : u) unorm = std::max(unorm, std::fabs(v));
    double eps = 1e-6 * std::max(unorm, scale);
    for (int k = 0; k < dof; ++k) {
      up = u;
      up[k] += eps;
      if (!endpoint(up, pendpt)) return std::nullopt;
      for (int i = 0; i < n_; ++i) jac[static_cast<std::size_t>(k) * n_ + i] = (pendpt[i] - endpt[i]) / eps;
    }
    // Least-norm step: delta = J^T (J J^T + ridge)^-1 (-res).
    std::vector<double> jjt(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) {
        double s = 0.0;
        for (int k = 0; k < dof; ++k)
          s += jac[static_cast<std::size_t>(k) * n_ + r] * jac[static_cast<std::size_t>(k) * n_ + c];
        jjt[c * n_ + r] = s;
      }
    double jtr = 0.0;
    for (int i = 0; i < n_; ++i) jtr += jjt[i * n_ + i];
    for (int i = 0; i < n_; ++i) jjt[i * n_ + i] += 1e-12 * std::max(jtr, 1e-12);
    std::vector<double> neg(n_), lam;
    for (int i = 0; i < n_; ++i) neg[i] = -res[i];
    if (!solve_dense(jjt, neg, n_, lam)) return std::nullopt;
    std::vector<double> delta(dof, 0.0);
    for (int k = 0; k < dof; ++k) {
      double s = 0.0;
      for (int i = 0; i < n_; ++i) s += jac[static_cast<std::size_t>(k) * n_ + i] * lam[i];
      delta[k] = s;
    }
    // Damped accept.
    double step = 1.0;
    bool accepted = false;
    for (int half = 0; half < 6; ++half, step *= 0.5) {
      up = u;
      for (int k = 0; k < dof; ++k) up[k] += step * delta[k];
      if (!endpoint(up, pendpt)) continue;
      double perr = 0.0;
      for (int i = 0; i < n_; ++i) perr = std::max(perr, std::fabs(pendpt[i] - target[i]));
      if (perr < err) {
        u = up;
        endpt = pendpt;
        err = perr;
        for (int i = 0; i < n_; ++i) res[i] = endpt[i] - target[i];
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (err > land_tol) return std::nullopt;

  double cost = 0.0;
  for (int l = 0; l < legs; ++l) {
    double norm = 0.0;
    for (int j = 0; j < m_; ++j) {
      double v = u[static_cast<std::size_t>(l) * m_ + j];
      norm += v * v;
    }
    cost += tau * std::sqrt(norm);
  }
  return cost;
}

std::optional<double> DistanceOracle::try_connect(std::span<const double> from,
                                                  std::span<const double> to, int max_legs) const {
  std::optional<double> best;
  for (int legs = 1; legs <= max_legs; ++legs) {
    auto c = shoot(from, to, legs);
    if (c && (!best || *c < *best)) best = c;
  }
  return best;
}

void DistanceOracle::seed(std::span<const double> source, std::vector<double>& f) const {
  std::vector<int> lo(n_), hi(n_);
  for (int i = 0; i < n_; ++i) {
    double t = (source[i] - domain_.lo[i]) / spacing_[i];
    lo[i] = std::clamp(static_cast<int>(std::floor(t)) - 3, 0, dims_[i] - 1);
    hi[i] = std::clamp(static_cast<int>(std::floor(t)) + 4, 0, dims_[i] - 1);
  }
  bool any = false;
  std::vector<int> idx(lo);
  std::vector<double> p(n_);
  while (true) {
    std::size_t u = 0;
    double d2 = 0.0;
    for (int i = 0; i < n_; ++i) {
      u += strides_[i] * static_cast<std::size_t>(idx[i]);
      p[i] = domain_.lo[i] + spacing_[i] * static_cast<double>(idx[i]);
      d2 += (p[i] - source[i]) * (p[i] - source[i]);
    }
    if (d2 < 1e-26) {
      f[u] = 0.0;
      any = true;
    } else {
      auto c = try_connect(source, p, 2);
      if (c && *c < f[u]) {
        f[u] = *c;
        any = true;
      }
    }
    int c = n_ - 1;
    while (c >= 0) {
      if (++idx[c] <= hi[c]) break;
      idx[c] = lo[c];
      --c;
    }
    if (c < 0) break;
  }
  if (!any)
    throw ResolutionError("cannot seed the distance field near the source point");
}

std::shared_ptr<const std::vector<double>> DistanceOracle::field(
    std::span<const double> source) const {
  std::vector<double> key(source.begin(), source.end());
  auto it = fields_.find(key);
  if (it != fields_.end()) return it->second;
  auto f = std::make_shared<std::vector<double>>(nodes_, kInf);
  seed(source, *f);
  solve(*f);
  if (fields_.size() >= 64) {
    fields_.erase(field_order_.front());
    field_order_.pop_front();
  }
  fields_.emplace(key, f);
  field_order_.push_back(key);
  return f;
}

DistanceOracle::Distance DistanceOracle::distance(std::span<const double> x,
                                                  std::span<const double> y) const {
  if (!in_box(x) || !in_box(y)) throw DomainError("point outside the oracle domain");
  bool same = true;
  for (int i = 0; i < n_; ++i)
    if (x[i] != y[i]) same = false;
  if (same) return {0.0, error_bound()};
  auto f = field(x);
  double v = interpolate(*f, y);
  auto direct = try_connect(x, y, 2);
  if (direct && *direct < v) v = *direct;
  if (v == kInf)
    throw ResolutionError("resolution insufficient: endpoints are not connected at this h");
  return {v, error_bound()};
}

bool DistanceOracle::ball_membership(std::span<const double> center, double r,
                                     std::span<const double> query) const {
  if (!in_box(center) || !in_box(query)) throw DomainError("point outside the oracle domain");
  auto f = field(center);
  double v = interpolate(*f, query);
  double margin = error_bound();
  if (v < r - margin) return true;
  if (v > r + margin && v != kInf) return false;
  auto direct = try_connect(center, query, 2);
  if (direct && *direct < v) v = *direct;
  return v < r;
}

std::vector<std::vector<double>> DistanceOracle::approximate_geodesic(
    std::span<const double> x, std::span<const double> y) const {
  if (!in_box(x) || !in_box(y)) throw DomainError("point outside the oracle domain");
  auto f = field(x);
  if (interpolate(*f, y) == kInf)
    throw ResolutionError("resolution insufficient: endpoints are not connected at this h");
  std::vector<std::vector<double>> path;
  path.emplace_back(y.begin(), y.end());
  std::vector<double> p(y.begin(), y.end()), z(n_), bestz(n_);
  const int max_steps = static_cast<int>(10.0 * (1.0 + interpolate(*f, y) / h_step_)) + 20;
  for (int step = 0; step < max_steps; ++step) {
    double cur = interpolate(*f, p);
    if (cur <= 2.0 * h_step_) break;
    double best = kInf;
    for (const auto& a : dirs_) {
      for (double ft : {0.5, 1.0, 2.0}) {
        double tau = ft * h_step_;
        integrate(p, a, tau, params_.steps_per_edge, z.data());
        if (!in_box(z)) continue;
        double v = interpolate(*f, z);
        if (v == kInf) continue;
        v += tau;
        if (v < best) {
          best = v;
          bestz = z;
        }
      }
    }
    if (best >= cur + 0.5 * h_step_) break;  // no usable descent
    p = bestz;
    path.push_back(p);
  }
  path.emplace_back(x.begin(), x.end());
  std::reverse(path.begin(), path.end());
  return path;
}

void DistanceOracle::calibrate(const DistanceOracle& finer,
                               const std::vector<std::vector<double>>& a,
                               const std::vector<std::vector<double>>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    double d1 = distance(a[i], b[i]).value;
    double d2 = finer.distance(a[i], b[i]).value;
    worst = std::max(worst, std::fabs(d1 - d2));
  }
  double hc = h_step_, hf = finer.h_step_;
  double denom = hc + hf + std::pow(hc, 1.0 / s_max_) + std::pow(hf, 1.0 / s_max_);
  double c = std::max(1.5 * worst / denom, 1e-6);
  c1_ = c2_ = c;
}

double DistanceOracle::connected_fraction() const {
  std::size_t mid = 0;
  for (int i = 0; i < n_; ++i) mid += strides_[i] * static_cast<std::size_t>(dims_[i] / 2);
  auto f = field(node_point(mid));
  std::size_t fin = 0;
  for (double v : *f)
    if (v != kInf) ++fin;
  return static_cast<double>(fin) / static_cast<double>(nodes_);
}

void DistanceOracle::save(const std::string& path) const {
  BinWriter w(path);
  if (!w.out) throw std::runtime_error("cannot open oracle dump for writing: " + path);
  const char magic[8] = {'H', 'V', 'F', 'O', 'R', 'C', '0', '1'};
  w.out.write(magic, 8);
  w.pod(fingerprint_);
  w.pod(n_);
  w.pod(m_);
  w.pod(s_max_);
  w.pod(c1_);
  w.pod(c2_);
  w.pod(h_step_);
  w.pod(moves_per_node_);
  w.vec(dims_);
  w.vec(spacing_);
  w.vec(domain_.lo);
  w.vec(domain_.hi);
  w.vec(params_.tau_factors);
  std::uint64_t ndirs = dirs_.size();
  w.pod(ndirs);
  for (const auto& d : dirs_) w.vec(d);
  w.vec(move_cost_);
  w.vec(move_dz_);
  if (!w.out) throw std::runtime_error("failed writing oracle dump: " + path);
}

DistanceOracle DistanceOracle::load(const VectorFieldSystem& sys, const DomainSpec& domain,
                                    const std::string& path) {
  BinReader r(path);
  if (!r.in) throw std::runtime_error("cannot open oracle dump: " + path);
  char magic[8];
  r.in.read(magic, 8);
  if (std::memcmp(magic, "HVFORC01", 8) != 0)
    throw std::runtime_error("not an oracle dump (bad magic): " + path);
  DistanceOracle o;
  o.sys_ = sys;
  o.compiled_ = CompiledSystem(sys);
  o.domain_ = domain;
  r.pod(o.fingerprint_);
  if (o.fingerprint_ != system_fingerprint(sys))
    throw std::runtime_error("oracle dump does not match the model: " + path);
  r.pod(o.n_);
  r.pod(o.m_);
  r.pod(o.s_max_);
  r.pod(o.c1_);
  r.pod(o.c2_);
  r.pod(o.h_step_);
  r.pod(o.moves_per_node_);
  r.vec(o.dims_);
  r.vec(o.spacing_);
  std::vector<double> lo, hi;
  r.vec(lo);
  r.vec(hi);
  if (lo != domain.lo || hi != domain.hi)
    throw std::runtime_error("oracle dump was built for a different domain box");
  r.vec(o.params_.tau_factors);
  std::uint64_t ndirs = 0;
  r.pod(ndirs);
  o.dirs_.resize(ndirs);
  for (auto& d : o.dirs_) r.vec(d);
  r.vec(o.move_cost_);
  r.vec(o.move_dz_);
  if (!r.in) throw std::runtime_error("truncated oracle dump: " + path);
  o.nodes_ = 1;
  for (int d : o.dims_) o.nodes_ *= static_cast<std::size_t>(d);
  o.strides_.assign(o.n_, 1);
  for (int i = o.n_ - 2; i >= 0; --i)
    o.strides_[i] = o.strides_[i + 1] * static_cast<std::size_t>(o.dims_[i + 1]);
  o.params_.h = o.h_step_;
  return o;
}

}  // namespace hvf
