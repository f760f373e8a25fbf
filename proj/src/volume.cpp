#include "volume.hpp"

#include <algorithm>
#include <cmath>

namespace hvf {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(splitmix64(seed ^ splitmix64(counter)) >> 11) * 0x1.0p-53;
}

namespace {

bool is_boundary_node(const DistanceOracle& oracle, std::size_t idx) {
  auto p = oracle.node_point(idx);
  const auto& dom = oracle.domain();
  for (int i = 0; i < oracle.dim(); ++i)
    if (p[i] == dom.lo[i] || p[i] == dom.hi[i]) return true;
  return false;
}

}  // namespace

VolumeEstimate ball_volume(const DistanceOracle& oracle, std::span<const double> center, double r,
                           long samples, std::uint64_t seed) {
  const auto& dom = oracle.domain();
  const int n = oracle.dim();
  auto f = oracle.field(center);
  for (std::size_t i = 0; i < oracle.node_count(); ++i) {
    if (!is_boundary_node(oracle, i)) continue;
    if ((*f)[i] < r) throw DomainError("ball escapes the domain at radius " + std::to_string(r));
  }

  long hits = 0;
  std::vector<double> p(n);
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) {
      double u = uniform01(seed, static_cast<std::uint64_t>(s) * n + i);
      p[i] = dom.lo[i] + (dom.hi[i] - dom.lo[i]) * u;
    }
    if (oracle.ball_membership(center, r, p)) ++hits;
  }
  double box = dom.box_volume();
  double frac = static_cast<double>(hits) / static_cast<double>(samples);
  VolumeEstimate est;
  est.center.assign(center.begin(), center.end());
  est.r = r;
  est.volume = box * frac;
  est.stderr_ = box * std::sqrt(std::max(frac * (1.0 - frac), 1e-300) / samples);
  est.samples = samples;
  est.seed = seed;
  return est;
}

VolumeTable::VolumeTable(const DistanceOracle& oracle, std::span<const double> center,
                         double r_max, int nu, int points) {
  nu_ = std::max(1, nu);
  auto f = oracle.field(center);
  std::vector<double> finite;
  finite.reserve(f->size());
  for (double v : *f)
    if (std::isfinite(v)) finite.push_back(v);
  std::sort(finite.begin(), finite.end());
  double cellvol = 1.0;
  for (int i = 0; i < oracle.dim(); ++i) cellvol *= oracle.spacing(i);

  double r_lo = 2.0 * oracle.h_step();
  // Start the table where at least a handful of cells are inside.
  while (r_lo < r_max) {
    std::size_t cnt = std::lower_bound(finite.begin(), finite.end(), r_lo) - finite.begin();
    if (cnt >= 8) break;
    r_lo *= 1.3;
  }
  if (r_lo >= r_max) r_lo = r_max / 4.0;
  for (int k = 0; k < points; ++k) {
    double t = r_lo * std::pow(r_max / r_lo, static_cast<double>(k) / (points - 1));
    std::size_t cnt = std::lower_bound(finite.begin(), finite.end(), t) - finite.begin();
    if (cnt == 0) continue;
    radii_.push_back(std::log(t));
    vols_.push_back(std::log(static_cast<double>(cnt) * cellvol));
  }
  if (radii_.size() < 2)
    throw ResolutionError("volume table under-resolved: too few lattice cells inside the ball");
}

double VolumeTable::operator()(double t) const {
  double lt = std::log(std::max(t, 1e-300));
  if (lt <= radii_.front())
    return std::exp(vols_.front() + nu_ * (lt - radii_.front()));  // slope-nu extrapolation
  if (lt >= radii_.back()) return std::exp(vols_.back());
  auto it = std::upper_bound(radii_.begin(), radii_.end(), lt);
  std::size_t k = static_cast<std::size_t>(it - radii_.begin()) - 1;
  double w = (lt - radii_[k]) / (radii_[k + 1] - radii_[k]);
  return std::exp(vols_[k] * (1.0 - w) + vols_[k + 1] * w);
}

BallBoxReport ballbox_check(const CommutatorBasis& basis, const DistanceOracle& oracle,
                            const std::vector<std::vector<double>>& centers,
                            const std::vector<double>& radii, long samples, std::uint64_t seed,
                            double bound) {
  BallBoxReport rep;
  rep.bound = bound;
  std::uint64_t salt = 0;
  for (const auto& c : centers) {
    auto scan = scan_tuples(basis, c);
    for (double r : radii) {
      auto est = ball_volume(oracle, c, r, samples, splitmix64(seed + salt++));
      double lambda = 0.0;
      for (const auto& [deg, coeff] : scan.lambda_by_degree) lambda += coeff * std::pow(r, deg);
      rep.rows.push_back({c, r, est.volume, est.stderr_, lambda, est.volume / lambda});
    }
  }
  rep.min_ratio = rep.max_ratio = rep.rows.front().ratio;
  for (const auto& row : rep.rows) {
    rep.min_ratio = std::min(rep.min_ratio, row.ratio);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
  }
  rep.pass = rep.min_ratio > 0.0 && rep.max_ratio / rep.min_ratio <= bound;
  return rep;
}

DoublingReport doubling_check(const DistanceOracle& oracle,
                              const std::vector<std::vector<double>>& centers,
                              const std::vector<double>& radii, long samples, std::uint64_t seed,
                              const DistanceOracle* refined) {
  DoublingReport rep;
  std::uint64_t salt = 0;
  auto sweep = [&](const DistanceOracle& o, std::vector<DoublingRow>* rows) {
    double c3 = 0.0;
    for (const auto& c : centers) {
      for (double r : radii) {
        auto v1 = ball_volume(o, c, r, samples, splitmix64(seed + salt++));
        auto v2 = ball_volume(o, c, 2 * r, samples, splitmix64(seed + salt++));
        double ratio = v2.volume / v1.volume;
        if (rows) rows->push_back({c, r, v1.volume, v2.volume, ratio});
        c3 = std::max(c3, ratio);
      }
    }
    return c3;
  };
  rep.c3 = sweep(oracle, &rep.rows);
  rep.pass = std::isfinite(rep.c3) && rep.c3 > 0.0;
  if (refined) {
    rep.refined_c3 = sweep(*refined, nullptr);
    rep.drift = std::fabs(rep.c3 - rep.refined_c3) / rep.c3;
    rep.pass = rep.pass && rep.drift <= 0.20;
  }
  return rep;
}

KernelIntegral kernel_weight_integral(const DistanceOracle& oracle, const CommutatorBasis& basis,
                                      std::span<const double> x, double r, double mu, double eta,
                                      double xi) {
  if (xi <= 0.0) throw RegimeError("kernel weight integral requires xi > 0");
  if (r <= 0.0) throw std::invalid_argument("radius must be positive");
  int nu = pointwise_nu(basis, x);
  VolumeTable table(oracle, x, std::max(r, 4.1 * oracle.h_step()), nu);

  KernelIntegral out;
  double r0 = std::min(4.0 * oracle.h_step(), r);
  out.inner_radius = r0;

  auto f = oracle.field(x);
  double cellvol = 1.0;
  for (int i = 0; i < oracle.dim(); ++i) cellvol *= oracle.spacing(i);
  double outer = 0.0;
  for (std::size_t i = 0; i < oracle.node_count(); ++i) {
    double t = (*f)[i];
    if (!(t >= r0) || t >= r) continue;
    outer += cellvol * std::pow(t, mu) / std::pow(table(t), eta);
  }

  // Inner shells by the layer-cake substitution dV = d|B(x,t)|, with the
  // slope-nu tail of the table standing in below lattice resolution.
  const int shells = 64;
  double t_eps = r0 * 1e-3;
  double inner = 0.0, extrap = 0.0;
  double table_floor = table.r_lo();
  double prev_t = t_eps, prev_v = table(t_eps);
  for (int k = 1; k <= shells; ++k) {
    double t = t_eps * std::pow(r0 / t_eps, static_cast<double>(k) / shells);
    double v = table(t);
    double piece = std::pow(prev_t, mu) / std::pow(prev_v, eta) * std::max(v - prev_v, 0.0);
    inner += piece;
    if (t <= table_floor) extrap += piece;
    prev_t = t;
    prev_v = v;
  }
  out.inner_value = inner;
  out.extrapolated_value = extrap;
  out.value = outer + inner;
  out.under_resolved = extrap > 0.5 * out.value;
  return out;
}

WeakTypeReport weak_lp_kernel_check(const CommutatorBasis& basis, const DistanceOracle& oracle,
                                    std::span<const int> I, const ScalarField& f,
                                    const std::vector<double>& thresholds) {
  WeakTypeReport rep;
  const int n = oracle.dim();
  for (int idx : I) rep.d_I += basis.entry(idx).degree;
  if (rep.d_I < 2) throw RegimeError("weak-type check requires d(I) >= 2");
  rep.exponent = static_cast<double>(rep.d_I) / (rep.d_I - 1);

  double cellvol = 1.0;
  for (int i = 0; i < n; ++i) cellvol *= oracle.spacing(i);

  // Source nodes carrying f, subsampled to at most 64 with reweighting.
  std::vector<std::size_t> sources;
  std::vector<double> weights;
  double l1 = 0.0;
  std::vector<std::size_t> carrying;
  for (std::size_t i = 0; i < oracle.node_count(); ++i) {
    auto p = oracle.node_point(i);
    bool inside = true;
    for (int k = 0; k < n; ++k)
      if (p[k] < f.lo[k] || p[k] > f.hi[k]) inside = false;
    if (!inside) continue;
    double v = f.eval(p);
    if (v == 0.0) continue;
    l1 += std::fabs(v) * cellvol;
    carrying.push_back(i);
  }
  if (carrying.empty()) {
    rep.f_l1 = 0.0;
    rep.pass = true;  // Tf == 0, every level set is empty
    for (double t : thresholds) rep.rows.push_back({t, 0.0, 0.0});
    return rep;
  }
  std::size_t stride = (carrying.size() + 63) / 64;
  for (std::size_t k = 0; k < carrying.size(); k += stride) {
    auto p = oracle.node_point(carrying[k]);
    sources.push_back(carrying[k]);
    weights.push_back(f.eval(p) * cellvol * static_cast<double>(stride));
  }
  rep.f_l1 = l1;

  // Tf on the evaluation grid (lattice nodes, subsampled for big lattices).
  std::size_t eval_stride = std::max<std::size_t>(1, oracle.node_count() / 8192);
  std::vector<std::size_t> eval_nodes;
  for (std::size_t i = 0; i < oracle.node_count(); i += eval_stride) eval_nodes.push_back(i);
  std::vector<double> tf(eval_nodes.size(), 0.0);

  std::vector<std::vector<std::pair<int, double>>> lam_coeffs(eval_nodes.size());
  for (std::size_t e = 0; e < eval_nodes.size(); ++e) {
    auto scan = scan_tuples(basis, oracle.node_point(eval_nodes[e]));
    lam_coeffs[e].assign(scan.lambda_by_degree.begin(), scan.lambda_by_degree.end());
  }

  double hmin = oracle.h_step();
  for (std::size_t s = 0; s < sources.size(); ++s) {
    auto fy = oracle.field(oracle.node_point(sources[s]));
    for (std::size_t e = 0; e < eval_nodes.size(); ++e) {
      double d = (*fy)[eval_nodes[e]];
      if (!std::isfinite(d) || d < 0.5 * hmin) continue;  // singular cell skipped
      double lam = 0.0;
      for (const auto& [deg, coeff] : lam_coeffs[e]) lam += coeff * std::pow(d, deg);
      if (lam <= 0.0) continue;
      tf[e] += weights[s] * d / lam;
    }
  }

  std::vector<double> lam_weight(eval_nodes.size());
  for (std::size_t e = 0; e < eval_nodes.size(); ++e) {
    auto xe = oracle.node_point(eval_nodes[e]);
    lam_weight[e] = std::pow(std::fabs(lambda_det(basis, I, xe)), 1.0 / (rep.d_I - 1));
  }

  std::vector<double> ts = thresholds;
  if (ts.empty()) {
    // Far-field window by |Tf| quantiles: level sets covering roughly 25%
    // down to 3% of the lattice, clear of both the source scale and the box.
    std::vector<double> mags;
    for (double v : tf)
      if (std::fabs(v) > 0.0) mags.push_back(std::fabs(v));
    if (mags.empty()) {
      rep.pass = true;
      return rep;
    }
    std::sort(mags.begin(), mags.end());
    for (double q : {0.70, 0.78, 0.86, 0.93}) {
      double t = mags[static_cast<std::size_t>(q * (mags.size() - 1))];
      if (ts.empty() || t > ts.back() * 1.0000001) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  double evalvol = cellvol * static_cast<double>(eval_stride);
  rep.pass = true;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    double measure = 0.0;
    for (std::size_t e = 0; e < eval_nodes.size(); ++e)
      if (std::fabs(tf[e]) > t) measure += evalvol * lam_weight[e];
    double bound;
    if (k == 0) {
      rep.c_emp = measure * std::pow(t, rep.exponent) / std::pow(rep.f_l1, rep.exponent);
      bound = measure;
    } else {
      bound = rep.c_emp * std::pow(t, -rep.exponent) * std::pow(rep.f_l1, rep.exponent);
      if (measure > bound * rep.slack) rep.pass = false;
    }
    rep.rows.push_back({t, measure, bound});
  }
  return rep;
}

}  // namespace hvf
