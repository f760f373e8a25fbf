#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lie.hpp"
#include "metric.hpp"

namespace hvf {

// Counter-based uniform stream: sample i of a seeded run is a pure function
// of (seed, i), so estimates replay bit-for-bit and shard safely.
std::uint64_t splitmix64(std::uint64_t z);
double uniform01(std::uint64_t seed, std::uint64_t counter);

struct VolumeEstimate {
  std::vector<double> center;
  double r = 0.0;
  double volume = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

// Hit-or-miss Monte Carlo over the oracle's domain box.
// Throws DomainError when the ball is not strictly inside the domain
// (tested on the boundary lattice nodes).
VolumeEstimate ball_volume(const DistanceOracle& oracle, std::span<const double> center, double r,
                           long samples, std::uint64_t seed);

// |B(x,t)| as a function of t: lattice cell counts on a geometric radius grid,
// log-log interpolation in between, slope-nu extrapolation below resolution.
class VolumeTable {
 public:
  VolumeTable() = default;
  VolumeTable(const DistanceOracle& oracle, std::span<const double> center, double r_max, int nu,
              int points = 32);
  double operator()(double t) const;
  double r_lo() const { return radii_.empty() ? 0.0 : radii_.front(); }

 private:
  std::vector<double> radii_, vols_;  // both log-scaled ascending
  int nu_ = 2;
};

struct BallBoxRow {
  std::vector<double> center;
  double r, volume, stderr_, lambda, ratio;
};

struct BallBoxReport {
  std::vector<BallBoxRow> rows;
  double min_ratio = 0.0, max_ratio = 0.0;
  double bound = 50.0;  // PASS iff max/min <= bound
  bool pass = false;
};

BallBoxReport ballbox_check(const CommutatorBasis& basis, const DistanceOracle& oracle,
                            const std::vector<std::vector<double>>& centers,
                            const std::vector<double>& radii, long samples, std::uint64_t seed,
                            double bound = 50.0);

struct DoublingRow {
  std::vector<double> center;
  double r, vol_r, vol_2r, ratio;
};

struct DoublingReport {
  std::vector<DoublingRow> rows;
  double c3 = 0.0;              // max ratio over the sweep
  double refined_c3 = -1.0;     // from a finer oracle when provided
  double drift = 0.0;           // |c3 - refined_c3| / c3
  bool pass = false;            // finite, and stable within 20% when refined
};

DoublingReport doubling_check(const DistanceOracle& oracle,
                              const std::vector<std::vector<double>>& centers,
                              const std::vector<double>& radii, long samples, std::uint64_t seed,
                              const DistanceOracle* refined = nullptr);

struct KernelIntegral {
  double value = 0.0;
  double inner_value = 0.0;        // contribution of the shell decomposition
  double extrapolated_value = 0.0; // part below the volume-table resolution
  double inner_radius = 0.0;
  bool under_resolved = false;     // extrapolated part dominates the value
};

// integral over B(x,r) of d(x,y)^mu / |B(x,d(x,y))|^eta dy.
// Requires mu = xi + (eta-1)*nu_tilde with xi > 0; xi is passed explicitly so
// the caller states the regime it is probing.
KernelIntegral kernel_weight_integral(const DistanceOracle& oracle, const CommutatorBasis& basis,
                                      std::span<const double> x, double r, double mu, double eta,
                                      double xi);

// Scalar integrand with a compact support box, the little interface geometry
// needs from the test-function layer.
struct ScalarField {
  std::function<double(std::span<const double>)> eval;
  std::vector<double> lo, hi;  // support box
};

struct WeakTypeRow {
  double t, measure, bound;
};

struct WeakTypeReport {
  std::vector<WeakTypeRow> rows;
  int d_I = 0;
  double exponent = 0.0;  // d(I)/(d(I)-1)
  double c_emp = 0.0;     // fitted at the smallest threshold
  double f_l1 = 0.0;
  double slack = 1.10;    // shape tolerance for lattice quantization noise
  bool pass = false;
};

// Weighted weak-L^p shape check for Tf(x) = int d(x,y)/Lambda(x,d(x,y)) f(y) dy:
// mu_I({|Tf| > t}) <= C t^{-d(I)/(d(I)-1)} ||f||_1^{d(I)/(d(I)-1)} with C fitted
// at the smallest threshold, mu_I = |lambda_I|^{1/(d(I)-1)} dx.
WeakTypeReport weak_lp_kernel_check(const CommutatorBasis& basis, const DistanceOracle& oracle,
                                    std::span<const int> I, const ScalarField& f,
                                    const std::vector<double>& thresholds);

}  // namespace hvf
