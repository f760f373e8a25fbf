#pragma once

#include <cmath>
#include <list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "system.hpp"

namespace hvf {

struct OracleParams {
  double h = 1.0 / 32;                     // base lattice spacing
  std::vector<double> axis_scales;         // optional per-axis factors on h
  int directions = 32;                     // control-sphere directions
  int steps_per_edge = 4;                  // RK4 substeps per segment
  std::vector<double> tau_factors = {1.0, 2.0};
  int max_sweeps = 512;
  double sweep_tol = 1e-12;                // relative to the box diameter
  std::size_t node_budget = 700'000;
  int s_max = 0;                           // 0: take the system's step hint
};

// Lattice discretization of the subunit metric. Moves are short integrated
// horizontal segments of cost tau*|a| with |a| = 1; a per-source distance
// field solves the shortest-path fixed point with multilinear interpolation
// of landing values (value iteration by alternating sweeps). Direct
// constant-control Newton connections refine queries; as genuine admissible
// paths they can only tighten the estimate from above.
class DistanceOracle {
 public:
  DistanceOracle(const VectorFieldSystem& sys, const DomainSpec& domain, OracleParams params);

  struct Distance {
    double value;
    double error_bound;
  };

  Distance distance(std::span<const double> x, std::span<const double> y) const;
  bool ball_membership(std::span<const double> center, double r,
                       std::span<const double> query) const;
  std::vector<std::vector<double>> approximate_geodesic(std::span<const double> x,
                                                        std::span<const double> y) const;

  // Cached distance field from a source point; f[i] approximates d(source, node_i).
  std::shared_ptr<const std::vector<double>> field(std::span<const double> source) const;
  double interpolate(const std::vector<double>& f, std::span<const double> y) const;

  // Direct constant-control connection (1..max_legs legs); nullopt when the
  // Newton shoot fails to land. The value is an admissible-path cost.
  std::optional<double> try_connect(std::span<const double> from, std::span<const double> to,
                                    int max_legs = 2) const;

  double error_bound() const { return c1_ * h_step_ + c2_ * std::pow(h_step_, 1.0 / s_max_); }
  // Richardson calibration of the c1,c2 error model against a finer oracle.
  void calibrate(const DistanceOracle& finer, const std::vector<std::vector<double>>& a,
                 const std::vector<std::vector<double>>& b);

  void save(const std::string& path) const;
  static DistanceOracle load(const VectorFieldSystem& sys, const DomainSpec& domain,
                             const std::string& path);

  const DomainSpec& domain() const { return domain_; }
  int dim() const { return n_; }
  int s_max() const { return s_max_; }
  void set_s_max(int s) { s_max_ = std::max(1, s); }
  double h_step() const { return h_step_; }
  double spacing(int axis) const { return spacing_[axis]; }
  std::size_t node_count() const { return nodes_; }
  std::size_t move_count() const;
  std::vector<double> node_point(std::size_t idx) const;
  // Fraction of nodes reachable from the box center; 1.0 means Chow-connected
  // at this resolution.
  double connected_fraction() const;

 private:
  DistanceOracle() = default;
  void init_lattice(const DomainSpec& domain);
  void build_moves();
  void integrate(std::span<const double> x0, std::span<const double> a, double tau,
                 int substeps, double* out) const;
  bool in_box(std::span<const double> x) const;
  void solve(std::vector<double>& f) const;
  void seed(std::span<const double> source, std::vector<double>& f) const;
  std::optional<double> shoot(std::span<const double> from, std::span<const double> to,
                              int legs) const;

  VectorFieldSystem sys_;
  CompiledSystem compiled_;
  DomainSpec domain_;
  OracleParams params_;
  int n_ = 0, m_ = 0;
  int s_max_ = 1;
  double c1_ = 1.0, c2_ = 1.0;
  double h_step_ = 0.0;  // max spacing; segment times are tau_factor * h_step
  std::vector<double> spacing_;
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t nodes_ = 0;
  std::vector<std::vector<double>> dirs_;  // unit controls in R^m
  int moves_per_node_ = 0;
  std::vector<float> move_cost_;  // nodes*moves, < 0 marks an invalid move
  std::vector<float> move_dz_;    // nodes*moves*n landing offsets
  std::uint64_t fingerprint_ = 0;

  mutable std::map<std::vector<double>, std::shared_ptr<const std::vector<double>>> fields_;
  mutable std::list<std::vector<double>> field_order_;
};

// Deterministic direction set on the unit sphere of R^m (antipodally symmetric).
std::vector<std::vector<double>> control_directions(int m, int count);

std::uint64_t system_fingerprint(const VectorFieldSystem& sys);

}  // namespace hvf
