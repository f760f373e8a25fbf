#pragma once

#include <memory>
#include <string>
#include <vector>

#include "config.hpp"
#include "metric.hpp"
#include "report.hpp"

namespace hvf {

inline constexpr const char* kVersion = "0.1.0";

struct RunOutcome {
  nlohmann::json report;
  std::string csv;      // plot-ready table, empty when not applicable
  std::string verdict;  // PASS | FAIL | FLAG
};

// One configured model with lazily built analysis state and oracle; the
// orchestrator behind the CLI commands.
class Workspace {
 public:
  explicit Workspace(RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  const VectorFieldSystem& system() const { return sys_; }
  const DomainSpec& domain() const { return domain_; }
  const std::string& label() const { return label_; }

  void ensure_analysis();
  DistanceOracle& ensure_oracle();
  const CommutatorBasis& basis() {
    ensure_analysis();
    return *basis_;
  }
  const IndexReport& index() {
    ensure_analysis();
    return index_;
  }

  RunOutcome analyze();
  RunOutcome verify(const std::string& suite);
  RunOutcome distance_query(const std::vector<double>& x, const std::vector<double>& y,
                            std::string* geodesic_csv);
  RunOutcome ball_volume_query(const std::vector<double>& center, double r);

 private:
  struct FamilyPlan {
    std::vector<Rational> center;
    std::vector<Rational> radii;
    std::vector<int> weights;
    std::vector<double> center_d;
  };
  FamilyPlan family_plan(const std::string& suite);
  QuadPlan quad_plan() const;
  Rational nu_tilde_rational();
  nlohmann::json wrap(const nlohmann::json& result) const;

  RunConfig cfg_;
  VectorFieldSystem sys_;
  DomainSpec domain_;
  std::string label_;

  bool analyzed_ = false;
  int s0_ = 0;
  std::unique_ptr<CommutatorBasis> basis_;
  HormanderResult horm_;
  IndexReport index_;
  std::unique_ptr<DistanceOracle> oracle_;
};

// Aggregates the JSON reports under a run directory into a plain-text table.
std::string report_summary(const std::string& out_dir);

}  // namespace hvf
