#pragma once

#include <map>
#include <string>
#include <vector>

#include "exponents.hpp"
#include "metric.hpp"
#include "quadrature.hpp"
#include "testfn.hpp"
#include "volume.hpp"

namespace hvf {

// Outcome of one verification suite. PASS means the empirical constant is
// finite and stable under family extension (growth <= 2x from the first half
// of the ordered family to the whole); FLAG marks under-resolved quadrature;
// FAIL marks monotone growth past the stability limit or a violated identity.
struct SuiteReport {
  std::string suite;
  std::map<std::string, std::string> exponents;
  double constant = 0.0;
  int family_size = 0;
  std::map<std::string, double> worst_params;
  std::string verdict = "PASS";
  std::string notes;
  std::vector<std::map<std::string, double>> rows;   // CSV table
  std::map<std::string, double> metrics;
};

QuadValue lp_norm(const TestFunction& u, double p, const QuadPlan& plan);
QuadValue horizontal_derivative_norm(const VectorFieldSystem& sys, const TestFunction& u,
                                     std::span<const int> J, double p, const QuadPlan& plan);
// sum over |J| = k of ||X^J u||_p (scalar norms, theorem-1 style)
QuadValue derivative_sum_norm(const VectorFieldSystem& sys, const TestFunction& u, int k, double p,
                              const QuadPlan& plan);
// || |Xu| ||_p with the pointwise euclidean norm of the horizontal gradient
QuadValue gradient_norm(const VectorFieldSystem& sys, const TestFunction& u, double p,
                        const QuadPlan& plan);

struct SobolevOptions {
  int k = 1;
  Rational p{2};
  double q_probe = 0.0;  // 0: 1.1 * q
  QuadPlan plan;
};

SuiteReport sobolev_suite(const VectorFieldSystem& sys, const Rational& nu_tilde,
                          const SobolevOptions& opt, const std::vector<TestFunction>& family,
                          const std::vector<TestFunction>& probe_family);

// Gagliardo-Nirenberg family (Eq-1.11 shape) for a validated parameter set.
SuiteReport gn_suite(const VectorFieldSystem& sys, const GNParams& params,
                     const std::string& variant, const std::vector<TestFunction>& family,
                     const QuadPlan& plan);

struct Ellipsoid {
  std::vector<double> center, radii;
  double measure() const;  // Lebesgue measure of the solid ellipsoid
};

// X-perimeter by boundary quadrature of (sum_j <X_j, eta>^2)^(1/2) dH_{n-1};
// supports n = 2 (curves) and n = 3 (surfaces).
QuadValue x_perimeter(const VectorFieldSystem& sys, const Ellipsoid& shape, int points = 1024);

SuiteReport isoperimetric_suite(const VectorFieldSystem& sys, const Rational& exponent,
                                const std::vector<Ellipsoid>& shapes, int points = 1024);

SuiteReport log_sobolev_suite(const VectorFieldSystem& sys, const Rational& nu_tilde, int k,
                              const Rational& p, const std::vector<TestFunction>& family,
                              const QuadPlan& plan);

SuiteReport holder_suite(const VectorFieldSystem& sys, const DistanceOracle& oracle,
                         const Rational& nu_tilde, int k, const Rational& p,
                         const std::vector<TestFunction>& family, const QuadPlan& plan,
                         int pairs = 500, std::uint64_t seed = 1);

SuiteReport moser_trudinger_suite(const VectorFieldSystem& sys, const DomainSpec& omega,
                                  const Rational& nu_tilde, const std::vector<double>& sigmas,
                                  const std::vector<TestFunction>& family, const QuadPlan& plan,
                                  double omega_multiple = 10.0);

SuiteReport poincare_check(const VectorFieldSystem& sys, const Rational& p,
                           const std::vector<TestFunction>& family, const QuadPlan& plan);

SuiteReport representation_check(const VectorFieldSystem& sys, const DistanceOracle& oracle,
                                 const CommutatorBasis& basis,
                                 const std::vector<TestFunction>& family, const QuadPlan& plan,
                                 int sample_points = 50, std::uint64_t seed = 1);

// min over the family of int|Xu|^nu / int|u|^nu: an upper bound on the
// first Rayleigh quotient lambda_1(nu).
SuiteReport rayleigh_bound(const VectorFieldSystem& sys, const Rational& nu_tilde,
                           const std::vector<TestFunction>& family, const QuadPlan& plan);

}  // namespace hvf
