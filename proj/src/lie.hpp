#pragma once

#include <map>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "system.hpp"

namespace hvf {

// [A,B]_k = sum_i (A_i d_i B_k - B_i d_i A_k), computed symbolically.
VectorField lie_bracket(const VectorField& a, const VectorField& b);

struct BasisEntry {
  VectorField field;
  int degree;                    // commutator length
  std::vector<int> multi_index;  // J with X_J = [X_{j1},[X_{j2},...]], 1-based
};

// Enumeration of X^(1)..X^(s0): m^k entries of each degree k, lexicographic
// by multi-index, no deduplication.
class CommutatorBasis {
 public:
  CommutatorBasis() = default;
  CommutatorBasis(const VectorFieldSystem& sys, int max_len,
                  std::size_t node_budget = 5'000'000);

  int n() const { return n_; }
  int m() const { return m_; }
  int s0() const { return s0_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const BasisEntry& entry(int i) const { return entries_[i]; }
  const std::vector<BasisEntry>& entries() const { return entries_; }

  // Evaluates entry i at x into out[0..n).
  void eval_entry(int i, std::span<const double> x, double* out) const;
  // Evaluates every entry; out is size()*n row-major.
  void eval_all(std::span<const double> x, double* out) const;

 private:
  int n_ = 0, m_ = 0, s0_ = 0;
  std::vector<BasisEntry> entries_;
  std::vector<CompiledExpr> compiled_;  // size()*n
};

// det(Y_{i1},...,Y_{in})(x); I holds 0-based entry indices, |I| = n.
double lambda_det(const CommutatorBasis& basis, std::span<const int> I,
                  std::span<const double> x);

// One pass over all n-tuples of basis entries at a point.
struct TupleScan {
  std::map<int, double> lambda_by_degree;  // degree -> sum |lambda_I|
  std::optional<int> nu;                   // min d(I) with |lambda_I| above tolerance
  std::vector<int> nu_witness;
  std::optional<int> max_degree;           // max d(I) with |lambda_I| above tolerance
  std::vector<int> max_degree_witness;
};

TupleScan scan_tuples(const CommutatorBasis& basis, std::span<const double> x,
                      double tol = 1e-9, std::size_t tuple_budget = 10'000'000);

// Nagel-Stein-Wainger polynomial Lambda(x,r) = sum_I |lambda_I(x)| r^{d(I)}.
double nsw_polynomial(const CommutatorBasis& basis, std::span<const double> x, double r,
                      double tol = 0.0, std::size_t tuple_budget = 10'000'000);

// Pointwise homogeneous dimension; throws NoSpanError when no tuple passes the
// scale-relative tolerance (Hadamard bound of the column norms).
int pointwise_nu(const CommutatorBasis& basis, std::span<const double> x, double tol = 1e-9);

// Minimal k with span{entries of degree <= k}(x) = R^n; 0 if never.
int spanning_depth(const CommutatorBasis& basis, std::span<const double> x, double tol = 1e-9);

struct SamplingPlan {
  int grid = 33;                  // nodes per axis, endpoints included
  bool coordinate_hyperplanes = true;
  std::vector<std::vector<double>> suspect_points;
  double tol = 1e-9;
};

struct IndexReport {
  int nu_tilde = 0;
  int local_q = 0;
  int s_max = 0;
  std::vector<std::pair<std::vector<double>, int>> nu_samples;
  std::vector<std::vector<double>> singular_points;  // nu(x) > min sampled nu
  std::vector<int> nu_tilde_witness_tuple;
  std::vector<double> nu_tilde_witness_point;
  std::vector<int> q_witness_tuple;
  std::vector<double> q_witness_point;
};

IndexReport metivier_index(const CommutatorBasis& basis, const DomainSpec& domain,
                           const SamplingPlan& plan);

struct HormanderResult {
  bool ok = false;
  int s_max = 0;
  std::vector<double> witness;  // a point without a spanning tuple, when !ok
};

HormanderResult hormander_check(const CommutatorBasis& basis, const DomainSpec& domain,
                                const SamplingPlan& plan);

// Sample points used by metivier_index/hormander_check (grid + boundary +
// coordinate hyperplanes + suspects, restricted to the closure of Omega).
std::vector<std::vector<double>> sampling_points(const DomainSpec& domain,
                                                 const SamplingPlan& plan);

namespace linalg {
// Determinant of an n x n column-major matrix, partial-pivot LU. Destroys a.
double det_inplace(std::vector<double>& a, int n);
// Rank with column-relative tolerance: a column counts if its residual after
// projection exceeds tol times its original norm.
int rank(const std::vector<double>& cols, int n, int ncols, double tol);
}  // namespace linalg

}  // namespace hvf
