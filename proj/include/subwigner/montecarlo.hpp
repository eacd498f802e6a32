#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "subwigner/ensembles.hpp"
#include "subwigner/indexing.hpp"

// Replicated experiments over keyed Wigner matrices: raw trace statistics,
// moment/cumulant summaries with jackknife standard errors, and z-score
// comparison against the limiting theory.

namespace subwigner {

enum class StatKind { Trace, Chebyshev };

// The index set of one statistic: a sequence prefix (by density y or by
// explicit length) or an explicit set.
struct SetSpec {
  int sequence = -1;                       // index into the family, or -1
  double y = 0.0;                          // prefix length [y L]
  std::int64_t length = -1;                // explicit prefix length, or -1
  std::vector<std::uint64_t> explicit_set;  // non-empty for explicit sets

  bool is_explicit() const { return !explicit_set.empty(); }
};

struct StatSpec {
  SetSpec set;
  int power = 1;  // trace power k, or Chebyshev order
  StatKind kind = StatKind::Trace;
};

struct ExperimentSpec {
  EnsembleSpec ensemble;
  GoodFamily family;
  std::vector<StatSpec> statistics;
  std::uint64_t L = 1;
  std::uint64_t replicates = 2;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = available parallelism (capped by SUBWIGNER_MAX_THREADS)

  // Throws ValidationError; min_replicates lets raw runs accept M = 1.
  void validate(std::uint64_t min_replicates = 2) const;
};

struct RawResults {
  std::vector<std::vector<double>> traces;   // [statistic][replicate]
  std::vector<std::vector<std::uint64_t>> sets;  // resolved B_p per statistic
  std::vector<int> power;
  std::vector<StatKind> kind;
  std::uint64_t L = 0;
  std::uint64_t replicates = 0;
  std::uint64_t seed = 0;
  int beta = 1;
};

// Resolves one SetSpec against the family and L.
std::vector<std::uint64_t> resolve_set(const SetSpec& s, const GoodFamily& family,
                                       std::uint64_t L);

// Realizes every needed submatrix per replicate (all statistics share one
// underlying keyed matrix within a replicate) and computes raw traces.
// Replicates are independent work items; the output is bitwise independent
// of the thread count.
RawResults run(const ExperimentSpec& spec);

struct StatSummary {
  std::uint64_t M = 0;
  std::uint64_t L = 0;
  std::uint64_t seed = 0;
  int beta = 1;

  // per statistic
  std::vector<double> mean_trace;        // raw trace mean (stands in for E Tr)
  std::vector<double> normalization;     // L^{-k/2} for traces, 1 for Chebyshev
  std::vector<int> power;
  std::vector<StatKind> kind;
  std::vector<double> set_size;          // |B_p|
  std::vector<double> b;                 // |B_p| / L
  std::vector<double> variance;          // of the normalized centered statistic
  std::vector<double> variance_se;       // delete-1 jackknife
  std::vector<double> skewness;
  std::vector<double> ex_kurtosis;
  std::vector<bool> moments_defined;     // false when the variance vanishes

  Eigen::MatrixXd covariance;    // normalized statistics; diagonal = variance
  Eigen::MatrixXd covariance_se;
  Eigen::MatrixXd overlap;       // c_pq = |B_p ∩ B_q| / L (exact finite-L)
};

// Centered, normalized statistics; unbiased (co)variance, delete-1 jackknife
// standard errors, skewness and excess kurtosis.
StatSummary summarize(const RawResults& raw);

struct TheoryRow {
  int p = 0, q = 0;
  int kp = 1, kq = 1;
  double bp = 0, bq = 0, c = 0;
  int beta = 1;
  double cov_series = 0, cov_catalan = 0, cov_contour = 0, cov_kernel = 0, cheb_cov = 0;
  StatKind kind_p = StatKind::Trace, kind_q = StatKind::Trace;
};

// Limiting covariances for every statistic pair, evaluated at the *exact*
// finite-L ratios |B_p|/L and |B_p ∩ B_q|/L.
std::vector<TheoryRow> theory_table(const ExperimentSpec& spec, int contour_nodes = 256,
                                    int kernel_nodes = 256);

struct CompareRow {
  int p = 0, q = 0;
  std::string metric;  // "variance", "covariance", "skewness", "ex_kurtosis"
  double empirical = 0;
  double theory = 0;
  double se = 0;
  double z = 0;
  bool flagged = false;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  double threshold = 5.0;
  bool any_flagged = false;
};

// z = (empirical - limit) / SE for every matching same-kind pair, plus
// skewness/kurtosis z-scores against the Gaussian null with SEs sqrt(6/M)
// and sqrt(24/M).  Throws ValidationError listing unmatched labels.
CompareReport compare(const StatSummary& summary, const std::vector<TheoryRow>& theory,
                      double threshold = 5.0);

// Worker-count resolution: explicit > 0 wins, otherwise hardware concurrency
// capped by the SUBWIGNER_MAX_THREADS environment variable.
int resolve_threads(int requested);

}  // namespace subwigner
