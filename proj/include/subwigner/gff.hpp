#pragma once
#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "subwigner/indexing.hpp"

// Finite-dimensional covariance matrices of the correlated-GFF process on
// multi-sheet point grids, a pivoted symmetric factorization for the
// positive-semidefiniteness check, and keyed Gaussian field sampling.

namespace subwigner {

struct SheetPoint {
  std::size_t sheet = 0;
  std::complex<double> z;  // open upper half-plane
};

struct SheetGrid {
  std::vector<SheetPoint> points;
  GoodFamily family;
};

// Symmetric factorization P A P^T = L diag(d) L^T with greedy diagonal
// pivoting (pivoted Cholesky written as LDL^T).  Columns stop once the
// largest remaining diagonal drops to the clip threshold; the most negative
// pivot/remaining diagonal seen is reported.
struct PivotedFactor {
  Eigen::MatrixXd L;      // n x rank, unit lower triangular in pivot order
  Eigen::VectorXd d;      // rank positive pivots
  std::vector<int> perm;  // perm[k] = original index of pivot k
  double min_pivot = 0.0;
  int rank = 0;
  int clipped = 0;  // trailing columns treated as zero
};

PivotedFactor pivoted_ldlt(const Eigen::MatrixXd& A, double clip_threshold);

struct PsdReport {
  double min_pivot = 0.0;
  double max_diag = 0.0;
  double margin = 0.0;  // min_pivot / max_diag
  bool pass = false;
  int clipped = 0;
  double tol = 0.0;
};

struct FieldCovariance {
  Eigen::MatrixXd matrix;
  SheetGrid grid;
  double epsilon = 1e-3;  // diagonal regularization radius
  std::optional<PivotedFactor> factor;
  std::optional<PsdReport> report;
};

// matrix[a][b] = gff_kernel(i_a, z_a, i_b, z_b, alpha) for a != b, computed
// once per unordered pair (exact symmetry).  The diagonal carries the
// epsilon-circle-average variance (2 pi)^{-1} ln(2 Im z / epsilon), which is
// the same-sheet Green-function value regularized at scale epsilon; the
// pointwise kernel diverges on the diagonal, and epsilon-averages are honest
// random variables whose off-diagonal covariances coincide with the
// pointwise kernel for separated points.  Duplicate (sheet, z) pairs are
// rejected, as are points with Im z <= epsilon.
FieldCovariance build_covariance(const SheetGrid& grid, double epsilon = 1e-3);

// Runs the pivoted factorization; passes iff the most negative pivot is
// >= -tol * max diagonal.  Stores the factor and report inside cov.
PsdReport psd_check(FieldCovariance& cov, double tol = 1e-8);

// n_samples zero-mean Gaussian vectors with covariance cov.matrix (clipped
// pivots treated as zero).  Requires a passed psd_check; keyed by seed, so
// identical seeds give identical vectors.
std::vector<Eigen::VectorXd> sample_field(const FieldCovariance& cov, int n_samples,
                                          std::uint64_t seed);

}  // namespace subwigner
