#include "subwigner/gff.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "subwigner/errors.hpp"
#include "subwigner/keyed_rng.hpp"
#include "subwigner/theory.hpp"

namespace subwigner {
namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

FieldCovariance build_covariance(const SheetGrid& grid, double epsilon) {
  if (grid.points.empty()) throw ValidationError("build_covariance: empty grid");
  if (!(epsilon > 0)) throw ValidationError("build_covariance: epsilon must be > 0");

  const int n = static_cast<int>(grid.points.size());
  for (int a = 0; a < n; ++a) {
    const auto& pa = grid.points[a];
    if (!(pa.z.imag() > epsilon))
      throw ValidationError("build_covariance: point " + std::to_string(a) +
                            " needs Im z > epsilon");
    if (pa.sheet >= grid.family.size())
      throw ValidationError("build_covariance: point " + std::to_string(a) +
                            " references an unknown sheet");
    for (int b = 0; b < a; ++b) {
      const auto& pb = grid.points[b];
      if (pa.sheet == pb.sheet && pa.z == pb.z)
        throw ValidationError("build_covariance: duplicate grid points at indices " +
                              std::to_string(b) + " and " + std::to_string(a) +
                              " (kernel diagonal is infinite)");
    }
  }

  FieldCovariance cov;
  cov.grid = grid;
  cov.epsilon = epsilon;
  cov.matrix.resize(n, n);
  for (int a = 0; a < n; ++a) {
    cov.matrix(a, a) = std::log(2.0 * grid.points[a].z.imag() / epsilon) / (2.0 * kPi);
    for (int b = 0; b < a; ++b) {
      const double v = gff_kernel(grid.points[a].sheet, grid.points[a].z,
                                  grid.points[b].sheet, grid.points[b].z, grid.family);
      // coinciding points on fully-overlapping sheets diverge just like
      // same-sheet duplicates
      if (!std::isfinite(v))
        throw ValidationError("build_covariance: kernel diverges between points " +
                              std::to_string(b) + " and " + std::to_string(a));
      cov.matrix(a, b) = v;
      cov.matrix(b, a) = v;
    }
  }
  return cov;
}

PivotedFactor pivoted_ldlt(const Eigen::MatrixXd& A, double clip_threshold) {
  if (A.rows() != A.cols()) throw ValidationError("pivoted_ldlt: matrix must be square");
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd work = A;
  PivotedFactor f;
  f.L = Eigen::MatrixXd::Zero(n, n);
  f.d = Eigen::VectorXd::Zero(n);
  f.perm.resize(n);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;

  f.min_pivot = std::numeric_limits<double>::infinity();
  int k = 0;
  for (; k < n; ++k) {
    // greedy diagonal pivot
    int best = k;
    for (int i = k + 1; i < n; ++i)
      if (work(i, i) > work(best, best)) best = i;
    if (best != k) {
      work.row(k).swap(work.row(best));
      work.col(k).swap(work.col(best));
      f.L.row(k).swap(f.L.row(best));
      std::swap(idx[k], idx[best]);
    }
    const double pivot = work(k, k);
    if (pivot <= clip_threshold) {
      // remaining block is clipped; the smallest leftover diagonal entry is
      // the most negative pivot candidate
      for (int i = k; i < n; ++i) f.min_pivot = std::min(f.min_pivot, work(i, i));
      break;
    }
    f.min_pivot = std::min(f.min_pivot, pivot);
    f.d(k) = pivot;
    f.L(k, k) = 1.0;
    for (int i = k + 1; i < n; ++i) f.L(i, k) = work(i, k) / pivot;
    for (int j = k + 1; j < n; ++j)
      for (int i = j; i < n; ++i) work(i, j) -= f.L(i, k) * work(j, k);
    for (int j = k + 1; j < n; ++j)
      for (int i = k + 1; i < j; ++i) work(i, j) = work(j, i);
  }
  f.rank = k;
  f.clipped = n - k;
  f.L.conservativeResize(n, f.rank);
  f.d.conservativeResize(f.rank);
  for (int i = 0; i < n; ++i) f.perm[i] = idx[i];
  if (n == 0) f.min_pivot = 0.0;
  return f;
}

PsdReport psd_check(FieldCovariance& cov, double tol) {
  if (cov.matrix.rows() != cov.matrix.cols())
    throw ValidationError("psd_check: matrix must be square");
  PsdReport r;
  r.tol = tol;
  r.max_diag = cov.matrix.diagonal().maxCoeff();
  const double scale = std::max(r.max_diag, 0.0);
  PivotedFactor f = pivoted_ldlt(cov.matrix, 1e-14 * std::max(scale, 1e-300));
  r.min_pivot = f.min_pivot;
  r.margin = scale > 0 ? f.min_pivot / scale : f.min_pivot;
  r.clipped = f.clipped;
  r.pass = f.min_pivot >= -tol * scale;
  cov.factor = std::move(f);
  cov.report = r;
  return r;
}

std::vector<Eigen::VectorXd> sample_field(const FieldCovariance& cov, int n_samples,
                                          std::uint64_t seed) {
  if (n_samples < 0) throw ValidationError("sample_field: n_samples must be >= 0");
  if (!cov.factor || !cov.report)
    throw NumericalContractError("sample_field: psd_check must run before sampling");
  if (!cov.report->pass)
    throw NumericalContractError("sample_field: covariance failed the psd check");

  const PivotedFactor& f = *cov.factor;
  const int n = static_cast<int>(cov.matrix.rows());
  Eigen::VectorXd sqrt_d = f.d.array().sqrt();
  std::vector<Eigen::VectorXd> out;
  out.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    Eigen::VectorXd g(f.rank);
    for (int m = 0; m < f.rank; ++m) {
      const std::uint64_t b0 =
          rng::keyed_bits(seed, s, m, 0, rng::kStreamField);
      const std::uint64_t b1 =
          rng::keyed_bits(seed, s, m, 1, rng::kStreamField);
      g(m) = rng::gauss(b0, b1);
    }
    Eigen::VectorXd y = f.L * (sqrt_d.cwiseProduct(g));
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(f.perm[i]) = y(i);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace subwigner
