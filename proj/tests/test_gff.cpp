#include <doctest.h>

#include <cmath>
#include <complex>

#include "subwigner/errors.hpp"
#include "subwigner/gff.hpp"
#include "subwigner/keyed_rng.hpp"

using namespace subwigner;
using cd = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

SheetGrid grid_of(std::vector<SheetPoint> pts) { return {std::move(pts), example_family()}; }

// deterministic scattered points with a minimum separation
std::vector<SheetPoint> random_grid(std::uint64_t seed, int n_points, int n_sheets) {
  std::vector<SheetPoint> pts;
  std::uint64_t ctr = 0;
  while (static_cast<int>(pts.size()) < n_points) {
    const double re = 4.0 * rng::uniform01(rng::keyed_bits(seed, 0, ctr, 0, 7)) - 2.0;
    const double im = 0.2 + 2.0 * rng::uniform01(rng::keyed_bits(seed, 0, ctr, 1, 7));
    const std::size_t sheet =
        rng::keyed_bits(seed, 0, ctr, 2, 7) % static_cast<std::uint64_t>(n_sheets);
    ++ctr;
    bool ok = true;
    for (const auto& p : pts)
      if (p.sheet == sheet && std::abs(p.z - cd(re, im)) < 0.05) ok = false;
    if (ok) pts.push_back({sheet, cd(re, im)});
  }
  return pts;
}

}  // namespace

TEST_CASE("build_covariance: hand checks") {
  // two points on one sheet: off-diagonal is the Green function value
  FieldCovariance cov = build_covariance(grid_of({{0, cd(0, 1)}, {0, cd(0, 2)}}), 1e-3);
  CHECK(cov.matrix(0, 1) == doctest::Approx(std::log(3.0) / (2 * kPi)).epsilon(1e-12));
  CHECK(cov.matrix(1, 0) == cov.matrix(0, 1));
  // regularized diagonal: (2 pi)^{-1} ln(2 Im z / eps)
  CHECK(cov.matrix(0, 0) == doctest::Approx(std::log(2.0 / 1e-3) / (2 * kPi)));
  CHECK(cov.matrix(1, 1) == doctest::Approx(std::log(4.0 / 1e-3) / (2 * kPi)));

  // disjoint sheets (evens vs odds): off-diagonal block identically zero
  FieldCovariance cov2 = build_covariance(grid_of({{1, cd(0.5, 1)}, {2, cd(0.5, 1)}}), 1e-3);
  CHECK(cov2.matrix(0, 1) == 0.0);

  // duplicate points rejected with the offending indices
  CHECK_THROWS_WITH_AS(build_covariance(grid_of({{0, cd(0, 1)}, {0, cd(0, 1)}}), 1e-3),
                       doctest::Contains("indices 0 and 1"), ValidationError);
  // Im z must exceed the regularization radius
  CHECK_THROWS_AS(build_covariance(grid_of({{0, cd(0, 1e-4)}}), 1e-3), ValidationError);
}

TEST_CASE("single-sheet grids match the Dirichlet Green function matrix") {
  const std::vector<SheetPoint> pts = {{0, cd(-1, 1)}, {0, cd(0.5, 0.7)}, {0, cd(1.2, 2.1)}};
  FieldCovariance cov = build_covariance(grid_of(pts), 1e-3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      const cd z = pts[a].z, w = pts[b].z;
      const double green = -std::log(std::abs((z - w) / (z - std::conj(w)))) / (2 * kPi);
      CHECK(cov.matrix(a, b) == doctest::Approx(green).epsilon(1e-12));
    }
}

TEST_CASE("covariance matrices are exactly symmetric") {
  FieldCovariance cov = build_covariance(grid_of(random_grid(17, 15, 4)), 1e-3);
  for (int a = 0; a < 15; ++a)
    for (int b = 0; b < 15; ++b) CHECK(cov.matrix(a, b) == cov.matrix(b, a));
}

TEST_CASE("nested grids give principal submatrices") {
  const std::vector<SheetPoint> big = {{0, cd(-1, 1)}, {3, cd(0.5, 0.7)}, {1, cd(1.2, 2.1)},
                                       {0, cd(0.3, 0.4)}};
  const std::vector<SheetPoint> small = {{0, cd(-1, 1)}, {3, cd(0.5, 0.7)}};
  FieldCovariance cb = build_covariance(grid_of(big), 1e-3);
  FieldCovariance cs = build_covariance(grid_of(small), 1e-3);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(cb.matrix(a, b) == cs.matrix(a, b));
}

TEST_CASE("psd_check: constructed cases") {
  // 1x1 positive
  FieldCovariance c1 = build_covariance(grid_of({{0, cd(0, 1)}}), 1e-3);
  CHECK(psd_check(c1, 1e-8).pass);

  // indefinite matrix fails with a negative pivot near the eigenvalue -1
  FieldCovariance bad;
  bad.matrix.resize(2, 2);
  bad.matrix << 1, 2, 2, 1;
  const PsdReport rep = psd_check(bad, 1e-8);
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_pivot < -0.5);
  CHECK_THROWS_AS(sample_field(bad, 3, 1), NumericalContractError);
}

TEST_CASE("pivoted_ldlt reconstructs PSD matrices") {
  // random PSD matrix A = B B^T
  Eigen::MatrixXd B(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      B(i, j) = 2.0 * rng::uniform01(rng::keyed_bits(1, i, j, 0, 11)) - 1.0;
  const Eigen::MatrixXd A = B * B.transpose();
  const PivotedFactor f = pivoted_ldlt(A, 0.0);
  CHECK(f.rank == 5);
  Eigen::MatrixXd R = f.L * f.d.asDiagonal() * f.L.transpose();
  // undo the permutation
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) P(f.perm[i], i) = 1.0;
  R = P * R * P.transpose();
  CHECK((R - A).cwiseAbs().maxCoeff() < 1e-12 * A.cwiseAbs().maxCoeff());
  CHECK(f.min_pivot > 0.0);
}

TEST_CASE("kernel positivity margin on random multi-sheet grids") {
  // 20 deterministic grids, up to 40 points, 3 sheets of the example family
  for (int g = 0; g < 20; ++g) {
    const int n = 10 + static_cast<int>(rng::keyed_bits(g, 1, 2, 3, 4) % 31);
    FieldCovariance cov = build_covariance(grid_of(random_grid(1000 + g, n, 3)), 1e-3);
    const PsdReport rep = psd_check(cov, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.min_pivot >= -1e-8 * rep.max_diag);
  }
}

TEST_CASE("sample_field: determinism and edge cases") {
  FieldCovariance cov = build_covariance(
      grid_of({{0, cd(0, 1)}, {1, cd(0.5, 0.8)}, {3, cd(-0.3, 1.4)}}), 1e-3);
  psd_check(cov, 1e-8);

  CHECK(sample_field(cov, 0, 42).empty());
  const auto a = sample_field(cov, 5, 42);
  const auto b = sample_field(cov, 5, 42);
  REQUIRE(a.size() == 5);
  for (int s = 0; s < 5; ++s) CHECK((a[s].array() == b[s].array()).all());
  CHECK_FALSE((sample_field(cov, 5, 43)[0].array() == a[0].array()).all());

  FieldCovariance unchecked = build_covariance(grid_of({{0, cd(0, 1)}}), 1e-3);
  CHECK_THROWS_AS(sample_field(unchecked, 1, 0), NumericalContractError);
}

TEST_CASE("sample covariance of identity-covariance draws") {
  // synthetic identity covariance: sampling must reproduce it within
  // 0.02 entrywise at 1e5 samples
  FieldCovariance cov;
  cov.matrix = Eigen::MatrixXd::Identity(3, 3);
  psd_check(cov, 1e-8);
  const int n = 100000;
  const auto draws = sample_field(cov, n, 7);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
  for (const auto& x : draws) s += x * x.transpose();
  s /= n;
  CHECK((s - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("sample covariance converges to the built covariance") {
  FieldCovariance cov = build_covariance(grid_of(random_grid(5, 8, 3)), 1e-3);
  psd_check(cov, 1e-8);
  const int n = 40000;
  const auto draws = sample_field(cov, n, 11);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(8, 8);
  for (const auto& x : draws) s += x * x.transpose();
  s /= n;
  const double tol = 5.0 / std::sqrt(static_cast<double>(n)) * cov.matrix.diagonal().maxCoeff();
  CHECK((s - cov.matrix).cwiseAbs().maxCoeff() <= tol);
}
