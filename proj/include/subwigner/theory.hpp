#pragma once
#include <complex>
#include <utility>

#include "subwigner/indexing.hpp"

// The limiting covariance of centered, L^{-k/2}-normalized trace statistics
// of overlapping Wigner submatrices, in three equivalent forms, plus the
// Chebyshev decorrelation limit, the half-plane parametrization Omega, and
// the correlated-GFF kernel.

namespace subwigner {

struct CovarianceParams {
  int kp = 1;
  int kq = 1;
  double bp = 1.0;  // lim |B_p| / L
  double bq = 1.0;
  double c = 0.0;  // lim |B_p ∩ B_q| / L, 0 <= c <= min(bp, bq)
  int beta = 1;

  void validate() const;
};

// Binomial-coefficient form: (1/beta) * sum over r of
//   2r binom(kp,(kp-r)/2) binom(kq,(kq-r)/2) c^r bp^{(kp-r)/2} bq^{(kq-r)/2},
// over 1 <= r <= min(kp,kq) with kp-r and kq-r even; empty sum is 0.
double limit_covariance_series(const CovarianceParams& p);

// Three-term Catalan form (single-vertex gluing, edge gluing, r-cycles with
// pendant trees); coefficients assembled through catalan_composition_sum.
// Agrees with the series form integer-exactly.
double limit_covariance_catalan(const CovarianceParams& p);

// Double contour integral over |z| = rz, |w| = rw (requires (c/bp) rz < rw),
// trapezoid rule in both angles.
double limit_covariance_contour(const CovarianceParams& p, double rz, double rw, int order);
// Default radii rz = sqrt(bp), rw = 2 sqrt(bq), which separate the pole for
// every admissible parameter set.
double limit_covariance_contour(const CovarianceParams& p, int order = 256);

// Kernel-integral form over half circles |z|^2 = bp, |w|^2 = bq with the
// logarithmic kernel; Gauss-Legendre in both angles.  The case
// c = sqrt(bp bq) (kernel singular on the diagonal) is integrated in rotated
// coordinates with a graded rule.
double limit_covariance_kernel_integral(const CovarianceParams& p, int order = 256);

// Decorrelation limit for rescaled Chebyshev traces:
//   delta_{kp,kq} * (kp / (2 beta)) * (c / sqrt(bp bq))^{kp}.
double chebyshev_limit_covariance(int kp, int kq, double bp, double bq, double c, int beta);

// Omega: (x, y) with |x| <= 2 sqrt(y) -> x/2 + i sqrt(y - x^2/4).
std::complex<double> omega(double x, double y);
// Inverse: z -> (2 Re z, |z|^2), defined on the closed upper half-plane.
std::pair<double, double> omega_inverse(std::complex<double> z);

// Correlated-GFF covariance kernel
//   C_ij(z, w) = (2 pi)^{-1} ln |(alpha - z w) / (alpha - z conj(w))|
// with alpha = alpha(i, |z|^2; j, |w|^2).  Returns +infinity on the same-sheet
// diagonal z == w.
double gff_kernel(std::size_t i, std::complex<double> z, std::size_t j, std::complex<double> w,
                  const GoodFamily& family);

// Limiting covariance of the height-function moments M_{i,y,k}:
//   (beta pi / 2) / ((k+1)(k'+1)) * series(k+1, k'+1, y, y', alpha(i,y;j,y')).
double height_moment_limit_covariance(std::size_t i, double y, int k, std::size_t j, double yp,
                                      int k2, const GoodFamily& family, int beta);

}  // namespace subwigner
