#include "subwigner/theory.hpp"

#include <cmath>
#include <limits>

#include "subwigner/combinatorics.hpp"
#include "subwigner/errors.hpp"
#include "subwigner/quadrature.hpp"

namespace subwigner {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Shared monomial c^r bp^{(kp-r)/2} bq^{(kq-r)/2}.  Both combinatorial forms
// scale their (equal) integer coefficients by exactly this value, so their
// sums agree bitwise, not just analytically.
double monomial(const CovarianceParams& p, int r) {
  return std::pow(p.c, r) * std::pow(p.bp, (p.kp - r) / 2) * std::pow(p.bq, (p.kq - r) / 2);
}

double beta_factor(int beta) { return beta == 2 ? 0.5 : 1.0; }

}  // namespace

void CovarianceParams::validate() const {
  if (kp < 1 || kq < 1) throw ValidationError("CovarianceParams: powers must be >= 1");
  if (!(bp > 0) || !(bq > 0)) throw ValidationError("CovarianceParams: densities must be > 0");
  if (beta != 1 && beta != 2) throw ValidationError("CovarianceParams: beta must be 1 or 2");
  const double cmax = std::min(bp, bq) * (1.0 + 1e-12) + 1e-15;
  if (!(c >= 0) || c > cmax)
    throw ValidationError("CovarianceParams: need 0 <= c <= min(bp, bq)");
}

double limit_covariance_series(const CovarianceParams& p) {
  p.validate();
  double sum = 0.0;
  for (int r = 1; r <= std::min(p.kp, p.kq); ++r) {
    if ((p.kp - r) % 2 != 0 || (p.kq - r) % 2 != 0) continue;
    const BigInt coef =
        2 * r * binomial(p.kp, (p.kp - r) / 2) * binomial(p.kq, (p.kq - r) / 2);
    sum += static_cast<double>(coef) * monomial(p, r);
  }
  return beta_factor(p.beta) * sum;
}

double limit_covariance_catalan(const CovarianceParams& p) {
  p.validate();
  double sum = 0.0;
  for (int r = 1; r <= std::min(p.kp, p.kq); ++r) {
    if ((p.kp - r) % 2 != 0 || (p.kq - r) % 2 != 0) continue;
    BigInt coef;
    if (r == 1) {
      // two trees hanging from a common vertex
      coef = 2 * BigInt(p.kp) * p.kq * catalan((p.kp - 1) / 2) * catalan((p.kq - 1) / 2);
    } else if (r == 2) {
      // two trees glued along an edge
      coef = BigInt(p.kp) * p.kq * catalan(p.kp / 2) * catalan(p.kq / 2);
    } else {
      // r-cycles with pendant trees; composition sums via the binomial closed form
      const BigInt num = 2 * BigInt(p.kp) * p.kq *
                         catalan_composition_sum((p.kp - r) / 2, r) *
                         catalan_composition_sum((p.kq - r) / 2, r);
      if (num % r != 0)
        throw NumericalContractError("limit_covariance_catalan: inexact cycle division");
      coef = num / r;
    }
    sum += static_cast<double>(coef) * monomial(p, r);
  }
  return beta_factor(p.beta) * sum;
}

double limit_covariance_contour(const CovarianceParams& p, double rz, double rw, int order) {
  p.validate();
  if (order < 1) throw ValidationError("contour: order must be >= 1");
  if (p.c == 0.0) return 0.0;  // integrand vanishes identically
  const double ratio = p.c / p.bp;
  if (!(ratio * rz < rw))
    throw ValidationError("contour: pole on or outside contour, need (c/bp) rz < rw");

  using cd = std::complex<double>;
  const int n = order;
  // Trapezoid rule on both circles; mid-cell angles.  Compensated summation
  // keeps the accumulated roundoff below the 1e-8 acceptance budget even for
  // integrand magnitudes of order 1e6.
  double sum = 0.0, comp = 0.0;
  std::vector<cd> znodes(n), wnodes(n);
  for (int m = 0; m < n; ++m) {
    const double t = 2.0 * kPi * (m + 0.5) / n;
    znodes[m] = cd(rz * std::cos(t), rz * std::sin(t));
    wnodes[m] = cd(rw * std::cos(t), rw * std::sin(t));
  }
  for (int mz = 0; mz < n; ++mz) {
    const cd z = znodes[mz];
    const cd fz = std::pow(z + p.bp / z, p.kp) * z;
    for (int mw = 0; mw < n; ++mw) {
      const cd w = wnodes[mw];
      const cd den = ratio * z - w;
      const cd term = fz * std::pow(w + p.bq / w, p.kq) * w * ratio / (den * den);
      const double x = term.real() - comp;
      const double t = sum + x;
      comp = (t - sum) - x;
      sum = t;
    }
  }
  return (2.0 / p.beta) * sum / (static_cast<double>(n) * n);
}

double limit_covariance_contour(const CovarianceParams& p, int order) {
  return limit_covariance_contour(p, std::sqrt(p.bp), 2.0 * std::sqrt(p.bq), order);
}

namespace {

// x(z)^{k-1} dx/dtheta factor along z = sqrt(b) e^{i theta}:
//   F(theta) = (2 sqrt(b) cos theta)^{k-1} * 2 sqrt(b) sin theta.
double arc_factor(double sqrtb, int k, double theta) {
  return std::pow(2.0 * sqrtb * std::cos(theta), k - 1) * 2.0 * sqrtb * std::sin(theta);
}

// Regular case: tensor Gauss-Legendre over (0,pi)^2 with interlaced orders
// (n, n+1), so no node pair ever sits on the theta = phi diagonal.
double kernel_integral_regular(const CovarianceParams& p, int order) {
  const double sp = std::sqrt(p.bp), sq = std::sqrt(p.bq);
  const GaussLegendre gth = gauss_legendre(order, 0.0, kPi);
  const GaussLegendre gph = gauss_legendre(order + 1, 0.0, kPi);

  std::vector<double> fth(gth.nodes.size()), gph_f(gph.nodes.size());
  for (std::size_t i = 0; i < gth.nodes.size(); ++i)
    fth[i] = arc_factor(sp, p.kp, gth.nodes[i]) * gth.weights[i];
  for (std::size_t j = 0; j < gph.nodes.size(); ++j)
    gph_f[j] = arc_factor(sq, p.kq, gph.nodes[j]) * gph.weights[j];

  using cd = std::complex<double>;
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < gth.nodes.size(); ++i) {
    const cd z = sp * cd(std::cos(gth.nodes[i]), std::sin(gth.nodes[i]));
    double row = 0.0;
    for (std::size_t j = 0; j < gph.nodes.size(); ++j) {
      const cd w = sq * cd(std::cos(gph.nodes[j]), std::sin(gph.nodes[j]));
      const double kernel =
          std::log(std::abs((p.c - z * w) / (p.c - z * std::conj(w)))) / (2.0 * kPi);
      row += kernel * gph_f[j];
    }
    const double x = row * fth[i] - comp;
    const double t = sum + x;
    comp = (t - sum) - x;
    sum = t;
  }
  return (2.0 * p.kp * p.kq / (p.beta * kPi)) * sum;
}

// Singular case c = sqrt(bp bq) (forces bp = bq = c): the kernel reduces to
//   (2 pi)^{-1} [ ln|sin((theta+phi)/2)| - ln|sin((theta-phi)/2)| ],
// log-singular along theta = phi.  Rotate to sum/difference coordinates so
// the singular factor is one-dimensional, then integrate it against the
// correlation functions H with a grading u = pi t^4 toward the singular
// endpoint.  Empirically exact to ~1e-10 absolute over k <= 6, b <= 2 at the
// default orders.
double kernel_integral_singular(const CovarianceParams& p, int order) {
  const double sb = std::sqrt(p.bp);
  const int n_outer = std::max(64, order / 2);
  const int n_inner = std::max(48, (3 * order) / 8);
  const GaussLegendre inner = gauss_legendre(n_inner);
  const GaussLegendre outer = gauss_legendre(n_outer, 0.0, 1.0);

  auto F = [&](double t) { return arc_factor(sb, p.kp, t); };
  auto G = [&](double t) { return arc_factor(sb, p.kq, t); };

  // H-(u) = int F(th) G(th - u) dth over th in (max(0,u), min(pi, pi+u))
  auto Hm = [&](double u) {
    const double lo = std::max(0.0, u), hi = std::min(kPi, kPi + u);
    if (hi <= lo) return 0.0;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double s = 0;
    for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
      const double th = mid + half * inner.nodes[j];
      s += inner.weights[j] * F(th) * G(th - u);
    }
    return s * half;
  };
  // H+(s) = int F(th) G(s - th) dth over th in (max(0,s-pi), min(pi, s))
  auto Hp = [&](double sv) {
    const double lo = std::max(0.0, sv - kPi), hi = std::min(kPi, sv);
    if (hi <= lo) return 0.0;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double s = 0;
    for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
      const double th = mid + half * inner.nodes[j];
      s += inner.weights[j] * F(th) * G(sv - th);
    }
    return s * half;
  };

  auto logsin = [](double v) { return std::log(std::abs(std::sin(0.5 * v))); };

  double Sm = 0.0, Sp = 0.0;
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    const double t = outer.nodes[i];
    const double u = kPi * t * t * t * t;
    const double jac = outer.weights[i] * kPi * 4.0 * t * t * t;
    Sm += jac * (logsin(-u) * Hm(-u) + logsin(u) * Hm(u));
    Sp += jac * (logsin(u) * Hp(u) + logsin(2.0 * kPi - u) * Hp(2.0 * kPi - u));
  }
  return (2.0 * p.kp * p.kq / (p.beta * kPi)) * (Sp - Sm) / (2.0 * kPi);
}

}  // namespace

double limit_covariance_kernel_integral(const CovarianceParams& p, int order) {
  p.validate();
  if (order < 8) throw ValidationError("kernel integral: order must be >= 8");
  if (p.c == 0.0) return 0.0;  // kernel vanishes at every node
  const double root = std::sqrt(p.bp * p.bq);
  if (std::abs(p.c - root) <= 1e-9 * std::max(1.0, root))
    return kernel_integral_singular(p, order);
  return kernel_integral_regular(p, order);
}

double chebyshev_limit_covariance(int kp, int kq, double bp, double bq, double c, int beta) {
  CovarianceParams p{kp, kq, bp, bq, c, beta};
  p.validate();
  if (kp != kq) return 0.0;
  return (static_cast<double>(kp) / (2.0 * beta)) * std::pow(c / std::sqrt(bp * bq), kp);
}

std::complex<double> omega(double x, double y) {
  if (!(y > 0)) throw ValidationError("omega: y must be > 0");
  const double rad = y - 0.25 * x * x;
  if (rad < -1e-12 * std::max(1.0, y))
    throw ValidationError("omega: (x, y) outside the domain |x| <= 2 sqrt(y)");
  return {0.5 * x, std::sqrt(std::max(0.0, rad))};
}

std::pair<double, double> omega_inverse(std::complex<double> z) {
  if (z.imag() < 0) throw ValidationError("omega_inverse: Im z must be >= 0");
  return {2.0 * z.real(), std::norm(z)};
}

double gff_kernel(std::size_t i, std::complex<double> z, std::size_t j, std::complex<double> w,
                  const GoodFamily& family) {
  if (!(z.imag() > 0) || !(w.imag() > 0))
    throw ValidationError("gff_kernel: points must lie in the open upper half-plane");
  if (i == j && z == w) return std::numeric_limits<double>::infinity();
  const double a = family.alpha(i, std::norm(z), j, std::norm(w));
  const double num = std::abs(a - z * w);
  const double den = std::abs(a - z * std::conj(w));
  return std::log(num / den) / (2.0 * kPi);
}

double height_moment_limit_covariance(std::size_t i, double y, int k, std::size_t j, double yp,
                                      int k2, const GoodFamily& family, int beta) {
  if (k < 0 || k2 < 0) throw ValidationError("height moments need k >= 0");
  if (!(y > 0) || !(yp > 0)) throw ValidationError("height moments need y > 0");
  CovarianceParams p{k + 1, k2 + 1, y, yp, family.alpha(i, y, j, yp), beta};
  const double pref = (beta * kPi / 2.0) /
                      (static_cast<double>(k + 1) * static_cast<double>(k2 + 1));
  return pref * limit_covariance_series(p);
}

}  // namespace subwigner
