#include <doctest.h>

#include <cmath>
#include <complex>

#include "subwigner/ensembles.hpp"
#include "subwigner/errors.hpp"

using namespace subwigner;

TEST_CASE("analytic moments: closed forms") {
  const Moments tp = analytic_moments(EntryDistribution::three_point_real(std::sqrt(3.0), 1.0 / 6.0));
  CHECK(tp.m1 == 0.0);
  CHECK(tp.m2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tp.m4 == doctest::Approx(3.0).epsilon(1e-14));

  const Moments gc = analytic_moments(EntryDistribution::gaussian_complex(0.5));
  CHECK(gc.m1 == 0.0);
  CHECK(gc.m2 == doctest::Approx(1.0));
  CHECK(gc.m4 == doctest::Approx(2.0));

  const Moments rd = analytic_moments(EntryDistribution::rademacher_scaled(std::sqrt(2.0)));
  CHECK(rd.m2 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rd.m4 == doctest::Approx(4.0).epsilon(1e-14));

  const Moments up = analytic_moments(EntryDistribution::uniform_phase_radial(std::sqrt(2.0), 0.5));
  CHECK(up.m2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(up.m4 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("analytic moments: complex gaussian fourth moment by quadrature") {
  // E|Z|^4 for Z = X + iY, X,Y ~ N(0, v): |Z|^2 is exponential with mean 2v,
  // so E|Z|^4 = 8 v^2.  Confirm by integrating r^5 e^{-r^2/(2v)} / v.
  const double v = 0.5;
  double m4 = 0.0, m2 = 0.0;
  const int n = 200000;
  const double dr = 30.0 / n;
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) * dr;
    const double dens = r / v * std::exp(-r * r / (2.0 * v));  // Rayleigh
    m2 += r * r * dens * dr;
    m4 += r * r * r * r * dens * dr;
  }
  CHECK(m2 == doctest::Approx(2.0 * v).epsilon(1e-6));
  CHECK(m4 == doctest::Approx(8.0 * v * v).epsilon(1e-6));
}

TEST_CASE("parameter domain errors") {
  CHECK_THROWS_AS(analytic_moments(EntryDistribution::gaussian_real(0.0)), ValidationError);
  CHECK_THROWS_AS(analytic_moments(EntryDistribution::gaussian_real(-1.0)), ValidationError);
  CHECK_THROWS_AS(analytic_moments(EntryDistribution::three_point_real(1.0, 0.7)),
                  ValidationError);
  CHECK_THROWS_AS(analytic_moments(EntryDistribution::three_point_real(1.0, -0.1)),
                  ValidationError);
  CHECK_THROWS_AS(analytic_moments(EntryDistribution::uniform_phase_radial(1.0, 1.5)),
                  ValidationError);
  CHECK_THROWS_AS(analytic_moments(EntryDistribution::rademacher_scaled(-2.0)), ValidationError);
}

TEST_CASE("validate_ensemble") {
  CHECK(validate_ensemble(EnsembleSpec::goe()).pass);
  CHECK(validate_ensemble(EnsembleSpec::gue()).pass);

  const EnsembleSpec matched{1, EntryDistribution::three_point_real(std::sqrt(3.0), 1.0 / 6.0),
                             EntryDistribution::rademacher_scaled(std::sqrt(2.0))};
  CHECK(validate_ensemble(matched).pass);

  const EnsembleSpec phase{2, EntryDistribution::uniform_phase_radial(std::sqrt(2.0), 0.5),
                           EntryDistribution::gaussian_real(1.0)};
  CHECK(validate_ensemble(phase).pass);

  // wrong diagonal variance for beta=1
  EnsembleSpec bad = EnsembleSpec::goe();
  bad.diag = EntryDistribution::gaussian_real(1.0);
  const EnsembleValidation v = validate_ensemble(bad);
  CHECK_FALSE(v.pass);
  REQUIRE(v.violations.size() == 1);
  CHECK(v.violations[0].find("diag variance") != std::string::npos);

  // real off-diagonal is not acceptable for beta=2
  EnsembleSpec bad2 = EnsembleSpec::gue();
  bad2.offdiag = EntryDistribution::gaussian_real(1.0);
  CHECK_FALSE(validate_ensemble(bad2).pass);

  EnsembleSpec bad3 = EnsembleSpec::goe();
  bad3.beta = 3;
  CHECK_FALSE(validate_ensemble(bad3).pass);
}

TEST_CASE("entry: symmetry and determinism contracts") {
  const EnsembleSpec goe = EnsembleSpec::goe();
  const EnsembleSpec gue = EnsembleSpec::gue();

  // determinism
  const auto v1 = entry(goe, {7, 3, 5, 9});
  const auto v2 = entry(goe, {7, 3, 5, 9});
  CHECK(v1 == v2);

  // bitwise symmetry for beta=1
  CHECK(entry(goe, {7, 3, 5, 9}) == entry(goe, {7, 3, 9, 5}));
  CHECK(entry(goe, {7, 3, 5, 9}).imag() == 0.0);

  // conjugate symmetry for beta=2
  const auto h1 = entry(gue, {11, 0, 3, 5});
  const auto h2 = entry(gue, {11, 0, 5, 3});
  CHECK(h1 == std::conj(h2));
  CHECK(h1.imag() != 0.0);

  // diagonal entries are real for both symmetry classes
  CHECK(entry(gue, {11, 0, 4, 4}).imag() == 0.0);

  // distinct seeds and replicates decouple
  CHECK(entry(goe, {7, 3, 5, 9}) != entry(goe, {8, 3, 5, 9}));
  CHECK(entry(goe, {7, 3, 5, 9}) != entry(goe, {7, 4, 5, 9}));

  CHECK_THROWS_AS(entry(goe, {0, 0, 0, 1}), ValidationError);
}

TEST_CASE("entry: empirical moments of ThreePointReal over 1e6 keyed draws") {
  const EnsembleSpec spec{1, EntryDistribution::three_point_real(std::sqrt(3.0), 1.0 / 6.0),
                          EntryDistribution::rademacher_scaled(std::sqrt(2.0))};
  const int n = 1000000;
  double s2 = 0, s4 = 0;
  for (int r = 0; r < n; ++r) {
    const double z = entry(spec, {2024, static_cast<std::uint64_t>(r), 1, 2}).real();
    s2 += z * z;
    s4 += z * z * z * z;
  }
  s2 /= n;
  s4 /= n;
  // standard errors from the analytic variances of Z^2 and Z^4:
  //   Var(Z^2) = m4 - m2^2 = 2,  Var(Z^4) = m8 - m4^2 = 2p a^8 - 9 = 18.
  const double se2 = std::sqrt(2.0 / n);
  const double se4 = std::sqrt(18.0 / n);
  CHECK(std::abs(s2 - 1.0) <= 4.0 * se2);
  CHECK(std::abs(s4 - 3.0) <= 4.0 * se4);
}

TEST_CASE("entry: chi-square of ThreePointReal atom frequencies") {
  const double a = std::sqrt(3.0), p = 1.0 / 6.0;
  const EnsembleSpec spec{1, EntryDistribution::three_point_real(a, p),
                          EntryDistribution::rademacher_scaled(std::sqrt(2.0))};
  const int n = 1000000;
  long plus = 0, minus = 0, zero = 0;
  for (int r = 0; r < n; ++r) {
    const double z = entry(spec, {77, static_cast<std::uint64_t>(r), 2, 6}).real();
    if (z > 0)
      ++plus;
    else if (z < 0)
      ++minus;
    else
      ++zero;
  }
  const double ep = n * p, ez = n * (1 - 2 * p);
  const double chi2 = (plus - ep) * (plus - ep) / ep + (minus - ep) * (minus - ep) / ep +
                      (zero - ez) * (zero - ez) / ez;
  // 2 degrees of freedom, alpha = 0.001 critical value
  CHECK(chi2 < 13.816);
}

TEST_CASE("entry: distinct canonical keys are uncorrelated") {
  const EnsembleSpec goe = EnsembleSpec::goe();
  const int n = 100000;
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int r = 0; r < n; ++r) {
    const double x = entry(goe, {5, static_cast<std::uint64_t>(r), 1, 2}).real();
    const double y = entry(goe, {5, static_cast<std::uint64_t>(r), 1, 3}).real();
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double corr = (sxy / n - sx / n * sy / n) /
                      std::sqrt((sxx / n - sx / n * sx / n) * (syy / n - sy / n * sy / n));
  CHECK(std::abs(corr) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("entry: uniform phase radial hits the circle or zero") {
  const EnsembleSpec spec{2, EntryDistribution::uniform_phase_radial(std::sqrt(2.0), 0.5),
                          EntryDistribution::gaussian_real(1.0)};
  int on_circle = 0, at_zero = 0;
  const int n = 20000;
  for (int r = 0; r < n; ++r) {
    const std::complex<double> z = entry(spec, {3, static_cast<std::uint64_t>(r), 1, 2});
    if (std::abs(z) == 0.0)
      ++at_zero;
    else if (std::abs(std::abs(z) - std::sqrt(2.0)) < 1e-12)
      ++on_circle;
  }
  CHECK(on_circle + at_zero == n);
  CHECK(on_circle > n / 2 - 4 * 71);  // 4 sigma around n/2, sigma = sqrt(n)/2
  CHECK(on_circle < n / 2 + 4 * 71);
}
