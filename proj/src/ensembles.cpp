#include "subwigner/ensembles.hpp"

#include <algorithm>
#include <cmath>

#include "subwigner/errors.hpp"

namespace subwigner {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Closed-form moment comparisons tolerate parameter roundoff (e.g. atom
// sqrt(3) squares to 3 only up to one ulp) but nothing statistical.
constexpr double kMomentTol = 1e-12;

}  // namespace

void EntryDistribution::validate() const {
  switch (kind) {
    case DistKind::GaussianReal:
      if (!(a > 0)) throw ValidationError("GaussianReal: variance must be > 0");
      break;
    case DistKind::ThreePointReal:
      if (!(a > 0)) throw ValidationError("ThreePointReal: atom must be > 0");
      if (!(p >= 0 && p <= 0.5))
        throw ValidationError("ThreePointReal: weight must lie in [0, 1/2]");
      break;
    case DistKind::RademacherScaled:
      if (!(a > 0)) throw ValidationError("RademacherScaled: scale must be > 0");
      break;
    case DistKind::GaussianComplex:
      if (!(a > 0)) throw ValidationError("GaussianComplex: per-component variance must be > 0");
      break;
    case DistKind::UniformPhaseRadial:
      if (!(a > 0)) throw ValidationError("UniformPhaseRadial: radius must be > 0");
      if (!(p >= 0 && p <= 1)) throw ValidationError("UniformPhaseRadial: weight must lie in [0, 1]");
      break;
  }
}

Moments analytic_moments(const EntryDistribution& dist) {
  dist.validate();
  switch (dist.kind) {
    case DistKind::GaussianReal:
      return {0.0, dist.a, 3.0 * dist.a * dist.a};
    case DistKind::ThreePointReal: {
      const double a2 = dist.a * dist.a;
      return {0.0, 2.0 * dist.p * a2, 2.0 * dist.p * a2 * a2};
    }
    case DistKind::RademacherScaled: {
      const double s2 = dist.a * dist.a;
      return {0.0, s2, s2 * s2};
    }
    case DistKind::GaussianComplex:
      // |Z|^2 is exponential with mean 2v, so E|Z|^4 = 2 (E|Z|^2)^2.
      return {0.0, 2.0 * dist.a, 8.0 * dist.a * dist.a};
    case DistKind::UniformPhaseRadial: {
      const double a2 = dist.a * dist.a;
      return {0.0, dist.p * a2, dist.p * a2 * a2};
    }
  }
  throw ValidationError("analytic_moments: unknown distribution kind");
}

EnsembleValidation validate_ensemble(const EnsembleSpec& spec) {
  EnsembleValidation v;
  auto violate = [&](const std::string& name) {
    v.pass = false;
    v.violations.push_back(name);
  };

  if (spec.beta != 1 && spec.beta != 2) {
    violate("beta: must be 1 or 2");
    return v;
  }
  try {
    spec.offdiag.validate();
    spec.diag.validate();
  } catch (const ValidationError& e) {
    violate(std::string("parameters: ") + e.what());
    return v;
  }

  if (spec.diag.is_complex()) violate("diag: must be real-valued");
  if (spec.beta == 1 && spec.offdiag.is_complex())
    violate("offdiag: must be real-valued for beta=1");
  if (spec.beta == 2 && !spec.offdiag.is_complex())
    violate("offdiag: must be complex-valued for beta=2");
  if (!v.pass) return v;

  const Moments off = analytic_moments(spec.offdiag);
  const Moments dia = analytic_moments(spec.diag);
  const double want_m2 = 1.0;
  const double want_m4 = spec.beta == 1 ? 3.0 : 2.0;
  const double want_diag_m2 = spec.beta == 1 ? 2.0 : 1.0;

  if (std::abs(off.m1) > kMomentTol) violate("offdiag mean: E Z != 0");
  if (std::abs(dia.m1) > kMomentTol) violate("diag mean: E Y != 0");
  if (std::abs(off.m2 - want_m2) > kMomentTol) violate("offdiag variance: E Z^2 != 1");
  if (std::abs(off.m4 - want_m4) > kMomentTol)
    violate(spec.beta == 1 ? "offdiag fourth moment: E Z^4 != 3"
                           : "offdiag fourth moment: E|Z|^4 != 2");
  if (std::abs(dia.m2 - want_diag_m2) > kMomentTol)
    violate(spec.beta == 1 ? "diag variance: E Y^2 != 2" : "diag variance: E Y^2 != 1");
  return v;
}

void require_valid(const EnsembleSpec& spec) {
  const EnsembleValidation v = validate_ensemble(spec);
  if (v.pass) return;
  std::string msg = "ensemble fails moment constraints:";
  for (const auto& s : v.violations) msg += " [" + s + "]";
  throw ValidationError(msg);
}

namespace {

std::complex<double> draw(const EntryDistribution& dist, std::uint64_t b0, std::uint64_t b1) {
  switch (dist.kind) {
    case DistKind::GaussianReal:
      return {std::sqrt(dist.a) * rng::gauss(b0, b1), 0.0};
    case DistKind::ThreePointReal: {
      const double u = rng::uniform01(b0);
      if (u < dist.p) return {dist.a, 0.0};
      if (u < 2.0 * dist.p) return {-dist.a, 0.0};
      return {0.0, 0.0};
    }
    case DistKind::RademacherScaled:
      return {rng::uniform01(b0) < 0.5 ? dist.a : -dist.a, 0.0};
    case DistKind::GaussianComplex:
      return std::sqrt(dist.a) * rng::gauss_pair(b0, b1);
    case DistKind::UniformPhaseRadial: {
      // Radial and angular parts come from independent key streams.
      if (rng::uniform01(b0) >= dist.p) return {0.0, 0.0};
      const double theta = kTwoPi * rng::uniform01(b1);
      return {dist.a * std::cos(theta), dist.a * std::sin(theta)};
    }
  }
  throw ValidationError("entry: unknown distribution kind");
}

}  // namespace

std::complex<double> entry(const EnsembleSpec& spec, const EntryKey& key) {
  if (key.i < 1 || key.j < 1) throw ValidationError("entry: indices must be >= 1");
  const std::uint64_t lo = std::min(key.i, key.j);
  const std::uint64_t hi = std::max(key.i, key.j);
  const bool diag = lo == hi;
  const EntryDistribution& dist = diag ? spec.diag : spec.offdiag;
  const std::uint64_t b0 = rng::keyed_bits(key.seed, key.replicate, lo, hi, rng::kStreamEntry);
  const std::uint64_t b1 = rng::keyed_bits(key.seed, key.replicate, lo, hi, rng::kStreamEntry + 1);
  std::complex<double> v = draw(dist, b0, b1);
  if (spec.beta == 2 && key.i > key.j) v = std::conj(v);
  return v;
}

}  // namespace subwigner
