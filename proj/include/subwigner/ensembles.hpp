#pragma once
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "subwigner/keyed_rng.hpp"

// Moment-matched entry distributions and the keyed Wigner entry generator.
// A Wigner matrix is conceptually one fixed infinite matrix per (seed,
// replicate); entries are drawn on demand from canonical index pairs, so
// overlapping submatrices share entries exactly and nothing is stored.

namespace subwigner {

enum class DistKind {
  GaussianReal,        // N(0, variance)
  ThreePointReal,      // +a w.p. p, -a w.p. p, 0 otherwise
  RademacherScaled,    // +/- scale with equal probability
  GaussianComplex,     // re, im independent N(0, variance) each
  UniformPhaseRadial,  // a * exp(i Theta) w.p. p (Theta uniform), else 0
};

struct EntryDistribution {
  DistKind kind = DistKind::GaussianReal;
  double a = 1.0;  // variance / atom / scale / per-component variance / radius
  double p = 0.0;  // weight, for the two atomic kinds

  static EntryDistribution gaussian_real(double variance) {
    return {DistKind::GaussianReal, variance, 0.0};
  }
  static EntryDistribution three_point_real(double atom, double weight) {
    return {DistKind::ThreePointReal, atom, weight};
  }
  static EntryDistribution rademacher_scaled(double scale) {
    return {DistKind::RademacherScaled, scale, 0.0};
  }
  static EntryDistribution gaussian_complex(double per_component_variance) {
    return {DistKind::GaussianComplex, per_component_variance, 0.0};
  }
  static EntryDistribution uniform_phase_radial(double radius, double weight) {
    return {DistKind::UniformPhaseRadial, radius, weight};
  }

  bool is_complex() const {
    return kind == DistKind::GaussianComplex || kind == DistKind::UniformPhaseRadial;
  }
  // Rejects out-of-domain parameters (weights outside the valid range,
  // nonpositive scales).
  void validate() const;
};

struct Moments {
  double m1;  // mean (always 0 for valid kinds)
  double m2;  // E Z^2, or E|Z|^2 for complex kinds
  double m4;  // E Z^4, or E|Z|^4
};

// Closed-form moments; throws ValidationError on invalid parameters.
Moments analytic_moments(const EntryDistribution& dist);

struct EnsembleSpec {
  int beta = 1;  // 1 = real symmetric, 2 = Hermitian
  EntryDistribution offdiag;
  EntryDistribution diag;

  static EnsembleSpec goe() {
    return {1, EntryDistribution::gaussian_real(1.0), EntryDistribution::gaussian_real(2.0)};
  }
  static EnsembleSpec gue() {
    return {2, EntryDistribution::gaussian_complex(0.5), EntryDistribution::gaussian_real(1.0)};
  }
};

struct EnsembleValidation {
  bool pass = true;
  std::vector<std::string> violations;
};

// Checks the beta-dependent moment constraints in closed form:
//   beta=1: E Z^2 = 1, E Z^4 = 3, E Y^2 = 2;
//   beta=2: E|Z|^2 = 1, E|Z|^4 = 2, E Y^2 = 1 (offdiag must be complex-valued).
EnsembleValidation validate_ensemble(const EnsembleSpec& spec);

// Throwing variant used by the pipeline entry points.
void require_valid(const EnsembleSpec& spec);

struct EntryKey {
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  std::uint64_t i = 1;  // 1-based global row index
  std::uint64_t j = 1;  // 1-based global column index
};

// The (i,j) matrix entry for the keyed infinite Wigner matrix.  Real kinds
// return a value with zero imaginary part; for beta=2 the (i>j) entry is the
// exact conjugate of the (j<i) one.  Pure function of its arguments.
std::complex<double> entry(const EnsembleSpec& spec, const EntryKey& key);

}  // namespace subwigner
