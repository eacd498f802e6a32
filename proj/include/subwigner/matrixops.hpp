#pragma once
#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "subwigner/ensembles.hpp"

// Dense realized submatrices X(B) and their trace statistics.  Storage is
// canonicalized to sorted index order, so any permutation of the same index
// set yields bitwise-identical traces.

namespace subwigner {

struct RealizedSubmatrix {
  std::vector<std::uint64_t> indices;  // caller's order
  std::vector<int> storage_row;        // storage_row[a]: row of indices[a] in data
  int beta = 1;
  Eigen::MatrixXd re;    // beta = 1
  Eigen::MatrixXcd cx;   // beta = 2
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  int n() const { return static_cast<int>(indices.size()); }
  // Entry in the caller's index order: equals entry(spec, (seed, replicate,
  // indices[a], indices[b])).
  std::complex<double> at(int a, int b) const;
};

// Dense |B| x |B| submatrix with keyed entries; exact conjugate symmetry by
// construction.  Duplicate indices are rejected.
RealizedSubmatrix realize(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t replicate,
                          std::span<const std::uint64_t> B);

// Tr(M^j) for j = 1..kmax, by accumulated dense multiplication; the trace
// reduction uses compensated summation.  For Hermitian inputs the imaginary
// residue is checked against 1e-10 times the accumulated magnitude.
std::vector<double> trace_powers(const RealizedSubmatrix& M, int kmax);
double trace_power(const RealizedSubmatrix& M, int k);

// Tr(T_j(M / a)) for j = 0..nmax via the matrix three-term recurrence.
std::vector<double> trace_chebyshevs(const RealizedSubmatrix& M, int nmax, double a);
double trace_chebyshev(const RealizedSubmatrix& M, int n, double a);

// One centered, normalized statistic per replicate.
struct TraceStatistic {
  double value = 0.0;      // normalization * (trace - empirical mean)
  int k = 0;               // power (or Chebyshev order)
  int set_label = 0;
  double normalization = 1.0;
  bool centered = true;
};

// L^{-k/2} (Tr - mean of Tr) per replicate; the across-replicate empirical
// mean stands in for the exact expectation.  Needs >= 2 replicates.
std::vector<TraceStatistic> centered_statistic(std::span<const double> traces, std::uint64_t L,
                                               int k, int set_label = 0);

// Height-function moments through the trace identity:
//   M_{i,y,k} = L^{-(k+1)/2} sqrt(beta pi / 2) / (k+1) * (Tr - mean Tr),
// where the traces are of power k+1 on B = A_{i,[Ly]}.
std::vector<double> height_moment_from_traces(std::span<const double> traces_k_plus_1,
                                              std::uint64_t L, int k, int beta);

}  // namespace subwigner
