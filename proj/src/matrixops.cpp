#include "subwigner/matrixops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subwigner/errors.hpp"

namespace subwigner {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHermitianResidueTol = 1e-10;

struct KahanSum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Compensated trace of a complex matrix; enforces the Hermitian residue
// contract |Im| <= tol * sum|diag|.
double checked_trace(const Eigen::MatrixXcd& m) {
  KahanSum re, im;
  double mag = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    const std::complex<double> d = m(i, i);
    re.add(d.real());
    im.add(d.imag());
    mag += std::abs(d);
  }
  if (std::abs(im.sum) > kHermitianResidueTol * std::max(mag, 1e-300))
    throw NumericalContractError(
        "trace: imaginary residue exceeds tolerance; entry symmetry is broken");
  return re.sum;
}

double compensated_trace(const Eigen::MatrixXd& m) {
  KahanSum s;
  for (int i = 0; i < m.rows(); ++i) s.add(m(i, i));
  return s.sum;
}

double mean_of(std::span<const double> v) {
  KahanSum s;
  for (double x : v) s.add(x);
  return s.sum / static_cast<double>(v.size());
}

}  // namespace

std::complex<double> RealizedSubmatrix::at(int a, int b) const {
  const int r = storage_row[a], c = storage_row[b];
  if (beta == 2) return cx(r, c);
  return {re(r, c), 0.0};
}

RealizedSubmatrix realize(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t replicate,
                          std::span<const std::uint64_t> B) {
  if (B.empty()) throw ValidationError("realize: index set must be nonempty");
  RealizedSubmatrix m;
  m.indices.assign(B.begin(), B.end());
  m.beta = spec.beta;
  m.seed = seed;
  m.replicate = replicate;

  const int n = m.n();
  // Canonical storage order: sorted indices.  Traces become invariant under
  // permutations of B, entry for entry.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return m.indices[a] < m.indices[b]; });
  std::vector<std::uint64_t> sorted(n);
  m.storage_row.resize(n);
  for (int r = 0; r < n; ++r) {
    sorted[r] = m.indices[order[r]];
    m.storage_row[order[r]] = r;
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("realize: duplicate indices in B");

  if (spec.beta == 2) {
    m.cx.resize(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r <= c; ++r) {
        const std::complex<double> v =
            entry(spec, EntryKey{seed, replicate, sorted[r], sorted[c]});
        m.cx(r, c) = v;
        m.cx(c, r) = std::conj(v);
      }
  } else {
    m.re.resize(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r <= c; ++r) {
        const double v = entry(spec, EntryKey{seed, replicate, sorted[r], sorted[c]}).real();
        m.re(r, c) = v;
        m.re(c, r) = v;
      }
  }
  return m;
}

std::vector<double> trace_powers(const RealizedSubmatrix& M, int kmax) {
  if (kmax < 1) throw ValidationError("trace_powers: k must be >= 1");
  std::vector<double> out;
  out.reserve(kmax);
  if (M.beta == 2) {
    Eigen::MatrixXcd power = M.cx;
    Eigen::MatrixXcd next(M.n(), M.n());
    out.push_back(checked_trace(power));
    for (int k = 2; k <= kmax; ++k) {
      next.noalias() = power * M.cx;
      power.swap(next);
      out.push_back(checked_trace(power));
    }
  } else {
    Eigen::MatrixXd power = M.re;
    Eigen::MatrixXd next(M.n(), M.n());
    out.push_back(compensated_trace(power));
    for (int k = 2; k <= kmax; ++k) {
      next.noalias() = power * M.re;
      power.swap(next);
      out.push_back(compensated_trace(power));
    }
  }
  return out;
}

double trace_power(const RealizedSubmatrix& M, int k) { return trace_powers(M, k)[k - 1]; }

std::vector<double> trace_chebyshevs(const RealizedSubmatrix& M, int nmax, double a) {
  if (nmax < 0) throw ValidationError("trace_chebyshevs: order must be >= 0");
  if (!(a > 0)) throw ValidationError("trace_chebyshevs: scale must be > 0");
  std::vector<double> out;
  out.reserve(nmax + 1);
  out.push_back(static_cast<double>(M.n()));  // T_0 = I
  if (nmax == 0) return out;

  if (M.beta == 2) {
    const Eigen::MatrixXcd S = M.cx / a;
    Eigen::MatrixXcd prev = Eigen::MatrixXcd::Identity(M.n(), M.n());
    Eigen::MatrixXcd cur = S;
    Eigen::MatrixXcd next(M.n(), M.n());
    out.push_back(checked_trace(cur));
    for (int m = 2; m <= nmax; ++m) {
      next.noalias() = 2.0 * S * cur;
      next -= prev;
      prev.swap(cur);
      cur.swap(next);
      out.push_back(checked_trace(cur));
    }
  } else {
    const Eigen::MatrixXd S = M.re / a;
    Eigen::MatrixXd prev = Eigen::MatrixXd::Identity(M.n(), M.n());
    Eigen::MatrixXd cur = S;
    Eigen::MatrixXd next(M.n(), M.n());
    out.push_back(compensated_trace(cur));
    for (int m = 2; m <= nmax; ++m) {
      next.noalias() = 2.0 * S * cur;
      next -= prev;
      prev.swap(cur);
      cur.swap(next);
      out.push_back(compensated_trace(cur));
    }
  }
  return out;
}

double trace_chebyshev(const RealizedSubmatrix& M, int n, double a) {
  return trace_chebyshevs(M, n, a)[n];
}

std::vector<TraceStatistic> centered_statistic(std::span<const double> traces, std::uint64_t L,
                                               int k, int set_label) {
  if (traces.size() < 2) throw ValidationError("centered_statistic: need >= 2 replicates");
  if (k < 1) throw ValidationError("centered_statistic: k must be >= 1");
  const double mean = mean_of(traces);
  const double norm = std::pow(static_cast<double>(L), -0.5 * k);
  std::vector<TraceStatistic> out;
  out.reserve(traces.size());
  for (double t : traces) out.push_back({norm * (t - mean), k, set_label, norm, true});
  return out;
}

std::vector<double> height_moment_from_traces(std::span<const double> traces_k_plus_1,
                                              std::uint64_t L, int k, int beta) {
  if (traces_k_plus_1.size() < 2)
    throw ValidationError("height_moment_from_traces: need >= 2 replicates");
  if (k < 0) throw ValidationError("height_moment_from_traces: k must be >= 0");
  const double mean = mean_of(traces_k_plus_1);
  const double pref = std::pow(static_cast<double>(L), -0.5 * (k + 1)) *
                      std::sqrt(beta * kPi / 2.0) / static_cast<double>(k + 1);
  std::vector<double> out;
  out.reserve(traces_k_plus_1.size());
  for (double t : traces_k_plus_1) out.push_back(pref * (t - mean));
  return out;
}

}  // namespace subwigner
