#include "subwigner/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "subwigner/errors.hpp"
#include "subwigner/matrixops.hpp"
#include "subwigner/theory.hpp"

namespace subwigner {

void ExperimentSpec::validate(std::uint64_t min_replicates) const {
  require_valid(ensemble);
  if (L < 1) throw ValidationError("experiment: L must be >= 1");
  if (replicates < min_replicates)
    throw ValidationError("experiment: need at least " + std::to_string(min_replicates) +
                          " replicates");
  if (statistics.empty()) throw ValidationError("experiment: no statistics requested");
  for (const auto& s : statistics) {
    if (s.power < 1) throw ValidationError("experiment: statistic power must be >= 1");
    if (!s.set.is_explicit()) {
      if (s.set.sequence < 0 ||
          static_cast<std::size_t>(s.set.sequence) >= family.sequences.size())
        throw ValidationError("experiment: statistic references a sequence outside the family");
      if (s.set.length < 0 && !(s.set.y > 0))
        throw ValidationError("experiment: prefix statistics need y > 0 or an explicit length");
    }
  }
}

std::vector<std::uint64_t> resolve_set(const SetSpec& s, const GoodFamily& family,
                                       std::uint64_t L) {
  if (s.is_explicit()) return s.explicit_set;
  if (s.sequence < 0 || static_cast<std::size_t>(s.sequence) >= family.sequences.size())
    throw ValidationError("resolve_set: sequence index out of range");
  const std::uint64_t m =
      s.length >= 0 ? static_cast<std::uint64_t>(s.length) : scaled_floor(s.y, L);
  return prefix(family.sequences[s.sequence], m, L);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* cap = std::getenv("SUBWIGNER_MAX_THREADS")) {
    const int c = std::atoi(cap);
    if (c > 0) hw = std::min(hw, c);
  }
  return hw;
}

RawResults run(const ExperimentSpec& spec) {
  spec.validate(1);

  const std::size_t n_stats = spec.statistics.size();

  // Deduplicate index sets; all statistics on one set share a realization.
  std::vector<std::vector<std::uint64_t>> sets(n_stats);
  std::map<std::vector<std::uint64_t>, int> set_ids;
  std::vector<int> stat_set(n_stats);
  std::vector<std::vector<std::uint64_t>> distinct;
  for (std::size_t p = 0; p < n_stats; ++p) {
    sets[p] = resolve_set(spec.statistics[p].set, spec.family, spec.L);
    if (sets[p].empty()) throw ValidationError("run: statistic " + std::to_string(p) +
                                               " resolves to an empty set");
    auto [it, inserted] = set_ids.emplace(sets[p], static_cast<int>(distinct.size()));
    if (inserted) distinct.push_back(sets[p]);
    stat_set[p] = it->second;
  }

  // Per distinct set: the maximal trace power and Chebyshev order needed.
  std::vector<int> max_power(distinct.size(), 0), max_cheb(distinct.size(), -1);
  for (std::size_t p = 0; p < n_stats; ++p) {
    const auto& st = spec.statistics[p];
    if (st.kind == StatKind::Trace)
      max_power[stat_set[p]] = std::max(max_power[stat_set[p]], st.power);
    else
      max_cheb[stat_set[p]] = std::max(max_cheb[stat_set[p]], st.power);
  }
  // Chebyshev scale 2 sqrt(b_p L) at the exact finite-L ratio b_p = |B_p|/L,
  // i.e. twice the semicircle edge of X(B_p).
  std::vector<double> cheb_scale(distinct.size());
  for (std::size_t s = 0; s < distinct.size(); ++s)
    cheb_scale[s] = 2.0 * std::sqrt(static_cast<double>(distinct[s].size()));

  RawResults raw;
  raw.traces.assign(n_stats, std::vector<double>(spec.replicates, 0.0));
  raw.sets = sets;
  raw.L = spec.L;
  raw.replicates = spec.replicates;
  raw.seed = spec.seed;
  raw.beta = spec.ensemble.beta;
  for (std::size_t p = 0; p < n_stats; ++p) {
    raw.power.push_back(spec.statistics[p].power);
    raw.kind.push_back(spec.statistics[p].kind);
  }

  const std::uint64_t M = spec.replicates;
  const int n_threads =
      static_cast<int>(std::min<std::uint64_t>(resolve_threads(spec.threads), M));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    try {
      for (;;) {
        const std::uint64_t r = next.fetch_add(1);
        if (r >= M) return;
        std::vector<std::vector<double>> powers(distinct.size());
        std::vector<std::vector<double>> chebs(distinct.size());
        for (std::size_t s = 0; s < distinct.size(); ++s) {
          const RealizedSubmatrix m = realize(spec.ensemble, spec.seed, r, distinct[s]);
          if (max_power[s] >= 1) powers[s] = trace_powers(m, max_power[s]);
          if (max_cheb[s] >= 0) chebs[s] = trace_chebyshevs(m, max_cheb[s], cheb_scale[s]);
        }
        for (std::size_t p = 0; p < n_stats; ++p) {
          const auto& st = spec.statistics[p];
          raw.traces[p][r] = st.kind == StatKind::Trace
                                 ? powers[stat_set[p]][st.power - 1]
                                 : chebs[stat_set[p]][st.power];
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      next.store(M);  // drain remaining work
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return raw;
}

namespace {

double normalization_for(StatKind kind, int power, std::uint64_t L) {
  return kind == StatKind::Trace ? std::pow(static_cast<double>(L), -0.5 * power) : 1.0;
}

struct JackknifeCov {
  double estimate = 0.0;
  double se = 0.0;
};

// Unbiased covariance with delete-1 jackknife SE, O(M) via sum updates.
JackknifeCov jackknife_covariance(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t M = x.size();
  const double n = static_cast<double>(M);
  double mx = 0, my = 0;
  for (std::size_t r = 0; r < M; ++r) {
    mx += x[r];
    my += y[r];
  }
  mx /= n;
  my /= n;
  // centered copies stabilize the leave-one-out updates
  double sxy = 0;
  std::vector<double> cx(M), cy(M);
  for (std::size_t r = 0; r < M; ++r) {
    cx[r] = x[r] - mx;
    cy[r] = y[r] - my;
    sxy += cx[r] * cy[r];
  }
  JackknifeCov out;
  out.estimate = sxy / (n - 1.0);
  if (M < 3) {
    out.se = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  // leave-one-out: centered sums are Sx = 0, Sy = 0, so
  //   cov_(-i) = [ (sxy - cx cy) - (cx cy) / (n-1) ] / (n-2)
  std::vector<double> loo(M);
  double mean_loo = 0;
  for (std::size_t r = 0; r < M; ++r) {
    const double cross = cx[r] * cy[r];
    loo[r] = ((sxy - cross) - cross / (n - 1.0)) / (n - 2.0);
    mean_loo += loo[r];
  }
  mean_loo /= n;
  double ss = 0;
  for (std::size_t r = 0; r < M; ++r) ss += (loo[r] - mean_loo) * (loo[r] - mean_loo);
  out.se = std::sqrt((n - 1.0) / n * ss);
  return out;
}

}  // namespace

StatSummary summarize(const RawResults& raw) {
  if (raw.replicates < 2) throw ValidationError("summarize: need >= 2 replicates");
  const std::size_t n_stats = raw.traces.size();
  const std::uint64_t M = raw.replicates;

  StatSummary s;
  s.M = M;
  s.L = raw.L;
  s.seed = raw.seed;
  s.beta = raw.beta;
  s.power = raw.power;
  s.kind = raw.kind;
  s.covariance.resize(n_stats, n_stats);
  s.covariance_se.resize(n_stats, n_stats);
  s.overlap.resize(n_stats, n_stats);

  // normalized centered statistics
  std::vector<std::vector<double>> norm(n_stats, std::vector<double>(M));
  for (std::size_t p = 0; p < n_stats; ++p) {
    const double nf = normalization_for(raw.kind[p], raw.power[p], raw.L);
    double mean = 0;
    for (double t : raw.traces[p]) mean += t;
    mean /= static_cast<double>(M);
    for (std::uint64_t r = 0; r < M; ++r) norm[p][r] = nf * (raw.traces[p][r] - mean);
    s.mean_trace.push_back(mean);
    s.normalization.push_back(nf);
    s.set_size.push_back(static_cast<double>(raw.sets[p].size()));
    s.b.push_back(static_cast<double>(raw.sets[p].size()) / static_cast<double>(raw.L));
  }

  for (std::size_t p = 0; p < n_stats; ++p) {
    for (std::size_t q = p; q < n_stats; ++q) {
      const JackknifeCov jc = jackknife_covariance(norm[p], norm[q]);
      s.covariance(p, q) = jc.estimate;
      s.covariance(q, p) = jc.estimate;
      s.covariance_se(p, q) = jc.se;
      s.covariance_se(q, p) = jc.se;
      std::uint64_t inter = 0;
      {
        std::vector<std::uint64_t> a = raw.sets[p], b = raw.sets[q];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        std::vector<std::uint64_t> both;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(both));
        inter = both.size();
      }
      s.overlap(p, q) = static_cast<double>(inter) / static_cast<double>(raw.L);
      s.overlap(q, p) = s.overlap(p, q);
    }
  }

  for (std::size_t p = 0; p < n_stats; ++p) {
    s.variance.push_back(s.covariance(p, p));
    s.variance_se.push_back(s.covariance_se(p, p));
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : norm[p]) {
      const double v2 = v * v;
      m2 += v2;
      m3 += v2 * v;
      m4 += v2 * v2;
    }
    m2 /= static_cast<double>(M);
    m3 /= static_cast<double>(M);
    m4 /= static_cast<double>(M);
    const bool defined = m2 > 0;
    s.moments_defined.push_back(defined);
    s.skewness.push_back(defined ? m3 / std::pow(m2, 1.5)
                                 : std::numeric_limits<double>::quiet_NaN());
    s.ex_kurtosis.push_back(defined ? m4 / (m2 * m2) - 3.0
                                    : std::numeric_limits<double>::quiet_NaN());
  }
  return s;
}

std::vector<TheoryRow> theory_table(const ExperimentSpec& spec, int contour_nodes,
                                    int kernel_nodes) {
  spec.validate(1);
  const std::size_t n_stats = spec.statistics.size();
  std::vector<std::vector<std::uint64_t>> sets(n_stats);
  for (std::size_t p = 0; p < n_stats; ++p) {
    sets[p] = resolve_set(spec.statistics[p].set, spec.family, spec.L);
    std::sort(sets[p].begin(), sets[p].end());
  }
  std::vector<TheoryRow> rows;
  for (std::size_t p = 0; p < n_stats; ++p) {
    for (std::size_t q = p; q < n_stats; ++q) {
      TheoryRow row;
      row.p = static_cast<int>(p);
      row.q = static_cast<int>(q);
      row.kp = spec.statistics[p].power;
      row.kq = spec.statistics[q].power;
      row.kind_p = spec.statistics[p].kind;
      row.kind_q = spec.statistics[q].kind;
      row.beta = spec.ensemble.beta;
      row.bp = static_cast<double>(sets[p].size()) / static_cast<double>(spec.L);
      row.bq = static_cast<double>(sets[q].size()) / static_cast<double>(spec.L);
      std::vector<std::uint64_t> both;
      std::set_intersection(sets[p].begin(), sets[p].end(), sets[q].begin(), sets[q].end(),
                            std::back_inserter(both));
      row.c = static_cast<double>(both.size()) / static_cast<double>(spec.L);

      const CovarianceParams params{row.kp, row.kq, row.bp, row.bq, row.c, row.beta};
      row.cov_series = limit_covariance_series(params);
      row.cov_catalan = limit_covariance_catalan(params);
      row.cov_contour = limit_covariance_contour(params, contour_nodes);
      row.cov_kernel = limit_covariance_kernel_integral(params, kernel_nodes);
      row.cheb_cov =
          chebyshev_limit_covariance(row.kp, row.kq, row.bp, row.bq, row.c, row.beta);
      rows.push_back(row);
    }
  }
  return rows;
}

CompareReport compare(const StatSummary& summary, const std::vector<TheoryRow>& theory,
                      double threshold) {
  CompareReport rep;
  rep.threshold = threshold;
  const std::size_t n_stats = summary.variance.size();

  std::map<std::pair<int, int>, const TheoryRow*> by_pair;
  for (const auto& row : theory) by_pair[{row.p, row.q}] = &row;

  std::vector<std::string> unmatched;
  auto flag = [&](CompareRow& row) {
    row.z = row.se > 0 ? (row.empirical - row.theory) / row.se
                       : (row.empirical == row.theory ? 0.0
                                                      : std::numeric_limits<double>::infinity());
    row.flagged = std::abs(row.z) > threshold;
    rep.any_flagged = rep.any_flagged || row.flagged;
    rep.rows.push_back(row);
  };

  for (std::size_t p = 0; p < n_stats; ++p) {
    for (std::size_t q = p; q < n_stats; ++q) {
      if (summary.kind[p] != summary.kind[q]) continue;  // no mixed-kind limit
      auto it = by_pair.find({static_cast<int>(p), static_cast<int>(q)});
      if (it == by_pair.end()) {
        unmatched.push_back("(" + std::to_string(p) + "," + std::to_string(q) + ")");
        continue;
      }
      const TheoryRow& t = *it->second;
      // guard against comparing against a table built for different statistics
      if (t.kp != summary.power[p] || t.kq != summary.power[q]) {
        unmatched.push_back("(" + std::to_string(p) + "," + std::to_string(q) +
                            ": power mismatch)");
        continue;
      }
      CompareRow row;
      row.p = static_cast<int>(p);
      row.q = static_cast<int>(q);
      row.metric = p == q ? "variance" : "covariance";
      row.empirical = summary.covariance(p, q);
      row.theory = summary.kind[p] == StatKind::Chebyshev ? t.cheb_cov : t.cov_series;
      row.se = summary.covariance_se(p, q);
      flag(row);
    }
  }
  if (!unmatched.empty()) {
    std::string msg = "compare: unmatched statistic pairs:";
    for (const auto& u : unmatched) msg += " " + u;
    throw ValidationError(msg);
  }

  const double m = static_cast<double>(summary.M);
  for (std::size_t p = 0; p < n_stats; ++p) {
    if (!summary.moments_defined[p]) continue;
    CompareRow skew;
    skew.p = skew.q = static_cast<int>(p);
    skew.metric = "skewness";
    skew.empirical = summary.skewness[p];
    skew.theory = 0.0;
    skew.se = std::sqrt(6.0 / m);
    flag(skew);
    CompareRow kurt;
    kurt.p = kurt.q = static_cast<int>(p);
    kurt.metric = "ex_kurtosis";
    kurt.empirical = summary.ex_kurtosis[p];
    kurt.theory = 0.0;
    kurt.se = std::sqrt(24.0 / m);
    flag(kurt);
  }
  return rep;
}

}  // namespace subwigner
