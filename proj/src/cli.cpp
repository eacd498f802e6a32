#include "subwigner/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "subwigner/errors.hpp"
#include "subwigner/theory.hpp"

namespace subwigner::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string kind_name(StatKind k) { return k == StatKind::Trace ? "trace" : "chebyshev"; }

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const NumericalContractError& e) {
    std::cerr << "numerical contract violation: " << e.what() << "\n";
    return kExitNumericalContract;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace

Config apply_overrides(Config cfg, const Overrides& ov) {
  if (ov.seed || ov.replicates || ov.threads) {
    if (!cfg.run) cfg.run = RunConfig{};
    if (ov.seed) cfg.run->seed = *ov.seed;
    if (ov.replicates) cfg.run->replicates = *ov.replicates;
    if (ov.threads) cfg.run->threads = *ov.threads;
  }
  if (ov.quad_nodes) {
    cfg.quadrature.contour_nodes = *ov.quad_nodes;
    cfg.quadrature.kernel_nodes = *ov.quad_nodes;
  }
  if (ov.tolerance) cfg.quadrature.tolerance = *ov.tolerance;
  return cfg;
}

std::string theory_csv(const Config& cfg) {
  std::string out =
      "p,q,k_p,k_q,b_p,b_q,c_pq,beta,cov_series,cov_catalan,cov_contour,cov_kernel,cheb_cov\n";
  if (cfg.statistics.empty()) return out;
  const ExperimentSpec spec = to_experiment(cfg);
  const auto rows =
      theory_table(spec, cfg.quadrature.contour_nodes, cfg.quadrature.kernel_nodes);
  for (const auto& r : rows) {
    out += std::to_string(r.p) + "," + std::to_string(r.q) + "," + std::to_string(r.kp) + "," +
           std::to_string(r.kq) + "," + format_double(r.bp) + "," + format_double(r.bq) + "," +
           format_double(r.c) + "," + std::to_string(r.beta) + "," +
           format_double(r.cov_series) + "," + format_double(r.cov_catalan) + "," +
           format_double(r.cov_contour) + "," + format_double(r.cov_kernel) + "," +
           format_double(r.cheb_cov) + "\n";
  }
  return out;
}

ordered_json report_from(const Config& cfg, const RawResults& raw) {
  const StatSummary s = summarize(raw);

  ordered_json rep;
  rep["version"] = kVersion;
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical_config(cfg).dump())));
    rep["config_hash"] = std::string(buf);
  }
  rep["timestamp"] = timestamp_now();  // excluded from the hash
  rep["L"] = s.L;
  rep["replicates"] = s.M;
  rep["seed"] = s.seed;
  rep["beta"] = s.beta;

  auto stats = ordered_json::array();
  for (std::size_t p = 0; p < s.variance.size(); ++p) {
    ordered_json st;
    st["p"] = p;
    st["kind"] = kind_name(s.kind[p]);
    st["power"] = s.power[p];
    st["set_size"] = s.set_size[p];
    st["b"] = s.b[p];
    st["normalization"] = s.normalization[p];
    st["mean_trace"] = s.mean_trace[p];
    st["variance"] = s.variance[p];
    st["variance_se"] = s.variance_se[p];
    st["moments_defined"] = static_cast<bool>(s.moments_defined[p]);
    if (s.moments_defined[p]) {
      st["skewness"] = s.skewness[p];
      st["ex_kurtosis"] = s.ex_kurtosis[p];
    }
    stats.push_back(st);
  }
  rep["statistics"] = stats;

  auto matrix_json = [](const Eigen::MatrixXd& m) {
    auto rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      auto row = ordered_json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  rep["covariance"] = matrix_json(s.covariance);
  rep["covariance_se"] = matrix_json(s.covariance_se);
  rep["overlap"] = matrix_json(s.overlap);
  return rep;
}

ordered_json simulate_report(const Config& cfg) {
  const ExperimentSpec spec = to_experiment(cfg);
  if (spec.replicates < 2)
    throw ValidationError("simulate: need at least 2 replicates for a summary");
  return report_from(cfg, run(spec));
}

std::string raw_csv(const RawResults& raw) {
  std::string out = "replicate,p,k,trace\n";
  for (std::size_t p = 0; p < raw.traces.size(); ++p)
    for (std::uint64_t r = 0; r < raw.replicates; ++r)
      out += std::to_string(r) + "," + std::to_string(p) + "," + std::to_string(raw.power[p]) +
             "," + format_double(raw.traces[p][r]) + "\n";
  return out;
}

namespace {

struct ParsedTheoryRow {
  int kp, kq, beta;
  double bp, bq, c, series, catalan, contour, kernel, cheb;
};

std::map<std::pair<int, int>, ParsedTheoryRow> parse_theory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("theory CSV: empty file");
  const std::string expect =
      "p,q,k_p,k_q,b_p,b_q,c_pq,beta,cov_series,cov_catalan,cov_contour,cov_kernel,cheb_cov";
  if (line != expect) throw ValidationError("theory CSV: unexpected header '" + line + "'");
  std::map<std::pair<int, int>, ParsedTheoryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 13) throw ValidationError("theory CSV: malformed row '" + line + "'");
    ParsedTheoryRow r{};
    const int p = std::stoi(f[0]), q = std::stoi(f[1]);
    r.kp = std::stoi(f[2]);
    r.kq = std::stoi(f[3]);
    r.bp = std::stod(f[4]);
    r.bq = std::stod(f[5]);
    r.c = std::stod(f[6]);
    r.beta = std::stoi(f[7]);
    r.series = std::stod(f[8]);
    r.catalan = std::stod(f[9]);
    r.contour = std::stod(f[10]);
    r.kernel = std::stod(f[11]);
    r.cheb = std::stod(f[12]);
    rows[{p, q}] = r;
  }
  return rows;
}

}  // namespace

CompareResult compare_tables(const std::string& theory_csv_text, const json& sim_report,
                             double threshold) {
  const auto theory = parse_theory_csv(theory_csv_text);

  if (!sim_report.contains("statistics") || !sim_report.contains("covariance") ||
      !sim_report.contains("covariance_se") || !sim_report.contains("replicates"))
    throw ValidationError("compare: simulation report is missing required fields");

  const auto& stats = sim_report.at("statistics");
  const std::size_t n = stats.size();
  const double M = sim_report.at("replicates").get<double>();

  std::vector<std::string> unmatched;
  std::string csv = "p,q,metric,empirical,theory,se,z,flag\n";
  bool any = false;

  auto emit = [&](int p, int q, const std::string& metric, double emp, double th, double se) {
    const double z = se > 0 ? (emp - th) / se
                            : (emp == th ? 0.0 : std::numeric_limits<double>::infinity());
    const bool flagged = std::abs(z) > threshold;
    any = any || flagged;
    csv += std::to_string(p) + "," + std::to_string(q) + "," + metric + "," +
           format_double(emp) + "," + format_double(th) + "," + format_double(se) + "," +
           format_double(z) + "," + (flagged ? "1" : "0") + "\n";
  };

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p; q < n; ++q) {
      const std::string kind_p = stats.at(p).at("kind").get<std::string>();
      const std::string kind_q = stats.at(q).at("kind").get<std::string>();
      if (kind_p != kind_q) continue;  // no limiting value for mixed pairs
      auto it = theory.find({static_cast<int>(p), static_cast<int>(q)});
      if (it == theory.end()) {
        unmatched.push_back("(" + std::to_string(p) + "," + std::to_string(q) + ")");
        continue;
      }
      const ParsedTheoryRow& t = it->second;
      if (t.kp != stats.at(p).at("power").get<int>() ||
          t.kq != stats.at(q).at("power").get<int>()) {
        unmatched.push_back("(" + std::to_string(p) + "," + std::to_string(q) +
                            ": power mismatch)");
        continue;
      }
      const double emp = sim_report.at("covariance").at(p).at(q).get<double>();
      const double se = sim_report.at("covariance_se").at(p).at(q).get<double>();
      const double th = kind_p == "chebyshev" ? t.cheb : t.series;
      emit(static_cast<int>(p), static_cast<int>(q), p == q ? "variance" : "covariance", emp,
           th, se);
    }
  }
  if (!unmatched.empty()) {
    std::string msg = "compare: unmatched statistic pairs:";
    for (const auto& u : unmatched) msg += " " + u;
    throw ValidationError(msg);
  }

  for (std::size_t p = 0; p < n; ++p) {
    if (!stats.at(p).at("moments_defined").get<bool>()) continue;
    emit(static_cast<int>(p), static_cast<int>(p), "skewness",
         stats.at(p).at("skewness").get<double>(), 0.0, std::sqrt(6.0 / M));
    emit(static_cast<int>(p), static_cast<int>(p), "ex_kurtosis",
         stats.at(p).at("ex_kurtosis").get<double>(), 0.0, std::sqrt(24.0 / M));
  }
  return {csv, any};
}

std::string kernel_csv(const Config& cfg) {
  if (!cfg.family) throw ValidationError("kernel: 'family' block is required");
  if (!cfg.grid || cfg.grid->points.empty())
    throw ValidationError("kernel: 'grid' block with points is required");
  const auto& pts = cfg.grid->points;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (pts[a].sheet == pts[b].sheet && pts[a].z == pts[b].z)
        throw ValidationError("kernel: duplicate grid points at indices " + std::to_string(b) +
                              " and " + std::to_string(a));
  std::string out = "a,b,sheet_a,re_a,im_a,sheet_b,re_b,im_b,alpha,value\n";
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const double alpha =
          cfg.family->alpha(pts[a].sheet, std::norm(pts[a].z), pts[b].sheet, std::norm(pts[b].z));
      const double v = gff_kernel(pts[a].sheet, pts[a].z, pts[b].sheet, pts[b].z, *cfg.family);
      out += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(pts[a].sheet) +
             "," + format_double(pts[a].z.real()) + "," + format_double(pts[a].z.imag()) + "," +
             std::to_string(pts[b].sheet) + "," + format_double(pts[b].z.real()) + "," +
             format_double(pts[b].z.imag()) + "," + format_double(alpha) + "," +
             format_double(v) + "\n";
    }
  }
  return out;
}

GffResult gff_outputs(const Config& cfg) {
  if (!cfg.family) throw ValidationError("gff: 'family' block is required");
  if (!cfg.grid || cfg.grid->points.empty())
    throw ValidationError("gff: 'grid' block with points is required");

  SheetGrid grid{cfg.grid->points, *cfg.family};
  FieldCovariance cov = build_covariance(grid, cfg.quadrature.gff_epsilon);
  const PsdReport rep = psd_check(cov, cfg.quadrature.psd_tol);

  const int n = static_cast<int>(cov.matrix.rows());
  std::string header = "# subwigner gff covariance\n# n=" + std::to_string(n) +
                       " epsilon=" + format_double(cov.epsilon) + "\n# psd: min_pivot=" +
                       format_double(rep.min_pivot) + " max_diag=" + format_double(rep.max_diag) +
                       " margin=" + format_double(rep.margin) +
                       " pass=" + (rep.pass ? std::string("1") : std::string("0")) +
                       " clipped=" + std::to_string(rep.clipped) +
                       " tol=" + format_double(rep.tol) + "\n";
  std::string cov_csv = header;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cov_csv += format_double(cov.matrix(i, j));
      cov_csv += j + 1 < n ? "," : "\n";
    }
  }

  std::string samples_csv = header;
  const int n_samples = cfg.grid->samples;
  const std::uint64_t seed = cfg.run ? cfg.run->seed : 0;
  if (n_samples > 0) {
    if (!rep.pass)
      throw NumericalContractError("gff: covariance failed the psd check; not sampling");
    const auto draws = sample_field(cov, n_samples, seed);
    for (const auto& x : draws) {
      for (int i = 0; i < n; ++i) {
        samples_csv += format_double(x(i));
        samples_csv += i + 1 < n ? "," : "\n";
      }
    }
  }
  return {cov_csv, samples_csv, rep};
}

int run_theory(const std::string& config_path, const std::string& out_path,
               const Overrides& ov) {
  return guarded([&] {
    const Config cfg = apply_overrides(load_config(config_path), ov);
    write_file(out_path, theory_csv(cfg));
    return kExitOk;
  });
}

int run_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& dump_raw_path, const Overrides& ov) {
  return guarded([&] {
    const Config cfg = apply_overrides(load_config(config_path), ov);
    const ExperimentSpec spec = to_experiment(cfg);
    if (spec.replicates < 2)
      throw ValidationError("simulate: need at least 2 replicates for a summary");
    const RawResults raw = run(spec);
    if (!dump_raw_path.empty()) write_file(dump_raw_path, raw_csv(raw));
    write_file(out_path, report_from(cfg, raw).dump(2) + "\n");
    return kExitOk;
  });
}

int run_compare(const std::string& theory_path, const std::string& sim_path,
                const std::string& out_path, const Overrides& ov) {
  return guarded([&] {
    const std::string theory_text = read_file(theory_path);
    json sim;
    try {
      sim = json::parse(read_file(sim_path));
    } catch (const json::exception& e) {
      throw ValidationError(std::string("compare: bad simulation JSON: ") + e.what());
    }
    const double threshold = ov.tolerance.value_or(5.0);
    const CompareResult res = compare_tables(theory_text, sim, threshold);
    write_file(out_path, res.csv);
    return res.any_flagged ? kExitThreshold : kExitOk;
  });
}

int run_kernel(const std::string& config_path, const std::string& out_path,
               const Overrides& ov) {
  return guarded([&] {
    const Config cfg = apply_overrides(load_config(config_path), ov);
    write_file(out_path, kernel_csv(cfg));
    return kExitOk;
  });
}

int run_gff(const std::string& config_path, const std::string& out_cov_path,
            const std::string& out_samples_path, const Overrides& ov) {
  return guarded([&] {
    const Config cfg = apply_overrides(load_config(config_path), ov);
    const GffResult res = gff_outputs(cfg);
    write_file(out_cov_path, res.covariance_csv);
    if (!out_samples_path.empty()) write_file(out_samples_path, res.samples_csv);
    return kExitOk;
  });
}

}  // namespace subwigner::cli
