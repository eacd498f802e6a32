#include <CLI11.hpp>

#include "subwigner/cli.hpp"

// subwigner: simulate trace statistics of Wigner submatrices, evaluate the
// limiting covariance in several analytic forms, and verify agreement.
//
// Subcommands:
//   theory    limiting covariances for the configured statistics (CSV)
//   simulate  replicated Monte Carlo run (JSON report, optional raw CSV)
//   compare   z-scores of a simulation against a theory table (CSV)
//   kernel    correlated-GFF kernel values on a point grid (CSV)
//   gff       GFF covariance matrix + Gaussian field samples (CSV)

int main(int argc, char** argv) {
  CLI::App app{"Wigner submatrix spectra: CLT simulator and verifier"};
  app.require_subcommand(1);

  std::string config_path, out_path, dump_raw_path;
  std::string theory_path, sim_path, out_cov_path, out_samples_path;
  subwigner::cli::Overrides ov;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "JSON config file")->required();
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--seed", ov.seed, "override run.seed");
    cmd->add_option("--threads", ov.threads, "override run.threads");
    cmd->add_option("--quad-nodes", ov.quad_nodes, "override quadrature node counts");
    cmd->add_option("--tolerance", ov.tolerance, "override quadrature.tolerance");
  };

  CLI::App* theory = app.add_subcommand("theory", "evaluate limiting covariances");
  add_common(theory, true);

  CLI::App* simulate = app.add_subcommand("simulate", "run a replicated experiment");
  add_common(simulate, true);
  simulate->add_option("--replicates", ov.replicates, "override run.replicates");
  simulate->add_option("--dump-raw", dump_raw_path, "write per-replicate traces (CSV)");

  CLI::App* compare = app.add_subcommand("compare", "z-scores of simulation vs theory");
  compare->add_option("--theory", theory_path, "theory CSV")->required();
  compare->add_option("--sim", sim_path, "simulation report JSON")->required();
  compare->add_option("--out", out_path, "output CSV (default: stdout)");
  compare->add_option("--tolerance,--threshold", ov.tolerance, "|z| threshold (default 5)");

  CLI::App* kernel = app.add_subcommand("kernel", "GFF kernel values on a grid");
  add_common(kernel, true);

  CLI::App* gff = app.add_subcommand("gff", "GFF covariance and field samples");
  add_common(gff, true);
  gff->add_option("--out-cov", out_cov_path, "covariance CSV (default: stdout)");
  gff->add_option("--out-samples", out_samples_path, "samples CSV");

  CLI11_PARSE(app, argc, argv);

  if (theory->parsed()) return subwigner::cli::run_theory(config_path, out_path, ov);
  if (simulate->parsed())
    return subwigner::cli::run_simulate(config_path, out_path, dump_raw_path, ov);
  if (compare->parsed())
    return subwigner::cli::run_compare(theory_path, sim_path, out_path, ov);
  if (kernel->parsed()) return subwigner::cli::run_kernel(config_path, out_path, ov);
  if (gff->parsed())
    return subwigner::cli::run_gff(config_path, out_cov_path.empty() ? out_path : out_cov_path,
                                   out_samples_path, ov);
  return subwigner::cli::kExitValidation;
}
