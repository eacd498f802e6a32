#include "subwigner/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "subwigner/errors.hpp"

namespace subwigner {
namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ValidationError("config: " + path + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ValidationError("config: unknown key '" + it.key() + "' in " + path);
}

const json& require(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key))
    throw ValidationError("config: missing key '" + key + "' in " + path);
  return j.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError("config: " + path + " must be a number");
  return j.get<double>();
}

std::uint64_t as_uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw ValidationError("config: " + path + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ValidationError("config: " + path + " must be an integer");
  return j.get<std::int64_t>();
}

EntryDistribution parse_distribution(const json& j, const std::string& path) {
  require_keys(j, path, {"kind", "variance", "atom", "weight", "scale", "radius"});
  const std::string kind = require(j, path, "kind").get<std::string>();
  if (kind == "gaussian_real") {
    require_keys(j, path, {"kind", "variance"});
    return EntryDistribution::gaussian_real(as_number(require(j, path, "variance"), path));
  }
  if (kind == "three_point_real") {
    require_keys(j, path, {"kind", "atom", "weight"});
    return EntryDistribution::three_point_real(as_number(require(j, path, "atom"), path),
                                               as_number(require(j, path, "weight"), path));
  }
  if (kind == "rademacher_scaled") {
    require_keys(j, path, {"kind", "scale"});
    return EntryDistribution::rademacher_scaled(as_number(require(j, path, "scale"), path));
  }
  if (kind == "gaussian_complex") {
    require_keys(j, path, {"kind", "variance"});
    return EntryDistribution::gaussian_complex(as_number(require(j, path, "variance"), path));
  }
  if (kind == "uniform_phase_radial") {
    require_keys(j, path, {"kind", "radius", "weight"});
    return EntryDistribution::uniform_phase_radial(as_number(require(j, path, "radius"), path),
                                                   as_number(require(j, path, "weight"), path));
  }
  throw ValidationError("config: " + path + " has unknown distribution kind '" + kind + "'");
}

IndexSequence parse_sequence(const json& j, const std::string& path) {
  require_keys(j, path, {"kind", "stride", "offset", "values"});
  const std::string kind = require(j, path, "kind").get<std::string>();
  if (kind == "identity") {
    require_keys(j, path, {"kind"});
    return IndexSequence::identity();
  }
  if (kind == "arithmetic") {
    require_keys(j, path, {"kind", "stride", "offset"});
    const std::uint64_t stride = as_uint(require(j, path, "stride"), path + ".stride");
    const std::uint64_t offset =
        j.contains("offset") ? as_uint(j.at("offset"), path + ".offset") : 0;
    return IndexSequence::arithmetic(stride, offset);
  }
  if (kind == "block_swap") {
    require_keys(j, path, {"kind"});
    return IndexSequence::block_swap();
  }
  if (kind == "explicit") {
    require_keys(j, path, {"kind", "values"});
    const json& vals = require(j, path, "values");
    if (!vals.is_array()) throw ValidationError("config: " + path + ".values must be an array");
    std::vector<std::uint64_t> head;
    for (std::size_t i = 0; i < vals.size(); ++i)
      head.push_back(as_uint(vals.at(i), path + ".values[" + std::to_string(i) + "]"));
    return IndexSequence::explicit_list(std::move(head));
  }
  throw ValidationError("config: " + path + " has unknown sequence kind '" + kind + "'");
}

StatSpec parse_statistic(const json& j, const std::string& path) {
  require_keys(j, path, {"set", "power", "kind"});
  StatSpec st;
  const json& set = require(j, path, "set");
  require_keys(set, path + ".set", {"sequence", "y", "length", "explicit"});
  if (set.contains("explicit")) {
    require_keys(set, path + ".set", {"explicit"});
    const json& vals = set.at("explicit");
    if (!vals.is_array() || vals.empty())
      throw ValidationError("config: " + path + ".set.explicit must be a nonempty array");
    for (std::size_t i = 0; i < vals.size(); ++i)
      st.set.explicit_set.push_back(
          as_uint(vals.at(i), path + ".set.explicit[" + std::to_string(i) + "]"));
  } else {
    st.set.sequence =
        static_cast<int>(as_int(require(set, path + ".set", "sequence"), path + ".set.sequence"));
    if (set.contains("length")) {
      require_keys(set, path + ".set", {"sequence", "length"});
      st.set.length = as_int(set.at("length"), path + ".set.length");
    } else {
      require_keys(set, path + ".set", {"sequence", "y"});
      st.set.y = as_number(require(set, path + ".set", "y"), path + ".set.y");
    }
  }
  st.power = static_cast<int>(as_int(require(j, path, "power"), path + ".power"));
  const std::string kind = require(j, path, "kind").get<std::string>();
  if (kind == "trace")
    st.kind = StatKind::Trace;
  else if (kind == "chebyshev")
    st.kind = StatKind::Chebyshev;
  else
    throw ValidationError("config: " + path + " has unknown statistic kind '" + kind + "'");
  return st;
}

}  // namespace

Config parse_config(const json& j) {
  require_keys(j, "$", {"ensemble", "family", "statistics", "run", "quadrature", "grid"});
  Config cfg;

  if (j.contains("ensemble")) {
    const json& e = j.at("ensemble");
    require_keys(e, "ensemble", {"beta", "offdiag", "diag"});
    EnsembleSpec spec;
    spec.beta = static_cast<int>(as_int(require(e, "ensemble", "beta"), "ensemble.beta"));
    spec.offdiag = parse_distribution(require(e, "ensemble", "offdiag"), "ensemble.offdiag");
    spec.diag = parse_distribution(require(e, "ensemble", "diag"), "ensemble.diag");
    cfg.ensemble = spec;
  }

  if (j.contains("family")) {
    const json& f = j.at("family");
    require_keys(f, "family", {"sequences"});
    const json& seqs = require(f, "family", "sequences");
    if (!seqs.is_array()) throw ValidationError("config: family.sequences must be an array");
    GoodFamily fam;
    for (std::size_t i = 0; i < seqs.size(); ++i)
      fam.sequences.push_back(
          parse_sequence(seqs.at(i), "family.sequences[" + std::to_string(i) + "]"));
    cfg.family = std::move(fam);
  }

  if (j.contains("statistics")) {
    const json& stats = j.at("statistics");
    if (!stats.is_array()) throw ValidationError("config: statistics must be an array");
    for (std::size_t i = 0; i < stats.size(); ++i)
      cfg.statistics.push_back(
          parse_statistic(stats.at(i), "statistics[" + std::to_string(i) + "]"));
  }

  if (j.contains("run")) {
    const json& r = j.at("run");
    require_keys(r, "run", {"L", "replicates", "seed", "threads"});
    RunConfig run;
    run.L = as_uint(require(r, "run", "L"), "run.L");
    if (r.contains("replicates")) run.replicates = as_uint(r.at("replicates"), "run.replicates");
    if (r.contains("seed")) run.seed = as_uint(r.at("seed"), "run.seed");
    if (r.contains("threads"))
      run.threads = static_cast<int>(as_int(r.at("threads"), "run.threads"));
    cfg.run = run;
  }

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    require_keys(q, "quadrature",
                 {"contour_nodes", "kernel_nodes", "tolerance", "gff_epsilon", "psd_tol"});
    if (q.contains("contour_nodes"))
      cfg.quadrature.contour_nodes =
          static_cast<int>(as_int(q.at("contour_nodes"), "quadrature.contour_nodes"));
    if (q.contains("kernel_nodes"))
      cfg.quadrature.kernel_nodes =
          static_cast<int>(as_int(q.at("kernel_nodes"), "quadrature.kernel_nodes"));
    if (q.contains("tolerance"))
      cfg.quadrature.tolerance = as_number(q.at("tolerance"), "quadrature.tolerance");
    if (q.contains("gff_epsilon"))
      cfg.quadrature.gff_epsilon = as_number(q.at("gff_epsilon"), "quadrature.gff_epsilon");
    if (q.contains("psd_tol"))
      cfg.quadrature.psd_tol = as_number(q.at("psd_tol"), "quadrature.psd_tol");
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    require_keys(g, "grid", {"points", "samples"});
    GridConfig grid;
    const json& pts = require(g, "grid", "points");
    if (!pts.is_array()) throw ValidationError("config: grid.points must be an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const json& p = pts.at(i);
      const std::string path = "grid.points[" + std::to_string(i) + "]";
      require_keys(p, path, {"sheet", "re", "im"});
      SheetPoint sp;
      sp.sheet = as_uint(require(p, path, "sheet"), path + ".sheet");
      sp.z = {as_number(require(p, path, "re"), path + ".re"),
              as_number(require(p, path, "im"), path + ".im")};
      grid.points.push_back(sp);
    }
    if (g.contains("samples"))
      grid.samples = static_cast<int>(as_int(g.at("samples"), "grid.samples"));
    cfg.grid = std::move(grid);
  }
  return cfg;
}

Config parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse_config(j);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

nlohmann::ordered_json dist_json(const EntryDistribution& d) {
  nlohmann::ordered_json j;
  switch (d.kind) {
    case DistKind::GaussianReal:
      j["kind"] = "gaussian_real";
      j["variance"] = d.a;
      break;
    case DistKind::ThreePointReal:
      j["kind"] = "three_point_real";
      j["atom"] = d.a;
      j["weight"] = d.p;
      break;
    case DistKind::RademacherScaled:
      j["kind"] = "rademacher_scaled";
      j["scale"] = d.a;
      break;
    case DistKind::GaussianComplex:
      j["kind"] = "gaussian_complex";
      j["variance"] = d.a;
      break;
    case DistKind::UniformPhaseRadial:
      j["kind"] = "uniform_phase_radial";
      j["radius"] = d.a;
      j["weight"] = d.p;
      break;
  }
  return j;
}

nlohmann::ordered_json sequence_json(const IndexSequence& s) {
  nlohmann::ordered_json j;
  switch (s.kind) {
    case SeqKind::Identity:
      j["kind"] = "identity";
      break;
    case SeqKind::Arithmetic:
      j["kind"] = "arithmetic";
      j["stride"] = s.stride;
      j["offset"] = s.offset;
      break;
    case SeqKind::BlockSwap:
      j["kind"] = "block_swap";
      break;
    case SeqKind::Explicit:
      j["kind"] = "explicit";
      j["values"] = s.values;
      break;
  }
  return j;
}

}  // namespace

nlohmann::ordered_json canonical_config(const Config& cfg) {
  nlohmann::ordered_json j;
  if (cfg.ensemble) {
    j["ensemble"]["beta"] = cfg.ensemble->beta;
    j["ensemble"]["offdiag"] = dist_json(cfg.ensemble->offdiag);
    j["ensemble"]["diag"] = dist_json(cfg.ensemble->diag);
  }
  if (cfg.family) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : cfg.family->sequences) arr.push_back(sequence_json(s));
    j["family"]["sequences"] = arr;
  }
  if (!cfg.statistics.empty()) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& st : cfg.statistics) {
      nlohmann::ordered_json s;
      if (st.set.is_explicit()) {
        s["set"]["explicit"] = st.set.explicit_set;
      } else {
        s["set"]["sequence"] = st.set.sequence;
        if (st.set.length >= 0)
          s["set"]["length"] = st.set.length;
        else
          s["set"]["y"] = st.set.y;
      }
      s["power"] = st.power;
      s["kind"] = st.kind == StatKind::Trace ? "trace" : "chebyshev";
      arr.push_back(s);
    }
    j["statistics"] = arr;
  }
  if (cfg.run) {
    j["run"]["L"] = cfg.run->L;
    j["run"]["replicates"] = cfg.run->replicates;
    j["run"]["seed"] = cfg.run->seed;
    // threads intentionally omitted: worker count never changes identity
  }
  j["quadrature"]["contour_nodes"] = cfg.quadrature.contour_nodes;
  j["quadrature"]["kernel_nodes"] = cfg.quadrature.kernel_nodes;
  j["quadrature"]["tolerance"] = cfg.quadrature.tolerance;
  j["quadrature"]["gff_epsilon"] = cfg.quadrature.gff_epsilon;
  j["quadrature"]["psd_tol"] = cfg.quadrature.psd_tol;
  if (cfg.grid) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : cfg.grid->points) {
      nlohmann::ordered_json pt;
      pt["sheet"] = p.sheet;
      pt["re"] = p.z.real();
      pt["im"] = p.z.imag();
      arr.push_back(pt);
    }
    j["grid"]["points"] = arr;
    j["grid"]["samples"] = cfg.grid->samples;
  }
  return j;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ExperimentSpec to_experiment(const Config& cfg) {
  if (!cfg.ensemble) throw ValidationError("config: 'ensemble' block is required");
  if (!cfg.run) throw ValidationError("config: 'run' block is required");
  ExperimentSpec spec;
  spec.ensemble = *cfg.ensemble;
  if (cfg.family) spec.family = *cfg.family;
  spec.statistics = cfg.statistics;
  spec.L = cfg.run->L;
  spec.replicates = cfg.run->replicates;
  spec.seed = cfg.run->seed;
  spec.threads = cfg.run->threads;
  return spec;
}

}  // namespace subwigner
