// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "vqebench/errors.hpp"
#include "vqebench/excited.hpp"
#include "vqebench/fci.hpp"
#include "vqebench/fermion.hpp"
#include "vqebench/harness.hpp"
#include "vqebench/pools.hpp"
#include "vqebench/statevector.hpp"
#include "vqebench/vqe.hpp"

namespace vqebench {

namespace {

struct Options {
  std::string fcidump;
  std::string fixture;
  std::string manifest;
  std::string sector;
  std::optional<double> eps;
  std::optional<double> conv;
  std::uint64_t seed = 7;
  std::string out;
  std::string format;
  std::string config;
  std::string pool;
  std::string optimizer = "bfgs";
  std::optional<double> omega;
  std::size_t levels = 0;
  std::vector<double> betas;
  int max_round = 3;
  bool two_body = false;
  std::optional<double> theta0;
  std::size_t workers = 1;
  std::string summary;
  bool verbose = false;
};

/// Integrals, qubit Hamiltonian, sector and reference for one system.
struct Problem {
  std::string label;
  MolecularIntegrals mi;
  QubitOperator h;
  int n_alpha = 0;
  int n_beta = 0;
  Statevector reference;
  std::optional<double> e_fci;
};

std::pair<int, int> parse_sector(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used = 0;
    const int a = std::stoi(text.substr(0, comma), &used);
    const int b = std::stoi(text.substr(comma + 1));
    if (a < 0 || b < 0) throw std::invalid_argument("negative");
    return {a, b};
  } catch (const std::exception&) {
    throw InputError("--sector expects two non-negative integers 'a,b', got '" + text + "'");
  }
}

Problem load_problem(const Options& o, bool want_fci) {
  if (o.fcidump.empty() == o.fixture.empty()) {
    throw InputError("exactly one of --fcidump or --fixture is required");
  }
  Problem p;
  if (!o.fcidump.empty()) {
    p.mi = load_fcidump(o.fcidump);
    p.label = o.fcidump;
  } else {
    const FixtureManifest m = o.manifest.empty() ? FixtureManifest::bundled() : FixtureManifest::load(o.manifest);
    p.mi = m.load_integrals(o.fixture);
    p.label = o.fixture;
  }
  p.n_alpha = p.mi.n_alpha;
  p.n_beta = p.mi.n_beta;
  if (!o.sector.empty()) std::tie(p.n_alpha, p.n_beta) = parse_sector(o.sector);
  const std::size_t n = p.mi.n_spin_orbitals();
  if (static_cast<std::size_t>(std::max(p.n_alpha, p.n_beta)) > p.mi.n_spatial) {
    throw InputError("sector does not fit in " + std::to_string(p.mi.n_spatial) + " spatial orbitals");
  }
  p.h = qubit_hamiltonian(p.mi);
  std::uint64_t occ = 0;
  for (int i = 0; i < p.n_alpha; ++i) occ |= std::uint64_t{1} << (2 * i);
  for (int i = 0; i < p.n_beta; ++i) occ |= std::uint64_t{1} << (2 * i + 1);
  p.reference = hf_state(n, occ);
  if (want_fci) {
    const SectorBasis sector = SectorBasis::make(n, p.n_alpha, p.n_beta);
    if (sector.dimension() <= kDefaultFciCap) p.e_fci = fci_solve(p.h, sector, 1).at(0).energy;
  }
  return p;
}

OptimizerConfig optimizer_config(const Options& o) {
  OptimizerConfig c;
  c.method = parse_optimizer_method(o.optimizer);
  c.seed = o.seed;
  if (o.conv) c.energy_tol = *o.conv;
  return c;
}

OperatorPool build_pool(const Problem& p, const std::string& flavor, const Options& o) {
  if (flavor == "uscc") return uscc_screen(p.mi, mp2_amplitudes(p.mi), o.eps.value_or(1e-3), o.max_round);
  return named_pool(p.mi, flavor);
}

nlohmann::json result_json(const Problem& p, const VQEResult& r) {
  nlohmann::json j{{"label", p.label},
                   {"method", r.method},
                   {"energy", r.energy},
                   {"objective", r.objective},
                   {"n_params", r.parameters.size()},
                   {"parameters", r.parameters},
                   {"operators", r.operator_labels},
                   {"iterations", r.iterations},
                   {"evaluations", r.evaluations},
                   {"gradient_norm", r.gradient_norm},
                   {"status", r.status()},
                   {"flags", r.flags}};
  if (p.e_fci) {
    j["e_fci"] = *p.e_fci;
    j["abs_err"] = std::abs(r.energy - *p.e_fci);
  }
  if (!r.jastrow.alpha.empty()) j["jastrow"] = {{"alpha", r.jastrow.alpha}, {"lambda", r.jastrow.lambda}};
  if (!r.trace.empty()) {
    auto& t = j["trace"] = nlohmann::json::array();
    for (const auto& s : r.trace) {
      t.push_back({{"n_parameters", s.n_parameters},
                   {"energy", s.energy},
                   {"gradient_norm", s.gradient_norm},
                   {"selected", s.selected ? nlohmann::json(*s.selected) : nlohmann::json(nullptr)}});
    }
  }
  return j;
}

ScanRow result_row(const Problem& p, const VQEResult& r, std::optional<double> eps) {
  ScanRow row;
  row.molecule = p.mi.label;
  row.label = p.label;
  row.method = r.method;
  row.eps = eps;
  row.energy = r.energy;
  row.e_fci = p.e_fci.value_or(std::nan(""));
  row.abs_err = std::abs(r.energy - row.e_fci);
  row.n_params = r.parameters.size();
  row.n_iterations = r.iterations;
  row.status = r.status();
  return row;
}

/// Writes to --out when given, else to `out`.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot write " + path);
    }
  }
  std::ostream& stream(std::ostream& fallback) { return file_.is_open() ? file_ : fallback; }

 private:
  std::ofstream file_;
};

int emit_result(const Options& o, const Problem& p, const VQEResult& r, std::optional<double> eps,
                std::ostream& out) {
  Sink sink(o.out);
  std::ostream& os = sink.stream(out);
  if (o.format == "csv") write_csv(os, {result_row(p, r, eps)}, false);
  else os << result_json(p, r).dump(2) << '\n';
  return r.converged ? kExitOk : kExitUnconverged;
}

std::vector<QubitOperator> default_ansatz(const Problem& p, const Options& o, const char* fallback) {
  return build_pool(p, o.pool.empty() ? fallback : o.pool, o).operators();
}

int cmd_fci(const Options& o, std::ostream& out) {
  const Problem p = load_problem(o, false);
  const SectorBasis sector = SectorBasis::make(p.mi.n_spin_orbitals(), p.n_alpha, p.n_beta);
  const auto levels = fci_solve(p.h, sector, o.levels ? o.levels : kAllLevels);
  Sink sink(o.out);
  std::ostream& os = sink.stream(out);
  if (o.format == "json") {
    nlohmann::json j{{"label", p.label}, {"sector", {p.n_alpha, p.n_beta}}, {"dimension", sector.dimension()}};
    auto& e = j["energies"] = nlohmann::json::array();
    for (const auto& l : levels) e.push_back(l.energy);
    os << j.dump(2) << '\n';
  } else {
    os << "# " << p.label << " sector " << p.n_alpha << ',' << p.n_beta << " dimension "
       << sector.dimension() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < levels.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu %.12f\n", i, levels[i].energy);
      os << buf;
    }
  }
  return kExitOk;
}

int cmd_pools(const Options& o, std::ostream& out) {
  const Problem p = load_problem(o, false);
  const OperatorPool pool = build_pool(p, o.pool.empty() ? "uccsd" : o.pool, o);
  Sink sink(o.out);
  sink.stream(out) << pool_to_jsonl(pool);
  return kExitOk;
}

int cmd_qeom(const Options& o, std::ostream& out) {
  const Problem p = load_problem(o, true);
  const OptimizerConfig cfg = optimizer_config(o);
  const VQEResult ground = minimize(p.h, p.reference, default_ansatz(p, o, "uccsd"), cfg);
  const EomBasis basis = EomBasis::singles_doubles(p.mi);
  QeomReport report;
  const std::vector<double> gaps = qeom(p.h, ground.state, basis, &report);
  nlohmann::json j{{"label", p.label},
                   {"ground_energy", ground.energy},
                   {"excitation_energies", gaps},
                   {"pruned", report.pruned},
                   {"max_imaginary", report.max_imaginary},
                   {"status", ground.status()}};
  Sink sink(o.out);
  sink.stream(out) << j.dump(2) << '\n';
  return ground.converged ? kExitOk : kExitUnconverged;
}

int cmd_vqd(const Options& o, std::ostream& out) {
  const Problem p = load_problem(o, true);
  const auto ops = default_ansatz(p, o, "generalized");
  VqdOptions vo;
  vo.betas = o.betas;
  const auto levels = vqd(p.h, p.reference, [&](std::size_t) { return ops; },
                          o.levels ? o.levels : 2, vo, optimizer_config(o));
  nlohmann::json j{{"label", p.label}};
  if (p.e_fci) j["e_fci"] = *p.e_fci;
  auto& arr = j["levels"] = nlohmann::json::array();
  bool ok = true;
  for (const auto& r : levels) {
    arr.push_back({{"energy", r.energy}, {"objective", r.objective}, {"status", r.status()}, {"flags", r.flags}});
    ok &= r.converged;
  }
  Sink sink(o.out);
  sink.stream(out) << j.dump(2) << '\n';
  return ok ? kExitOk : kExitUnconverged;
}

int cmd_scan(const Options& o, std::ostream& out, std::ostream& err, spdlog::logger& log) {
  if (o.config.empty()) throw InputError("scan requires --config FILE");
  ScanSpec spec = ScanSpec::load(o.config);
  if (!o.manifest.empty()) spec.manifest = o.manifest;
  if (o.workers > 1) spec.workers = o.workers;
  std::vector<ScanRow> rows;
  try {
    rows = run_scan(spec);
  } catch (const PreflightError& e) {
    for (const auto& pr : e.problems()) err << "preflight: " << pr << '\n';
    throw;
  }
  std::size_t failures = 0;
  for (const auto& r : rows) {
    if (r.status.rfind("converged", 0) != 0) {
      ++failures;
      log.warn("{} {} eps={}: {}", r.label, r.method, r.eps ? std::to_string(*r.eps) : "-", r.status);
    }
  }
  const std::string path = !o.out.empty() ? o.out : spec.output.string();
  Sink sink(path);
  std::ostream& os = sink.stream(out);
  if (o.format == "json") write_jsonl(os, rows);
  else write_csv(os, rows);
  if (!o.summary.empty()) {
    std::ofstream s(o.summary);
    if (!s) throw InputError("cannot write " + o.summary);
    s << to_json(summarize(rows)).dump(2) << '\n';
  }
  return failures ? kExitUnconverged : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  spdlog::logger log("vqebench", sink);
  log.set_pattern("[%l] %v");
  log.set_level(spdlog::level::warn);

  CLI::App app{"Variational quantum eigensolver workbench"};
  app.name("vqebench");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--fcidump", o.fcidump, "FCIDUMP file");
  app.add_option("--fixture", o.fixture, "fixture label from the manifest");
  app.add_option("--manifest", o.manifest, "fixture manifest (default: bundled)");
  app.add_option("--sector", o.sector, "particle sector 'n_alpha,n_beta'");
  app.add_option("--eps", o.eps, "threshold (ADAPT gradient norm or USCC screening)");
  app.add_option("--conv", o.conv, "convergence tolerance (ADAPT gradient norm; optimizer energy tol)");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--out", o.out, "output path (default: stdout)");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--pool", o.pool, "pool: uccsd|generalized|spin-complemented|qubit|uscc");
  app.add_option("--optimizer", o.optimizer, "bfgs|nelder-mead")->check(CLI::IsMember({"bfgs", "nelder-mead"}));
  app.add_flag("-v,--verbose", o.verbose, "debug logging");

  auto* fci = app.add_subcommand("fci", "exact sector spectrum");
  fci->add_option("--levels", o.levels, "number of levels (default all)");
  auto* vqe = app.add_subcommand("vqe", "fixed-ansatz VQE (UCCSD by default)");
  auto* adapt = app.add_subcommand("adapt", "ADAPT-VQE");
  auto* uscc = app.add_subcommand("uscc", "screened coupled-cluster VQE");
  uscc->add_option("--max-round", o.max_round, "highest screening round");
  auto* nuvqe = app.add_subcommand("nuvqe", "VQE with a Jastrow factor");
  nuvqe->add_flag("--two-body", o.two_body, "include Z_i Z_j Jastrow terms");
  nuvqe->add_option("--theta0", o.theta0, "initial angle for every ansatz parameter");
  auto* vqd_cmd = app.add_subcommand("vqd", "variational quantum deflation");
  vqd_cmd->add_option("--levels", o.levels, "number of levels including the ground state");
  vqd_cmd->add_option("--beta", o.betas, "overlap penalties, one per earlier level");
  auto* fs = app.add_subcommand("fs", "folded-spectrum VQE");
  fs->add_option("--omega", o.omega, "target energy")->required();
  auto* qeom_cmd = app.add_subcommand("qeom", "equation-of-motion excitation energies");
  auto* scan = app.add_subcommand("scan", "run a scan config");
  scan->add_option("--config", o.config, "scan config (JSON)");
  scan->add_option("--workers", o.workers, "parallel points");
  scan->add_option("--summary", o.summary, "write summary JSON here");
  auto* pools = app.add_subcommand("pools", "dump an operator pool as JSON lines");
  pools->add_option("--max-round", o.max_round, "highest USCC screening round");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInputError;
  }
  if (o.verbose) log.set_level(spdlog::level::debug);
  if (o.format.empty()) o.format = scan->parsed() ? "csv" : (fci->parsed() ? "text" : "json");

  try {
    if (fci->parsed()) return cmd_fci(o, out);
    if (pools->parsed()) return cmd_pools(o, out);
    if (scan->parsed()) return cmd_scan(o, out, err, log);
    if (qeom_cmd->parsed()) return cmd_qeom(o, out);
    if (vqd_cmd->parsed()) return cmd_vqd(o, out);
    const Problem p = load_problem(o, true);
    const OptimizerConfig cfg = optimizer_config(o);
    log.debug("{}: {} qubits, sector {},{}", p.label, p.mi.n_spin_orbitals(), p.n_alpha, p.n_beta);
    if (vqe->parsed()) {
      return emit_result(o, p, minimize(p.h, p.reference, default_ansatz(p, o, "uccsd"), cfg), {}, out);
    }
    if (adapt->parsed()) {
      AdaptOptions ao;
      ao.eps = o.conv ? *o.conv : o.eps.value_or(1e-3);
      // --conv is the ADAPT gradient threshold here, not an optimizer tolerance
      OptimizerConfig c = cfg;
      c.energy_tol = OptimizerConfig{}.energy_tol;
      const OperatorPool pool = build_pool(p, o.pool.empty() ? "spin-complemented" : o.pool, o);
      return emit_result(o, p, adapt_vqe(p.h, p.reference, pool, ao, c), ao.eps, out);
    }
    if (uscc->parsed()) {
      const double eps = o.eps.value_or(1e-3);
      return emit_result(o, p, uscc_vqe(p.h, p.reference, p.mi, eps, cfg, o.max_round), eps, out);
    }
    if (nuvqe->parsed()) {
      const auto ops = default_ansatz(p, o, "uccsd");
      NuVqeOptions no;
      no.two_body = o.two_body;
      if (o.theta0) no.theta0.assign(ops.size(), *o.theta0);
      return emit_result(o, p, nu_vqe(p.h, p.reference, ops, no, cfg), {}, out);
    }
    if (fs->parsed()) {
      const auto ops = default_ansatz(p, o, "generalized");
      return emit_result(o, p, fs_vqe(p.h, p.reference, ops, *o.omega, FoldedOptions{}, cfg), {}, out);
    }
  } catch (const Error& e) {
    log.error("{}", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    log.error("{}", e.what());
    return kExitUnconverged;
  }
  err << app.help();
  return kExitInputError;
}

}  // namespace vqebench
