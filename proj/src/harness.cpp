// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "vqebench/fci.hpp"
#include "vqebench/pools.hpp"
#include "vqebench/statevector.hpp"
#include "vqebench/vqe.hpp"

namespace vqebench {

std::string MethodSpec::method_name() const {
  if (flavor == "adapt" && pool != "spin-complemented") return flavor + ":" + pool;
  return flavor;
}

namespace {

const std::vector<std::string> kFlavors{"hf", "vqe", "adapt", "uscc", "nuvqe"};

MethodSpec method_from_json(const nlohmann::json& j) {
  MethodSpec m;
  if (j.is_string()) {
    // "adapt@1e-2" shorthand
    const auto s = j.get<std::string>();
    const auto at = s.find('@');
    m.flavor = s.substr(0, at);
    if (at != std::string::npos) {
      try {
        m.eps = std::stod(s.substr(at + 1));
      } catch (const std::exception&) {
        throw InputError("bad threshold in scan method '" + s + "'");
      }
    }
  } else {
    m.flavor = j.at("flavor").get<std::string>();
    if (j.contains("eps")) m.eps = j.at("eps").get<double>();
    m.pool = j.value("pool", m.pool);
  }
  if (std::find(kFlavors.begin(), kFlavors.end(), m.flavor) == kFlavors.end()) {
    throw InputError("unknown scan method '" + m.flavor + "'");
  }
  return m;
}

}  // namespace

ScanSpec ScanSpec::from_json(const nlohmann::json& j) {
  ScanSpec s;
  try {
    for (const auto& f : j.value("fixtures", nlohmann::json::array())) {
      if (f.is_string()) {
        s.labels.push_back(f.get<std::string>());
      } else {
        Series ser;
        ser.molecule = f.at("molecule").get<std::string>();
        ser.basis = f.at("basis").get<std::string>();
        ser.grid = f.value("grid", std::vector<double>{});
        s.series.push_back(std::move(ser));
      }
    }
    for (const auto& m : j.value("methods", nlohmann::json::array())) s.methods.push_back(method_from_json(m));
    if (j.contains("sector")) {
      const auto v = j.at("sector").get<std::vector<int>>();
      if (v.size() != 2) throw InputError("sector must be [n_alpha, n_beta]");
      s.sector = std::make_pair(v[0], v[1]);
    }
    s.output = j.value("output", std::string{});
    s.manifest = j.value("manifest", std::string{});
    s.seed = j.value("seed", s.seed);
    s.workers = std::max<std::size_t>(1, j.value("workers", s.workers));
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      if (o.contains("method")) s.optimizer.method = parse_optimizer_method(o.at("method").get<std::string>());
      s.optimizer.energy_tol = o.value("energy_tol", s.optimizer.energy_tol);
      s.optimizer.grad_tol = o.value("grad_tol", s.optimizer.grad_tol);
      s.optimizer.max_evaluations = o.value("max_evaluations", s.optimizer.max_evaluations);
      s.optimizer.restarts = o.value("restarts", s.optimizer.restarts);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("scan config: ") + e.what());
  }
  s.optimizer.seed = s.seed;
  return s;
}

ScanSpec ScanSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scan config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("scan config " + path.string() + ": " + e.what());
  }
  ScanSpec s = from_json(j);
  if (!s.manifest.empty() && s.manifest.is_relative()) s.manifest = path.parent_path() / s.manifest;
  return s;
}

std::vector<FixtureEntry> preflight(const ScanSpec& spec, const FixtureManifest& manifest) {
  std::vector<std::string> problems;
  std::vector<FixtureEntry> points;
  for (const auto& label : spec.labels) {
    if (manifest.contains(label)) points.push_back(manifest.find(label));
    else problems.push_back("fixture '" + label + "' is not in the manifest");
  }
  for (const auto& ser : spec.series) {
    const auto all = manifest.series(ser.molecule, ser.basis);
    if (all.empty()) {
      problems.push_back("no fixtures for " + ser.molecule + "/" + ser.basis);
      continue;
    }
    if (ser.grid.empty()) {
      points.insert(points.end(), all.begin(), all.end());
      continue;
    }
    for (double r : ser.grid) {
      const auto it = std::find_if(all.begin(), all.end(),
                                   [&](const FixtureEntry& e) { return std::abs(e.R - r) < 1e-6; });
      if (it == all.end()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g", r);
        problems.push_back("no fixture for " + ser.molecule + "/" + ser.basis + " at R=" + buf);
      } else {
        points.push_back(*it);
      }
    }
  }
  for (const auto& p : points) {
    if (!std::filesystem::exists(p.path)) problems.push_back("fixture file missing: " + p.path.string());
  }
  for (const auto& m : spec.methods) {
    if (m.eps && !(*m.eps > 0.0)) problems.push_back("threshold for " + m.flavor + " must be positive");
    if ((m.flavor == "adapt" || m.flavor == "uscc") && !m.eps) {
      problems.push_back(m.flavor + " needs a threshold eps");
    }
    if (m.flavor == "adapt" && m.pool != "uccsd" && m.pool != "generalized" &&
        m.pool != "spin-complemented" && m.pool != "qubit") {
      problems.push_back("unknown ADAPT pool '" + m.pool + "'");
    }
  }
  if (!problems.empty()) {
    std::string msg = "scan preflight failed:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw PreflightError(msg, problems);
  }
  return points;
}

namespace {

std::uint64_t occupation_for(int n_alpha, int n_beta) {
  std::uint64_t occ = 0;
  for (int i = 0; i < n_alpha; ++i) occ |= std::uint64_t{1} << (2 * i);
  for (int i = 0; i < n_beta; ++i) occ |= std::uint64_t{1} << (2 * i + 1);
  return occ;
}

std::string status_of(const VQEResult& r) {
  std::string s = r.status();
  for (const auto& f : r.flags)
    if (f != "unconverged") s += "|" + f;
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<ScanRow> run_point(const FixtureEntry& entry, const ScanSpec& spec,
                               const FixtureManifest& manifest) {
  std::vector<ScanRow> rows;
  auto base_row = [&](const MethodSpec& m) {
    ScanRow row;
    row.molecule = entry.molecule;
    row.basis = entry.basis;
    row.label = entry.label;
    row.R = entry.R;
    row.method = m.method_name();
    row.eps = m.eps;
    return row;
  };
  auto fail_all = [&](const std::string& why) {
    for (const auto& m : spec.methods) {
      ScanRow row = base_row(m);
      row.energy = row.e_fci = row.abs_err = std::numeric_limits<double>::quiet_NaN();
      row.status = "error: " + why;
      rows.push_back(std::move(row));
    }
    return rows;
  };

  MolecularIntegrals mi;
  QubitOperator h;
  double e_fci = 0.0;
  Statevector reference;
  try {
    mi = manifest.load_integrals(entry.label);
    h = qubit_hamiltonian(mi);
    const std::size_t n = mi.n_spin_orbitals();
    const int na = spec.sector ? spec.sector->first : mi.n_alpha;
    const int nb = spec.sector ? spec.sector->second : mi.n_beta;
    e_fci = fci_solve(h, SectorBasis::make(n, na, nb), 1).at(0).energy;
    reference = hf_state(n, occupation_for(na, nb));
  } catch (const std::exception& e) {
    return fail_all(e.what());
  }

  // ADAPT runs are shared per pool: the loosest thresholds are read off the
  // trace of the tightest one.
  std::map<std::string, double> adapt_eps;
  for (const auto& m : spec.methods) {
    if (m.flavor != "adapt") continue;
    auto [it, fresh] = adapt_eps.emplace(m.pool, *m.eps);
    if (!fresh) it->second = std::min(it->second, *m.eps);
  }
  std::map<std::string, std::pair<VQEResult, double>> adapt_runs;
  std::map<std::string, std::string> adapt_errors;

  for (const auto& m : spec.methods) {
    ScanRow row = base_row(m);
    row.e_fci = e_fci;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      VQEResult r;
      if (m.flavor == "hf") {
        r.energy = expectation(reference, h).real();
        r.converged = true;
      } else if (m.flavor == "vqe") {
        r = minimize(h, reference, uccsd_pool(mi).operators(), spec.optimizer);
      } else if (m.flavor == "uscc") {
        r = uscc_vqe(h, reference, mi, *m.eps, spec.optimizer);
      } else if (m.flavor == "nuvqe") {
        r = nu_vqe(h, reference, uccsd_pool(mi).operators(), NuVqeOptions{}, spec.optimizer);
      } else if (m.flavor == "adapt") {
        if (adapt_errors.count(m.pool)) throw Error(adapt_errors[m.pool]);
        if (!adapt_runs.count(m.pool)) {
          const OperatorPool pool = named_pool(mi, m.pool);
          AdaptOptions ao;
          ao.eps = adapt_eps[m.pool];
          try {
            adapt_runs.emplace(m.pool, std::make_pair(adapt_vqe(h, reference, pool, ao, spec.optimizer),
                                                      seconds_since(t0)));
          } catch (const std::exception& e) {
            adapt_errors[m.pool] = e.what();
            throw;
          }
        }
        const auto& [full, elapsed] = adapt_runs.at(m.pool);
        r = adapt_at_threshold(full, *m.eps);
        row.wall_time = elapsed;
      }
      row.energy = r.energy;
      row.n_params = r.parameters.size();
      row.n_iterations = r.iterations;
      row.status = status_of(r);
    } catch (const std::exception& e) {
      row.energy = std::numeric_limits<double>::quiet_NaN();
      row.status = std::string("error: ") + e.what();
    }
    if (row.wall_time == 0.0) row.wall_time = seconds_since(t0);
    row.abs_err = std::abs(row.energy - e_fci);
    if (row.energy < e_fci - 1e-9) row.status += "|variational_violation";
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<ScanRow> run_scan(const ScanSpec& spec, const FixtureManifest& manifest) {
  const std::vector<FixtureEntry> points = preflight(spec, manifest);
  if (spec.methods.empty()) return {};
  std::vector<std::vector<ScanRow>> per_point(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
      per_point[i] = run_point(points[i], spec, manifest);
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(spec.workers, 1, std::max<std::size_t>(1, points.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<ScanRow> rows;
  for (auto& p : per_point) rows.insert(rows.end(), p.begin(), p.end());
  return rows;
}

std::vector<ScanRow> run_scan(const ScanSpec& spec) {
  const FixtureManifest manifest =
      spec.manifest.empty() ? FixtureManifest::bundled() : FixtureManifest::load(spec.manifest);
  return run_scan(spec, manifest);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v, const char* fmt = "%.12f") {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string eps_text(const std::optional<double>& e) { return e ? num(*e, "%g") : std::string(); }

}  // namespace

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows, bool wall_time) {
  os << kScanCsvVersion << '\n';
  os << "molecule,basis,label,R,method,eps,energy,e_fci,abs_err,n_params,n_iterations,status";
  if (wall_time) os << ",wall_time";
  os << '\n';
  for (const auto& r : rows) {
    os << csv_field(r.molecule) << ',' << csv_field(r.basis) << ',' << csv_field(r.label) << ','
       << num(r.R, "%g") << ',' << csv_field(r.method) << ',' << eps_text(r.eps) << ','
       << num(r.energy) << ',' << num(r.e_fci) << ',' << num(r.abs_err, "%.6e") << ','
       << r.n_params << ',' << r.n_iterations << ',' << csv_field(r.status);
    if (wall_time) os << ',' << num(r.wall_time, "%.3f");
    os << '\n';
  }
}

void write_jsonl(std::ostream& os, const std::vector<ScanRow>& rows) {
  for (const auto& r : rows) {
    nlohmann::json j{{"molecule", r.molecule}, {"basis", r.basis},     {"label", r.label},
                     {"R", r.R},               {"method", r.method},   {"energy", r.energy},
                     {"e_fci", r.e_fci},       {"abs_err", r.abs_err}, {"n_params", r.n_params},
                     {"n_iterations", r.n_iterations}, {"status", r.status},
                     {"wall_time", r.wall_time}};
    j["eps"] = r.eps ? nlohmann::json(*r.eps) : nlohmann::json(nullptr);
    os << j.dump() << '\n';
  }
}

Summary summarize(const std::vector<ScanRow>& rows) {
  Summary s;
  using Key = std::tuple<std::string, std::string, std::string, double, bool>;
  std::map<Key, std::vector<const ScanRow*>> groups;
  std::vector<Key> order;
  for (const auto& r : rows) {
    Key k{r.molecule, r.basis, r.method, r.eps.value_or(0.0), r.eps.has_value()};
    auto [it, fresh] = groups.try_emplace(k);
    if (fresh) order.push_back(k);
    it->second.push_back(&r);
  }
  for (const auto& k : order) {
    const auto& g = groups[k];
    SummaryRow row;
    row.molecule = std::get<0>(k);
    row.basis = std::get<1>(k);
    row.method = std::get<2>(k);
    if (std::get<4>(k)) row.eps = std::get<3>(k);
    row.n_points = g.size();
    row.min_params = std::numeric_limits<std::size_t>::max();
    std::size_t within = 0;
    double total = 0.0;
    for (const auto* r : g) {
      total += static_cast<double>(r->n_params);
      row.min_params = std::min(row.min_params, r->n_params);
      row.max_params = std::max(row.max_params, r->n_params);
      if (r->abs_err < kChemicalAccuracy) ++within;
      row.max_abs_err = std::max(row.max_abs_err, std::isnan(r->abs_err) ? INFINITY : r->abs_err);
    }
    row.mean_params = total / static_cast<double>(g.size());
    row.frac_chemical_accuracy = static_cast<double>(within) / static_cast<double>(g.size());
    s.groups.push_back(std::move(row));
  }
  for (const auto& u : s.groups) {
    if (u.method != "uscc") continue;
    for (const auto& a : s.groups) {
      if (a.method != "adapt" || a.molecule != u.molecule || a.basis != u.basis || a.eps != u.eps) continue;
      if (a.mean_params > 0) {
        s.ratios.push_back({u.molecule, u.basis, u.eps, "uscc", "adapt", u.mean_params / a.mean_params});
      }
    }
  }
  return s;
}

nlohmann::json to_json(const Summary& s) {
  nlohmann::json j;
  j["groups"] = nlohmann::json::array();
  for (const auto& g : s.groups) {
    j["groups"].push_back({{"molecule", g.molecule},
                           {"basis", g.basis},
                           {"method", g.method},
                           {"eps", g.eps ? nlohmann::json(*g.eps) : nlohmann::json(nullptr)},
                           {"n_points", g.n_points},
                           {"mean_params", g.mean_params},
                           {"min_params", g.min_params},
                           {"max_params", g.max_params},
                           {"frac_chemical_accuracy", g.frac_chemical_accuracy},
                           {"max_abs_err", g.max_abs_err}});
  }
  j["ratios"] = nlohmann::json::array();
  for (const auto& r : s.ratios) {
    j["ratios"].push_back({{"molecule", r.molecule},
                           {"basis", r.basis},
                           {"eps", r.eps ? nlohmann::json(*r.eps) : nlohmann::json(nullptr)},
                           {"numerator", r.numerator},
                           {"denominator", r.denominator},
                           {"ratio", r.ratio}});
  }
  return j;
}

}  // namespace vqebench
