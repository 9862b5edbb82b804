// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/fermion.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "vqebench/errors.hpp"

#ifndef VQEBENCH_DATA_DIR
#define VQEBENCH_DATA_DIR "data"
#endif

namespace vqebench {

void TwoElectronIntegrals::set_symmetric(std::size_t p, std::size_t q, std::size_t r,
                                         std::size_t s, double value) {
  auto& self = *this;
  self(p, q, r, s) = value;
  self(q, p, r, s) = value;
  self(p, q, s, r) = value;
  self(q, p, s, r) = value;
  self(r, s, p, q) = value;
  self(s, r, p, q) = value;
  self(r, s, q, p) = value;
  self(s, r, q, p) = value;
}

std::uint64_t MolecularIntegrals::hf_occupation() const {
  std::uint64_t occ = 0;
  for (int i = 0; i < n_alpha; ++i) occ |= 1ULL << spin_orbital(static_cast<std::size_t>(i), 0);
  for (int i = 0; i < n_beta; ++i) occ |= 1ULL << spin_orbital(static_cast<std::size_t>(i), 1);
  return occ;
}

void MolecularIntegrals::validate(double tol) const {
  if (n_alpha < 0 || n_beta < 0 || static_cast<std::size_t>(n_alpha + n_beta) > 2 * n_spatial) {
    throw InputError("electron counts inconsistent with orbital count");
  }
  if (static_cast<std::size_t>(h1.rows()) != n_spatial ||
      static_cast<std::size_t>(h1.cols()) != n_spatial || h2.n() != n_spatial) {
    throw DimensionError("integral arrays do not match n_spatial");
  }
  if ((h1 - h1.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw InputError("one-electron integrals are not symmetric");
  }
}

// ---------------------------------------------------------------------------
// FCIDUMP

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::optional<long> namelist_int(const std::string& header, const std::string& key) {
  // Keys are matched as whole words followed by '='.
  std::size_t pos = 0;
  while ((pos = header.find(key, pos)) != std::string::npos) {
    const bool word_start =
        pos == 0 || !std::isalnum(static_cast<unsigned char>(header[pos - 1]));
    std::size_t eq = pos + key.size();
    while (eq < header.size() && header[eq] == ' ') ++eq;
    if (word_start && eq < header.size() && header[eq] == '=') {
      const char* begin = header.c_str() + eq + 1;
      char* end = nullptr;
      const long v = std::strtol(begin, &end, 10);
      if (end == begin) return std::nullopt;
      return v;
    }
    pos += key.size();
  }
  return std::nullopt;
}

bool header_terminated(const std::string& upper_line) {
  if (upper_line.find("&END") != std::string::npos) return true;
  const auto first = upper_line.find_first_not_of(" \t\r");
  return first != std::string::npos && upper_line[first] == '/';
}

}  // namespace

MolecularIntegrals parse_fcidump(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;

  std::string header;
  bool in_header = false;
  bool header_done = false;
  while (!header_done && std::getline(is, line)) {
    ++line_no;
    const std::string u = upper(line);
    if (!in_header) {
      if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
      if (u.find("&FCI") == std::string::npos) {
        throw ParseError("missing &FCI namelist header", line_no);
      }
      in_header = true;
    }
    header += u + ' ';
    if (header_terminated(u)) header_done = true;
  }
  if (!header_done) throw ParseError("unterminated &FCI namelist header", line_no);

  const auto norb = namelist_int(header, "NORB");
  const auto nelec = namelist_int(header, "NELEC");
  const long ms2 = namelist_int(header, "MS2").value_or(0);
  if (!norb || *norb <= 0) throw ParseError("header lacks a positive NORB", line_no);
  if (!nelec || *nelec < 0) throw ParseError("header lacks NELEC", line_no);
  if (((*nelec + ms2) % 2) != 0 || std::abs(ms2) > *nelec) {
    throw ParseError("NELEC and MS2 are inconsistent", line_no);
  }
  if (*nelec > 2 * *norb) throw ParseError("NELEC exceeds 2*NORB", line_no);
  if (*norb > 32) throw ParseError("NORB above 32 exceeds the 64-qubit limit", line_no);

  MolecularIntegrals mi;
  mi.n_spatial = static_cast<std::size_t>(*norb);
  mi.n_alpha = static_cast<int>((*nelec + ms2) / 2);
  mi.n_beta = static_cast<int>((*nelec - ms2) / 2);
  const std::size_t n = mi.n_spatial;
  mi.h1 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  mi.h2 = TwoElectronIntegrals(n);

  constexpr double kSymTol = 1e-10;
  std::vector<bool> h1_set(n * n, false);
  std::vector<bool> h2_set(n * n * n * n, false);
  auto h2_index = [n](std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return ((p * n + q) * n + r) * n + s;
  };

  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // Fortran-style exponents such as 1.0D-03.
    for (auto& c : line) {
      if (c == 'D' || c == 'd') c = 'E';
    }
    std::istringstream ls(line);
    double value = 0.0;
    long idx[4] = {0, 0, 0, 0};
    if (!(ls >> value >> idx[0] >> idx[1] >> idx[2] >> idx[3])) {
      throw ParseError("expected `value i j k l`", line_no);
    }
    for (long v : idx) {
      if (v < 0 || v > *norb) throw ParseError("orbital index out of range", line_no);
    }
    const bool has[4] = {idx[0] != 0, idx[1] != 0, idx[2] != 0, idx[3] != 0};
    if (!has[0] && !has[1] && !has[2] && !has[3]) {
      mi.e_core = value;
    } else if (has[0] && has[1] && has[2] && has[3]) {
      const auto p = static_cast<std::size_t>(idx[0] - 1);
      const auto q = static_cast<std::size_t>(idx[1] - 1);
      const auto r = static_cast<std::size_t>(idx[2] - 1);
      const auto s = static_cast<std::size_t>(idx[3] - 1);
      const std::array<std::array<std::size_t, 4>, 8> images = {{{p, q, r, s},
                                                                 {q, p, r, s},
                                                                 {p, q, s, r},
                                                                 {q, p, s, r},
                                                                 {r, s, p, q},
                                                                 {s, r, p, q},
                                                                 {r, s, q, p},
                                                                 {s, r, q, p}}};
      for (const auto& im : images) {
        const std::size_t k = h2_index(im[0], im[1], im[2], im[3]);
        if (h2_set[k] && std::abs(mi.h2(im[0], im[1], im[2], im[3]) - value) > kSymTol) {
          throw ParseError("two-electron entry violates 8-fold permutational symmetry", line_no);
        }
      }
      mi.h2.set_symmetric(p, q, r, s, value);
      for (const auto& im : images) h2_set[h2_index(im[0], im[1], im[2], im[3])] = true;
    } else if (has[0] && has[1] && !has[2] && !has[3]) {
      const auto p = static_cast<std::size_t>(idx[0] - 1);
      const auto q = static_cast<std::size_t>(idx[1] - 1);
      const auto ip = static_cast<Eigen::Index>(p);
      const auto iq = static_cast<Eigen::Index>(q);
      for (std::size_t k : {p * n + q, q * n + p}) {
        if (h1_set[k] && std::abs(mi.h1(static_cast<Eigen::Index>(k / n),
                                         static_cast<Eigen::Index>(k % n)) -
                                  value) > kSymTol) {
          throw ParseError("one-electron entry violates hermitian symmetry", line_no);
        }
      }
      mi.h1(ip, iq) = value;
      mi.h1(iq, ip) = value;
      h1_set[p * n + q] = h1_set[q * n + p] = true;
    } else if (has[0] && !has[1] && !has[2] && !has[3]) {
      // Orbital energy record; not needed.
    } else {
      throw ParseError("unrecognized index pattern", line_no);
    }
  }
  mi.validate();
  return mi;
}

MolecularIntegrals load_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open FCIDUMP file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  MolecularIntegrals mi = parse_fcidump(ss.str());
  mi.label = path.stem().string();
  return mi;
}

std::string write_fcidump(const MolecularIntegrals& mi, double tol) {
  const std::size_t n = mi.n_spatial;
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, " &FCI NORB=%zu,NELEC=%d,MS2=%d,\n", n, mi.n_alpha + mi.n_beta,
                mi.n_alpha - mi.n_beta);
  out += buf;
  out += "  ORBSYM=";
  for (std::size_t i = 0; i < n; ++i) out += "1,";
  out += "\n  ISYM=1,\n &END\n";
  auto emit = [&](double v, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    std::snprintf(buf, sizeof buf, " %.17g %zu %zu %zu %zu\n", v, i, j, k, l);
    out += buf;
  };
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * (p + 1) / 2 + q < r * (r + 1) / 2 + s) continue;
          const double v = mi.h2(p, q, r, s);
          if (std::abs(v) > tol) emit(v, p + 1, q + 1, r + 1, s + 1);
        }
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      const double v = mi.h1(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (std::abs(v) > tol) emit(v, p + 1, q + 1, 0, 0);
    }
  }
  emit(mi.e_core, 0, 0, 0, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Fermion operators

void FermionOperator::add_term(std::vector<LadderOp> ops, Complex coeff) {
  terms_.push_back({std::move(ops), coeff});
}

std::size_t FermionOperator::max_mode() const {
  std::size_t m = 0;
  for (const auto& t : terms_) {
    for (const auto& op : t.ops) m = std::max(m, op.mode);
  }
  return m;
}

FermionOperator FermionOperator::adjoint() const {
  FermionOperator out;
  for (const auto& t : terms_) {
    std::vector<LadderOp> ops(t.ops.rbegin(), t.ops.rend());
    for (auto& op : ops) op.dagger = !op.dagger;
    out.add_term(std::move(ops), std::conj(t.coeff));
  }
  return out;
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

FermionOperator& FermionOperator::operator*=(Complex s) {
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

FermionOperator build_hamiltonian(const MolecularIntegrals& mi) {
  FermionOperator h;
  const std::size_t n = mi.n_spatial;
  if (mi.e_core != 0.0) h.add_term({}, mi.e_core);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const double v = mi.h1(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (v == 0.0) continue;
      for (int spin = 0; spin < 2; ++spin) {
        h.add_term({{MolecularIntegrals::spin_orbital(p, spin), true},
                    {MolecularIntegrals::spin_orbital(q, spin), false}},
                   v);
      }
    }
  }
  // 1/2 sum (pq|rs) a+_{p s1} a+_{r s2} a_{s s2} a_{q s1}, i.e. physicists' <pr|qs>.
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
          const double v = mi.h2(p, q, r, s);
          if (v == 0.0) continue;
          for (int s1 = 0; s1 < 2; ++s1) {
            for (int s2 = 0; s2 < 2; ++s2) {
              const std::size_t ps = MolecularIntegrals::spin_orbital(p, s1);
              const std::size_t qs = MolecularIntegrals::spin_orbital(q, s1);
              const std::size_t rs = MolecularIntegrals::spin_orbital(r, s2);
              const std::size_t ss = MolecularIntegrals::spin_orbital(s, s2);
              if (ps == rs || qs == ss) continue;
              h.add_term({{ps, true}, {rs, true}, {ss, false}, {qs, false}}, 0.5 * v);
            }
          }
        }
      }
    }
  }
  return h;
}

FermionOperator number_operator(std::size_t n_modes) {
  FermionOperator n;
  for (std::size_t p = 0; p < n_modes; ++p) n.add_term({{p, true}, {p, false}}, 1.0);
  return n;
}

namespace {

struct MaskHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
  }
};

}  // namespace

QubitOperator jordan_wigner(const FermionOperator& f, std::size_t n_qubits) {
  if (n_qubits > kMaxQubits) throw DimensionError("too many qubits for Jordan-Wigner");
  for (const auto& t : f.terms()) {
    for (const auto& op : t.ops) {
      if (op.mode >= n_qubits) {
        throw DimensionError("fermionic mode " + std::to_string(op.mode) +
                             " exceeds qubit count " + std::to_string(n_qubits));
      }
    }
  }
  // Accumulate in a hash map keyed by masks, then move into canonical order.
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Complex, MaskHash> acc;
  std::vector<std::pair<PauliString, Complex>> cur;
  std::vector<std::pair<PauliString, Complex>> next;
  for (const auto& t : f.terms()) {
    cur.assign(1, {PauliString(n_qubits), t.coeff});
    for (const auto& op : t.ops) {
      // a+_p = Z_{<p} (X_p - iY_p)/2 ; a_p = Z_{<p} (X_p + iY_p)/2
      const std::uint64_t tail = (1ULL << op.mode) - 1;
      const std::uint64_t bit = 1ULL << op.mode;
      const PauliString xs(n_qubits, bit, tail);
      const PauliString ys(n_qubits, bit, tail | bit);
      const Complex cy = op.dagger ? Complex(0, -0.5) : Complex(0, 0.5);
      next.clear();
      for (const auto& [p, c] : cur) {
        const PauliProduct px = pauli_mul(p, xs);
        next.emplace_back(px.string, c * 0.5 * px.phase());
        const PauliProduct py = pauli_mul(p, ys);
        next.emplace_back(py.string, c * cy * py.phase());
      }
      cur.swap(next);
    }
    for (const auto& [p, c] : cur) acc[{p.x_mask(), p.z_mask()}] += c;
  }
  QubitOperator out(n_qubits);
  for (const auto& [k, c] : acc) {
    if (std::abs(c) > kPruneTolerance) out.add_term(PauliString(n_qubits, k.first, k.second), c);
  }
  return out;
}

QubitOperator qubit_hamiltonian(const MolecularIntegrals& mi) {
  return jordan_wigner(build_hamiltonian(mi), mi.n_spin_orbitals());
}

QubitOperator map_to_qubits(const FermionOperator& f, std::size_t n_qubits,
                            FermionMapping mapping) {
  if (mapping != FermionMapping::jordan_wigner) {
    throw Error("only the Jordan-Wigner mapping is implemented");
  }
  return jordan_wigner(f, n_qubits);
}

// ---------------------------------------------------------------------------
// Excitation generators

std::string_view to_string(ExcitationKind kind) {
  switch (kind) {
    case ExcitationKind::single: return "single";
    case ExcitationKind::double_: return "double";
    case ExcitationKind::triple: return "triple";
    case ExcitationKind::quadruple: return "quadruple";
    case ExcitationKind::pauli: return "pauli";
  }
  return "?";
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::uccsd: return "uccsd";
    case Provenance::generalized: return "generalized";
    case Provenance::uscc_connected: return "uscc-connected";
    case Provenance::uscc_disconnected: return "uscc-disconnected";
    case Provenance::qubit_pool: return "qubit-pool";
  }
  return "?";
}

ExcitationKind kind_for_rank(std::size_t rank) {
  switch (rank) {
    case 1: return ExcitationKind::single;
    case 2: return ExcitationKind::double_;
    case 3: return ExcitationKind::triple;
    case 4: return ExcitationKind::quadruple;
    default: throw InvalidGeneratorError("unsupported excitation rank " + std::to_string(rank));
  }
}

bool ExcitationGenerator::spin_conserving() const {
  if (annihilated.size() != created.size()) return false;
  auto alpha_count = [](const std::vector<std::size_t>& v) {
    return std::count_if(v.begin(), v.end(), [](std::size_t m) { return m % 2 == 0; });
  };
  return alpha_count(annihilated) == alpha_count(created);
}

FermionOperator ExcitationGenerator::excitation() const {
  std::vector<LadderOp> ops;
  ops.reserve(created.size() + annihilated.size());
  for (std::size_t c : created) ops.push_back({c, true});
  for (auto it = annihilated.rbegin(); it != annihilated.rend(); ++it) ops.push_back({*it, false});
  FermionOperator t;
  t.add_term(std::move(ops), 1.0);
  return t;
}

std::string ExcitationGenerator::label() const {
  std::string s;
  for (std::size_t i = 0; i < created.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(created[i]);
  }
  s += "<-";
  for (std::size_t i = 0; i < annihilated.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(annihilated[i]);
  }
  return s;
}

QubitOperator realize_generator(const ExcitationGenerator& g, std::size_t n_qubits) {
  if (!g.spin_conserving()) {
    throw InvalidGeneratorError("excitation " + g.label() + " does not conserve spin");
  }
  const FermionOperator t = g.excitation();
  const QubitOperator jt = jordan_wigner(t, n_qubits);
  QubitOperator a = simplify(jt - jt.adjoint());
  if (a.empty()) throw InvalidGeneratorError("excitation " + g.label() + " realizes to zero");
  return a;
}

// ---------------------------------------------------------------------------
// Fixture manifest

FixtureManifest FixtureManifest::load(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw InputError("cannot open fixture manifest " + manifest_path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0);
  }
  FixtureManifest m;
  const auto dir = manifest_path.parent_path();
  try {
    for (const auto& e : j.at("fixtures")) {
      FixtureEntry f;
      f.label = e.at("label").get<std::string>();
      f.molecule = e.value("molecule", std::string{});
      f.basis = e.value("basis", std::string{});
      f.R = e.value("R", 0.0);
      f.geometry = e.value("geometry", std::string{});
      f.path = dir / e.at("path").get<std::string>();
      f.n_qubits = e.value("n_qubits", std::size_t{0});
      f.hf_energy = e.value("hf_energy", 0.0);
      f.fci_ground_energy = e.at("fci_ground_energy").get<double>();
      m.entries_.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0);
  }
  return m;
}

std::filesystem::path FixtureManifest::bundled_path() {
  if (const char* env = std::getenv("VQEBENCH_MANIFEST"); env != nullptr && *env != '\0') {
    return env;
  }
  return std::filesystem::path(VQEBENCH_DATA_DIR) / "fixtures" / "manifest.json";
}

FixtureManifest FixtureManifest::bundled() { return load(bundled_path()); }

const FixtureEntry& FixtureManifest::find(std::string_view label) const {
  for (const auto& e : entries_) {
    if (e.label == label) return e;
  }
  throw InputError("unknown fixture '" + std::string(label) + "'");
}

bool FixtureManifest::contains(std::string_view label) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const FixtureEntry& e) { return e.label == label; });
}

std::vector<FixtureEntry> FixtureManifest::series(std::string_view molecule,
                                                  std::string_view basis) const {
  std::vector<FixtureEntry> out;
  for (const auto& e : entries_) {
    if (upper(e.molecule) == upper(std::string(molecule)) && upper(e.basis) == upper(std::string(basis))) out.push_back(e);
  }
  std::sort(out.begin(), out.end(),
            [](const FixtureEntry& a, const FixtureEntry& b) { return a.R < b.R; });
  return out;
}

MolecularIntegrals FixtureManifest::load_integrals(std::string_view label) const {
  const FixtureEntry& e = find(label);
  MolecularIntegrals mi = load_fcidump(e.path);
  mi.label = e.label;
  return mi;
}

}  // namespace vqebench
