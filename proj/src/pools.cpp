// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqebench/pools.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vqebench/errors.hpp"

namespace vqebench {

std::string_view to_string(PoolFlavor flavor) {
  switch (flavor) {
    case PoolFlavor::uccsd: return "uccsd";
    case PoolFlavor::generalized: return "generalized";
    case PoolFlavor::qubit: return "qubit";
    case PoolFlavor::uscc: return "uscc";
  }
  return "?";
}

PoolFlavor parse_pool_flavor(std::string_view name) {
  if (name == "uccsd") return PoolFlavor::uccsd;
  if (name == "generalized" || name == "gsd" || name == "guccsd") return PoolFlavor::generalized;
  if (name == "qubit") return PoolFlavor::qubit;
  if (name == "uscc") return PoolFlavor::uscc;
  throw InputError("unknown pool flavor '" + std::string(name) + "'");
}

std::vector<QubitOperator> OperatorPool::operators() const {
  std::vector<QubitOperator> ops;
  ops.reserve(entries.size());
  for (const auto& e : entries) ops.push_back(e.op);
  return ops;
}

namespace {

using IndexKey = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

int spin_of(std::size_t so) { return static_cast<int>(so & 1); }
std::size_t spatial_of(std::size_t so) { return so >> 1; }

void split_occupation(const MolecularIntegrals& mi, std::vector<std::size_t>& occ,
                      std::vector<std::size_t>& virt) {
  const std::uint64_t hf = mi.hf_occupation();
  for (std::size_t p = 0; p < mi.n_spin_orbitals(); ++p) {
    ((hf >> p) & 1 ? occ : virt).push_back(p);
  }
}

/// Appends the realized generator unless it vanishes or breaks spin.
bool push_generator(OperatorPool& pool, ExcitationGenerator g) {
  if (!g.spin_conserving()) return false;
  QubitOperator op;
  try {
    op = realize_generator(g, pool.n_qubits);
  } catch (const InvalidGeneratorError&) {
    return false;
  }
  PoolEntry e;
  e.label = g.label();
  e.generator = std::move(g);
  e.op = std::move(op);
  pool.entries.push_back(std::move(e));
  return true;
}

ExcitationGenerator make_generator(std::vector<std::size_t> from, std::vector<std::size_t> to,
                                   Provenance provenance) {
  std::sort(from.begin(), from.end());
  std::sort(to.begin(), to.end());
  ExcitationGenerator g;
  g.kind = kind_for_rank(from.size());
  g.annihilated = std::move(from);
  g.created = std::move(to);
  g.provenance = provenance;
  return g;
}

bool spins_match(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) {
  int a = 0;
  for (auto p : from) a += spin_of(p) ? -1 : 1;
  for (auto p : to) a -= spin_of(p) ? -1 : 1;
  return a == 0;
}

}  // namespace

OperatorPool uccsd_pool(const MolecularIntegrals& mi) {
  OperatorPool pool;
  pool.flavor = PoolFlavor::uccsd;
  pool.n_qubits = mi.n_spin_orbitals();
  std::vector<std::size_t> occ, virt;
  split_occupation(mi, occ, virt);
  for (auto i : occ) {
    for (auto a : virt) {
      if (spin_of(i) == spin_of(a)) push_generator(pool, make_generator({i}, {a}, Provenance::uccsd));
    }
  }
  for (std::size_t x = 0; x < occ.size(); ++x) {
    for (std::size_t y = x + 1; y < occ.size(); ++y) {
      for (std::size_t u = 0; u < virt.size(); ++u) {
        for (std::size_t v = u + 1; v < virt.size(); ++v) {
          std::vector<std::size_t> from{occ[x], occ[y]}, to{virt[u], virt[v]};
          if (spins_match(from, to)) push_generator(pool, make_generator(from, to, Provenance::uccsd));
        }
      }
    }
  }
  return pool;
}

OperatorPool generalized_pool(const MolecularIntegrals& mi) {
  OperatorPool pool;
  pool.flavor = PoolFlavor::generalized;
  const std::size_t n = mi.n_spin_orbitals();
  pool.n_qubits = n;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (spin_of(p) == spin_of(q)) push_generator(pool, make_generator({p}, {q}, Provenance::generalized));
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) pairs.emplace_back(p, q);
  }
  // T - T^dagger for (pq)->(rs) equals minus the (rs)->(pq) generator, so
  // each unordered pair of pairs appears once.
  for (std::size_t x = 0; x < pairs.size(); ++x) {
    for (std::size_t y = x + 1; y < pairs.size(); ++y) {
      std::vector<std::size_t> from{pairs[x].first, pairs[x].second};
      std::vector<std::size_t> to{pairs[y].first, pairs[y].second};
      if (spins_match(from, to)) push_generator(pool, make_generator(from, to, Provenance::generalized));
    }
  }
  return pool;
}

OperatorPool qubit_pool(const OperatorPool& base) {
  OperatorPool pool;
  pool.flavor = PoolFlavor::qubit;
  pool.n_qubits = base.n_qubits;
  std::set<PauliString> seen;
  for (const auto& e : base.entries) {
    for (const auto& [p, c] : e.op.terms()) {
      if (p.x_mask() == 0 || !seen.insert(p).second) continue;
      PoolEntry q;
      q.generator.kind = ExcitationKind::pauli;
      q.generator.provenance = Provenance::qubit_pool;
      q.op.add_term(p, Complex(0, 1));
      q.label = p.word();
      pool.entries.push_back(std::move(q));
    }
  }
  return pool;
}

OperatorPool spin_complemented(const OperatorPool& base) {
  OperatorPool pool;
  pool.flavor = base.flavor;
  pool.n_qubits = base.n_qubits;
  auto flip = [](std::vector<std::size_t> v) {
    for (auto& p : v) p ^= 1;
    return v;
  };
  std::map<IndexKey, std::size_t> index;
  for (std::size_t k = 0; k < base.size(); ++k) {
    const auto& g = base.entries[k].generator;
    index.emplace(IndexKey{g.annihilated, g.created}, k);
  }
  std::vector<bool> used(base.size(), false);
  for (std::size_t k = 0; k < base.size(); ++k) {
    if (used[k]) continue;
    used[k] = true;
    PoolEntry e = base.entries[k];
    const auto& g = e.generator;
    if (g.kind == ExcitationKind::pauli) {
      pool.entries.push_back(std::move(e));
      continue;
    }
    ExcitationGenerator partner = g;
    partner.annihilated = flip(g.annihilated);
    partner.created = flip(g.created);
    auto sorted = [](std::vector<std::size_t> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    const auto it = index.find({sorted(partner.annihilated), sorted(partner.created)});
    if (it != index.end() && !used[it->second]) {
      // Index order is kept unsorted so the partner carries the same sign
      // convention as the spin-flipped T.
      QubitOperator sum = simplify(e.op + realize_generator(partner, base.n_qubits));
      if (!sum.empty()) {
        used[it->second] = true;
        sum *= Complex(std::sqrt(0.5), 0.0);
        e.op = std::move(sum);
        e.label += "+" + base.entries[it->second].label;
      }
    }
    pool.entries.push_back(std::move(e));
  }
  return pool;
}

OperatorPool named_pool(const MolecularIntegrals& mi, std::string_view name) {
  if (name == "spin-complemented" || name == "sc") return spin_complemented(generalized_pool(mi));
  switch (parse_pool_flavor(name)) {
    case PoolFlavor::uccsd: return uccsd_pool(mi);
    case PoolFlavor::generalized: return generalized_pool(mi);
    case PoolFlavor::qubit: return qubit_pool(generalized_pool(mi));
    case PoolFlavor::uscc: break;
  }
  throw InputError("pool '" + std::string(name) + "' needs a screening threshold");
}

double antisymmetrized_integral(const MolecularIntegrals& mi, std::size_t p, std::size_t q,
                                std::size_t r, std::size_t s) {
  // <pq|rs> = (pr|qs) delta(sp, sr) delta(sq, ss)
  auto direct = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    if (spin_of(a) != spin_of(c) || spin_of(b) != spin_of(d)) return 0.0;
    return mi.h2(spatial_of(a), spatial_of(c), spatial_of(b), spatial_of(d));
  };
  return direct(p, q, r, s) - direct(p, q, s, r);
}

std::vector<double> spin_orbital_fock_diagonal(const MolecularIntegrals& mi) {
  std::vector<std::size_t> occ, virt;
  split_occupation(mi, occ, virt);
  std::vector<double> f(mi.n_spin_orbitals());
  for (std::size_t p = 0; p < f.size(); ++p) {
    double v = mi.h1(static_cast<Eigen::Index>(spatial_of(p)), static_cast<Eigen::Index>(spatial_of(p)));
    for (auto i : occ) v += antisymmetrized_integral(mi, p, i, p, i);
    f[p] = v;
  }
  return f;
}

double AmplitudeEstimate::double_amplitude(std::size_t i, std::size_t j, std::size_t a,
                                           std::size_t b) const {
  const std::size_t no = occupied.size();
  const std::size_t nv = virtuals.size();
  return t2[((i * no + j) * nv + a) * nv + b];
}

AmplitudeEstimate mp2_amplitudes(const MolecularIntegrals& mi) {
  AmplitudeEstimate t;
  t.source = "mp2";
  split_occupation(mi, t.occupied, t.virtuals);
  const std::size_t no = t.occupied.size();
  const std::size_t nv = t.virtuals.size();
  t.t1 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(no), static_cast<Eigen::Index>(nv));
  t.t2.assign(no * no * nv * nv, 0.0);
  const auto f = spin_orbital_fock_diagonal(mi);
  for (std::size_t i = 0; i < no; ++i) {
    for (std::size_t j = 0; j < no; ++j) {
      if (i == j) continue;
      for (std::size_t a = 0; a < nv; ++a) {
        for (std::size_t b = 0; b < nv; ++b) {
          if (a == b) continue;
          const std::size_t I = t.occupied[i], J = t.occupied[j];
          const std::size_t A = t.virtuals[a], B = t.virtuals[b];
          const double v = antisymmetrized_integral(mi, I, J, A, B);
          if (v == 0.0) continue;
          const double denom = f[I] + f[J] - f[A] - f[B];
          if (std::abs(denom) < 1e-8) {
            ++t.degenerate_denominators;
            continue;
          }
          t.t2[((i * no + j) * nv + a) * nv + b] = v / denom;
        }
      }
    }
  }
  return t;
}

double mp2_correlation_energy(const MolecularIntegrals& mi, const AmplitudeEstimate& t) {
  double e = 0.0;
  const std::size_t no = t.occupied.size();
  const std::size_t nv = t.virtuals.size();
  for (std::size_t i = 0; i < no; ++i)
    for (std::size_t j = 0; j < no; ++j)
      for (std::size_t a = 0; a < nv; ++a)
        for (std::size_t b = 0; b < nv; ++b)
          e += 0.25 *
               antisymmetrized_integral(mi, t.occupied[i], t.occupied[j], t.virtuals[a], t.virtuals[b]) *
               t.double_amplitude(i, j, a, b);
  return e;
}

namespace {

struct Candidate {
  std::vector<std::size_t> from, to;  // sorted
  double value = 0.0;
};

bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  for (auto x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return false;
  return true;
}

std::vector<std::size_t> merged(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

OperatorPool uscc_screen(const MolecularIntegrals& mi, const AmplitudeEstimate& t, double eps,
                         int max_round) {
  if (!(eps > 0.0)) throw InputError("USCC threshold must be positive");
  OperatorPool pool;
  pool.flavor = PoolFlavor::uscc;
  pool.n_qubits = mi.n_spin_orbitals();
  const std::size_t no = t.occupied.size();
  const std::size_t nv = t.virtuals.size();

  // Connected candidates, scored by the bare Hamiltonian element.
  std::vector<Candidate> singles, doubles;
  for (std::size_t i = 0; i < no; ++i) {
    for (std::size_t a = 0; a < nv; ++a) {
      const std::size_t I = t.occupied[i], A = t.virtuals[a];
      if (spin_of(I) != spin_of(A)) continue;
      const double v = std::abs(mi.h1(static_cast<Eigen::Index>(spatial_of(I)),
                                       static_cast<Eigen::Index>(spatial_of(A))));
      singles.push_back({{I}, {A}, v});
    }
  }
  for (std::size_t i = 0; i < no; ++i)
    for (std::size_t j = i + 1; j < no; ++j)
      for (std::size_t a = 0; a < nv; ++a)
        for (std::size_t b = a + 1; b < nv; ++b) {
          std::vector<std::size_t> from{t.occupied[i], t.occupied[j]};
          std::vector<std::size_t> to{t.virtuals[a], t.virtuals[b]};
          if (!spins_match(from, to)) continue;
          const double v = std::abs(antisymmetrized_integral(mi, from[0], from[1], to[0], to[1]));
          doubles.push_back({from, to, v});
        }

  std::set<IndexKey> included;
  std::vector<Candidate> included_singles, included_doubles;
  auto include = [&](const Candidate& c, Provenance prov, int round) {
    if (!included.insert({c.from, c.to}).second) return false;
    ExcitationGenerator g = make_generator(c.from, c.to, prov);
    if (!push_generator(pool, g)) return false;
    pool.entries.back().screening_value = c.value;
    pool.entries.back().round = round;
    return true;
  };

  for (const auto& c : singles) {
    if (c.value >= eps && include(c, Provenance::uscc_connected, 1)) included_singles.push_back(c);
  }
  for (const auto& c : doubles) {
    if (c.value >= eps && include(c, Provenance::uscc_connected, 1)) included_doubles.push_back(c);
  }

  // Disconnected products of an included excitation with a t2 amplitude.
  std::map<IndexKey, double> products;
  auto consider = [&](const Candidate& base, const std::vector<std::size_t>& from2,
                      const std::vector<std::size_t>& to2, double amp) {
    if (amp == 0.0 || !disjoint(base.from, from2) || !disjoint(base.to, to2)) return;
    IndexKey key{merged(base.from, from2), merged(base.to, to2)};
    double& v = products[key];
    v = std::max(v, std::abs(base.value * amp));
  };
  for (std::size_t i = 0; i < no; ++i)
    for (std::size_t j = i + 1; j < no; ++j)
      for (std::size_t a = 0; a < nv; ++a)
        for (std::size_t b = a + 1; b < nv; ++b) {
          const double amp = t.double_amplitude(i, j, a, b);
          if (amp == 0.0) continue;
          std::vector<std::size_t> from{t.occupied[i], t.occupied[j]};
          std::vector<std::size_t> to{t.virtuals[a], t.virtuals[b]};
          for (const auto& s : included_singles) consider(s, from, to, amp);
          for (const auto& d : included_doubles) consider(d, from, to, amp);
        }
  for (std::size_t i = 0; i < no; ++i)
    for (std::size_t a = 0; a < nv; ++a) {
      const double amp = t.t1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
      if (amp == 0.0) continue;
      for (const auto& d : included_doubles) consider(d, {t.occupied[i]}, {t.virtuals[a]}, amp);
    }

  for (int round = 2; round <= max_round; ++round) {
    const double threshold = eps / std::pow(2.0, round - 1);
    bool added = false;
    for (const auto& [key, value] : products) {
      if (value < threshold || included.count(key)) continue;
      added |= include({key.first, key.second, value}, Provenance::uscc_disconnected, round);
    }
    if (!added) break;
  }
  return pool;
}

std::string pool_to_jsonl(const OperatorPool& pool) {
  std::ostringstream os;
  for (std::size_t k = 0; k < pool.entries.size(); ++k) {
    const auto& e = pool.entries[k];
    nlohmann::json j{{"id", k},
                     {"kind", std::string(to_string(e.generator.kind))},
                     {"label", e.label},
                     {"provenance", std::string(to_string(e.generator.provenance))},
                     {"n_terms", e.op.size()}};
    if (e.screening_value) j["screening_value"] = *e.screening_value;
    if (e.round) j["round"] = e.round;
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace vqebench
