// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "dense_oracle.hpp"
#include "vqebench/errors.hpp"
#include "vqebench/pauli.hpp"

using namespace vqebench;
using oracle::C;

TEST_CASE("single-qubit products follow the Pauli algebra") {
  const auto X = PauliString::from_word("X");
  const auto Y = PauliString::from_word("Y");
  const auto Z = PauliString::from_word("Z");
  auto check = [](const PauliString& a, const PauliString& b, const char* word, C phase) {
    const auto p = pauli_mul(a, b);
    CHECK(p.string.word() == word);
    CHECK(std::abs(p.phase() - phase) < 1e-15);
  };
  check(X, Y, "Z", C(0, 1));
  check(Y, X, "Z", C(0, -1));
  check(Y, Z, "X", C(0, 1));
  check(Z, X, "Y", C(0, 1));
  check(X, X, "I", 1.0);
  check(Y, Y, "I", 1.0);
}

TEST_CASE("string products match dense Kronecker products") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto a = PauliString::from_word(oracle::random_word(n, rng));
    const auto b = PauliString::from_word(oracle::random_word(n, rng));
    const auto p = pauli_mul(a, b);
    const oracle::Mat expect = oracle::matrix(a) * oracle::matrix(b);
    CHECK(oracle::max_abs(p.phase() * oracle::matrix(p.string) - expect) < 1e-14);
    const oracle::Mat comm = oracle::matrix(a) * oracle::matrix(b) - oracle::matrix(b) * oracle::matrix(a);
    CHECK(a.commutes_with(b) == (oracle::max_abs(comm) < 1e-14));
  }
}

TEST_CASE("operator algebra matches dense matrices") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto a = oracle::random_operator(n, 1 + trial % 6, rng);
    const auto b = oracle::random_operator(n, 1 + trial % 5, rng);
    const auto A = oracle::matrix(a, n);
    const auto B = oracle::matrix(b, n);
    CHECK(oracle::max_abs(oracle::matrix(a * b, n) - A * B) < 1e-12);
    CHECK(oracle::max_abs(oracle::matrix(a + b, n) - (A + B)) < 1e-12);
    CHECK(oracle::max_abs(oracle::matrix(a - b, n) - (A - B)) < 1e-12);
    CHECK(oracle::max_abs(oracle::matrix(a.adjoint(), n) - A.adjoint()) < 1e-12);
    CHECK(oracle::max_abs(oracle::matrix(commutator(a, b, 0.0), n) - (A * B - B * A)) < 1e-12);
    CHECK(oracle::max_abs(oracle::matrix(a * C(0.5, -2.0), n) - A * C(0.5, -2.0)) < 1e-12);
    const auto herm = a + a.adjoint();
    CHECK(herm.is_hermitian());
    CHECK((a - a.adjoint()).is_anti_hermitian());
    CHECK(a.one_norm() >= A.operatorNorm() - 1e-12);
  }
}

TEST_CASE("terms_commute agrees with pairwise dense checks") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto a = oracle::random_operator(n, 3, rng);
    bool all = true;
    for (const auto& [p, c] : a.terms())
      for (const auto& [q, d] : a.terms()) all &= p.commutes_with(q);
    CHECK(a.terms_commute() == all);
  }
}

TEST_CASE("word parsing and formatting") {
  const auto p = PauliString::from_word("XIZY");
  CHECK(p.n_qubits() == 4);
  CHECK(p.factor(0) == 'X');
  CHECK(p.factor(2) == 'Z');
  CHECK(p.factor(3) == 'Y');
  CHECK(p.weight() == 3);
  CHECK(p.y_count() == 1);
  CHECK(p.word() == "XIZY");
  CHECK(PauliString::single(3, 1, 'Y').word() == "IYI");
  CHECK_THROWS_AS(PauliString::from_word("XQ"), ParseError);
  CHECK_THROWS_AS(PauliString(65), DimensionError);
  CHECK_NOTHROW(PauliString(64, ~0ULL, 0));
}

TEST_CASE("mixing register sizes is rejected") {
  QubitOperator a(PauliString::from_word("XX"), 1.0);
  QubitOperator b(PauliString::from_word("XXX"), 1.0);
  CHECK_THROWS_AS(a += b, DimensionError);
  CHECK_THROWS_AS(pauli_mul(PauliString::from_word("X"), PauliString::from_word("XX")), DimensionError);
}

TEST_CASE("simplify prunes small coefficients and cancellations") {
  QubitOperator a(PauliString::from_word("XY"), 1.0);
  a.add_term(PauliString::from_word("XY"), -1.0);
  a.add_term(PauliString::from_word("ZZ"), 1e-13);
  a.add_term(PauliString::from_word("IZ"), 0.5);
  const auto s = simplify(a);
  CHECK(s.size() == 1);
  CHECK(s.coefficient(PauliString::from_word("IZ")) == C(0.5));
  // X Y = i Z on the same qubit; the product keeps only one string
  const QubitOperator x(PauliString::from_word("X"), 1.0), y(PauliString::from_word("Y"), 1.0);
  CHECK((x * y).coefficient(PauliString::from_word("Z")) == C(0, 1));
}

TEST_CASE("text round trip is exact and ordered") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_operator(4, 6, rng);
    const auto b = QubitOperator::from_text(a.to_text());
    CHECK(b.terms() == a.terms());
    CHECK(b.to_text() == a.to_text());
  }
  CHECK_THROWS_AS(QubitOperator::from_text("1.0 0.0 XX\n2.0 XX\n"), ParseError);
  try {
    QubitOperator::from_text("1.0 0.0 XX\n1.0 0.0 XXX\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("term order is lexicographic on (z, x)") {
  QubitOperator a;
  a.add_term(PauliString::from_word("ZI"), 1.0);
  a.add_term(PauliString::from_word("XI"), 1.0);
  a.add_term(PauliString::from_word("II"), 1.0);
  a.add_term(PauliString::from_word("IX"), 1.0);
  std::vector<std::string> words;
  for (const auto& [p, c] : a.terms()) words.push_back(p.word());
  CHECK(words == std::vector<std::string>{"II", "XI", "IX", "ZI"});
}
