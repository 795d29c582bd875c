#include "nvforge/gates.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace nvforge;

namespace {

int bit(int index, int q, int n) { return (index >> (n - 1 - q)) & 1; }

// Closed-form primitive matrices assembled entry by entry.
ComplexMatrix oracle_primitive(const GatePrimitive& p, int n) {
  const int dim = 1 << n;
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  const Complex i(0.0, 1.0);
  if (const auto* r = std::get_if<Rotation>(&p)) {
    const double c = std::cos(r->angle / 2), s = std::sin(r->angle / 2);
    for (int col = 0; col < dim; ++col) {
      const int b = bit(col, r->qubit, n);
      const int flipped = col ^ (1 << (n - 1 - r->qubit));
      switch (r->axis) {
        case Axis::kX:
          u(col, col) = c;
          u(flipped, col) = -i * s;
          break;
        case Axis::kY:
          u(col, col) = c;
          u(flipped, col) = b ? -s : s;
          break;
        case Axis::kZ:
          u(col, col) = std::polar(1.0, b ? r->angle / 2 : -r->angle / 2);
          break;
      }
    }
  } else if (const auto* z = std::get_if<ZZEvolution>(&p)) {
    for (int k = 0; k < dim; ++k) {
      const bool same = bit(k, z->qubit_a, n) == bit(k, z->qubit_b, n);
      u(k, k) = std::polar(1.0, same ? -z->angle / 2 : z->angle / 2);
    }
  } else if (const auto* f = std::get_if<FlipFlopEvolution>(&p)) {
    const double a = kPi * f->nu_t / 4;
    for (int k = 0; k < dim; ++k) {
      if (bit(k, f->qubit_a, n) == bit(k, f->qubit_b, n)) {
        u(k, k) = 1.0;
      } else {
        const int partner = k ^ (1 << (n - 1 - f->qubit_a)) ^ (1 << (n - 1 - f->qubit_b));
        u(k, k) = std::cos(a);
        u(partner, k) = -i * std::sin(a);
      }
    }
  } else {
    u = std::polar(1.0, std::get<GlobalPhase>(p).angle) * ComplexMatrix::Identity(dim, dim);
  }
  return u;
}

ComplexMatrix oracle_compile(const GateSequence& seq) {
  const int dim = 1 << seq.n_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const GatePrimitive& p : seq.primitives) u = oracle_primitive(p, seq.n_qubits) * u;
  return u;
}

// Truth-table CNOT and Toffoli.
ComplexMatrix table_cnot(int c, int t, int n) {
  const int dim = 1 << n;
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) u(bit(k, c, n) ? k ^ (1 << (n - 1 - t)) : k, k) = 1.0;
  return u;
}

ComplexMatrix table_toffoli() {
  ComplexMatrix u = ComplexMatrix::Identity(8, 8);
  u(6, 6) = u(7, 7) = 0.0;
  u(6, 7) = u(7, 6) = 1.0;
  return u;
}

}  // namespace

TEST_CASE("compiled primitives match the closed forms") {
  const std::vector<GatePrimitive> prims = {
      Rotation{Axis::kX, 0.7, 0},       Rotation{Axis::kY, -1.3, 1},
      Rotation{Axis::kZ, 2.1, 2},       ZZEvolution{0.9, 0, 2},
      FlipFlopEvolution{0.6, 1, 2},     FlipFlopEvolution{1.0, 2, 0},
      GlobalPhase{0.4}};
  for (const GatePrimitive& p : prims) {
    CHECK(max_abs(ComplexMatrix(primitive_unitary(p, 3) - oracle_primitive(p, 3))) < 1e-14);
  }
}

TEST_CASE("CZ is exactly diag(1, 1, 1, -1)") {
  const ComplexMatrix u = compile(cz_sequence(0, 1));
  ComplexMatrix want = ComplexMatrix::Identity(4, 4);
  want(3, 3) = -1.0;
  CHECK(max_abs(ComplexMatrix(u - want)) < 1e-12);
  CHECK(max_abs(ComplexMatrix(oracle_compile(cz_sequence(0, 1)) - want)) < 1e-12);
}

TEST_CASE("Hadamard sequence") {
  CHECK(equal_up_to_global_phase(compile(hadamard_sequence(0)), ideal_hadamard(), 1e-12));
}

TEST_CASE("CNOT via CZ, both directions and on larger registers") {
  for (auto [c, t, n] : {std::tuple{0, 1, 2}, {1, 0, 2}, {0, 2, 3}, {2, 1, 3}}) {
    const GateSequence seq = cnot_from_cz(c, t, n);
    CHECK(equal_up_to_global_phase(compile(seq), table_cnot(c, t, n), 1e-9));
    CHECK(equal_up_to_global_phase(oracle_compile(seq), table_cnot(c, t, n), 1e-9));
  }
}

TEST_CASE("CNOT via square-root-of-SWAP") {
  for (auto [c, t, n] : {std::tuple{0, 1, 2}, {1, 0, 2}, {0, 2, 3}, {1, 2, 3}}) {
    const GateSequence seq = cnot_from_sqrtswap(c, t, n);
    CHECK(equal_up_to_global_phase(compile(seq), table_cnot(c, t, n), 1e-9));
    CHECK(equal_up_to_global_phase(oracle_compile(seq), table_cnot(c, t, n), 1e-9));
    const GateCensus k = census(seq);
    CHECK(k.flipflop == 2);
    CHECK(k.zz == 0);
  }
}

TEST_CASE("Toffoli for both CNOT constructions") {
  for (CnotConstruction how : {CnotConstruction::kViaCz, CnotConstruction::kViaSqrtSwap}) {
    const GateSequence seq = toffoli_sequence(how);
    CHECK(equal_up_to_global_phase(compile(seq), table_toffoli(), 1e-9));
    CHECK(equal_up_to_global_phase(oracle_compile(seq), table_toffoli(), 1e-9));
    const GateCensus k = census(seq);
    CHECK(k.cnot == 6);
    CHECK(k.single == 10);
  }
}

TEST_CASE("ideal unitaries agree with the truth tables") {
  CHECK(ideal_cnot(0, 1) == table_cnot(0, 1, 2));
  CHECK(ideal_cnot(2, 0, 3) == table_cnot(2, 0, 3));
  CHECK(ideal_toffoli() == table_toffoli());
  const ComplexMatrix swap = ideal_swap(0, 1);
  CHECK(swap(2, 1) == Complex(1.0));
  CHECK(swap(1, 2) == Complex(1.0));
  CHECK(swap(3, 3) == Complex(1.0));
}

TEST_CASE("full flip-flop exchanges |01> and |10> up to a relative phase") {
  const ComplexMatrix u = compile(swap_sequence(0, 1));
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(u(j, k)) == doctest::Approx(std::abs(ideal_swap(0, 1)(j, k))));
    }
  }
  const ComplexMatrix half = compile(sqrt_swap_sequence(0, 1));
  CHECK(max_abs(ComplexMatrix(half * half - u)) < 1e-12);
}

TEST_CASE("flip-flop Hamiltonian completes an exchange after 2 / nu_dip") {
  const double nu_khz = 100.0;
  const ComplexMatrix u = flipflop_evolution(nu_khz, 2.0 / (nu_khz * 1e-3));
  CHECK(std::norm(u(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs(ComplexMatrix(u - primitive_unitary(FlipFlopEvolution{2.0, 0, 1}, 2))) < 1e-12);
  // Large detuning suppresses the exchange.
  const ComplexMatrix detuned = flipflop_evolution(nu_khz, 20.0, 5000.0, -5000.0);
  CHECK(std::norm(detuned(2, 1)) < 1e-3);
}

TEST_CASE("dipolar strength scales as 1/r^3") {
  CHECK(dipolar_strength(8.0, true) == doctest::Approx(101.0));
  CHECK(dipolar_strength(8.0, false) == doctest::Approx(42.7));
  CHECK(dipolar_strength(4.0, true) == doctest::Approx(808.0));
  CHECK_THROWS_AS(dipolar_strength(0.0, true), std::invalid_argument);
}

TEST_CASE("gate durations") {
  CHECK(total_gate_time(swap_sequence(0, 1), 100.0, 10.0) == doctest::Approx(20.0));
  CHECK(total_gate_time(sqrt_swap_sequence(0, 1), 100.0, 10.0) == doctest::Approx(10.0));
  // ZZ(-pi/2) needs phase 3 pi / 4 under (nu/4) Z Z: 15 us at 100 kHz.
  GateSequence zz{2, {}, {}};
  zz.add(ZZEvolution{-kPi / 2, 0, 1});
  CHECK(total_gate_time(zz, 100.0, 10.0) == doctest::Approx(15.0));
  GateSequence x{1, {}, {}};
  x.add(Rotation{Axis::kX, kPi, 0});
  CHECK(total_gate_time(x, 100.0, 10.0) == doctest::Approx(0.05));
  CHECK(total_gate_time(x, 100.0, std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("qubit indices are validated") {
  CHECK_THROWS_AS(primitive_unitary(Rotation{Axis::kX, 1.0, 2}, 2), std::out_of_range);
  CHECK_THROWS_AS(primitive_unitary(ZZEvolution{1.0, 0, 0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(cnot_from_cz(0, 3, 3), std::out_of_range);
  GateSequence one{1, {}, {}};
  CHECK_THROWS_AS(one.add_block(cz_sequence(0, 1), "cz"), std::invalid_argument);
}

TEST_CASE("blocks record their primitive ranges") {
  const GateSequence seq = cnot_from_cz(0, 1);
  REQUIRE(seq.blocks.size() == 2);
  CHECK(seq.blocks[0].label == "hadamard");
  CHECK(seq.blocks[0].begin == 0);
  CHECK(seq.blocks[0].end == 3);
  CHECK(seq.blocks[1].end == seq.primitives.size());
}
