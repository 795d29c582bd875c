#include "nvforge/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace nvforge {

namespace {

void check_qubit(int q, int n_qubits) {
  if (q < 0 || q >= n_qubits) throw std::out_of_range("qubit index out of range");
}

void check_pair(int a, int b, int n_qubits) {
  check_qubit(a, n_qubits);
  check_qubit(b, n_qubits);
  if (a == b) throw std::invalid_argument("two-qubit primitive needs distinct qubits");
}

ComplexMatrix axis_pauli(Axis a) {
  switch (a) {
    case Axis::kX: return pauli_x();
    case Axis::kY: return pauli_y();
    case Axis::kZ: return pauli_z();
  }
  throw std::invalid_argument("unknown axis");
}

int bit_of(int index, int qubit, int n_qubits) { return (index >> (n_qubits - 1 - qubit)) & 1; }

int flip_bit(int index, int qubit, int n_qubits) { return index ^ (1 << (n_qubits - 1 - qubit)); }

ComplexMatrix permutation_matrix(int n_qubits, auto&& map) {
  const int dim = 1 << n_qubits;
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) u(map(i), i) = 1.0;
  return u;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

char to_char(Axis a) {
  switch (a) {
    case Axis::kX: return 'x';
    case Axis::kY: return 'y';
    case Axis::kZ: return 'z';
  }
  throw std::invalid_argument("unknown axis");
}

GateSequence& GateSequence::add(const GatePrimitive& p) {
  primitives.push_back(p);
  return *this;
}

GateSequence& GateSequence::add_block(const GateSequence& inner, const std::string& label) {
  if (inner.n_qubits != n_qubits) throw std::invalid_argument("add_block: register size mismatch");
  const std::size_t begin = primitives.size();
  primitives.insert(primitives.end(), inner.primitives.begin(), inner.primitives.end());
  blocks.push_back({label, begin, primitives.size()});
  return *this;
}

ComplexMatrix primitive_unitary(const GatePrimitive& p, int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("register needs at least one qubit");
  return std::visit(
      Overloaded{
          [&](const Rotation& r) -> ComplexMatrix {
            check_qubit(r.qubit, n_qubits);
            return embed(matexp(ComplexMatrix(0.5 * axis_pauli(r.axis)), r.angle), r.qubit,
                         n_qubits);
          },
          [&](const ZZEvolution& z) -> ComplexMatrix {
            check_pair(z.qubit_a, z.qubit_b, n_qubits);
            const ComplexMatrix zz =
                embed_pair(pauli_z(), z.qubit_a, pauli_z(), z.qubit_b, n_qubits);
            return matexp(ComplexMatrix(0.5 * zz), z.angle);
          },
          [&](const FlipFlopEvolution& f) -> ComplexMatrix {
            check_pair(f.qubit_a, f.qubit_b, n_qubits);
            const ComplexMatrix xy =
                embed_pair(pauli_x(), f.qubit_a, pauli_x(), f.qubit_b, n_qubits) +
                embed_pair(pauli_y(), f.qubit_a, pauli_y(), f.qubit_b, n_qubits);
            return matexp(ComplexMatrix(kPi / 8.0 * xy), f.nu_t);
          },
          [&](const GlobalPhase& g) -> ComplexMatrix {
            const int dim = 1 << n_qubits;
            return std::polar(1.0, g.angle) * ComplexMatrix::Identity(dim, dim);
          },
      },
      p);
}

ComplexMatrix compile(const GateSequence& seq) {
  const int dim = 1 << seq.n_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const GatePrimitive& p : seq.primitives) u = primitive_unitary(p, seq.n_qubits) * u;
  return u;
}

double dipolar_strength(double r_nm, bool parallel) {
  if (!(r_nm > 0)) throw std::invalid_argument("separation must be positive");
  constexpr double kAnchorNm = 8.0;
  constexpr double kParallelKhz = 101.0;
  constexpr double kNonParallelKhz = 42.7;
  const double scale = std::pow(kAnchorNm / r_nm, 3);
  return (parallel ? kParallelKhz : kNonParallelKhz) * scale;
}

ComplexMatrix flipflop_evolution(double nu_dip_khz, double duration_us, double omega1_khz,
                                 double omega2_khz) {
  if (!(duration_us >= 0)) throw std::invalid_argument("duration must be non-negative");
  const ComplexMatrix xx = kron(pauli_x(), pauli_x());
  const ComplexMatrix yy = kron(pauli_y(), pauli_y());
  const ComplexMatrix z1 = kron(pauli_z(), pauli_i());
  const ComplexMatrix z2 = kron(pauli_i(), pauli_z());
  const ComplexMatrix h_cycles =
      1e-3 * (nu_dip_khz / 16.0 * (xx + yy) + 0.5 * omega1_khz * z1 + 0.5 * omega2_khz * z2);
  return matexp(ComplexMatrix(kTwoPi * h_cycles), duration_us);
}

GateSequence hadamard_sequence(int qubit, int n_qubits) {
  check_qubit(qubit, n_qubits);
  GateSequence s{n_qubits, {}, {}};
  s.add(Rotation{Axis::kZ, kPi / 2, qubit})
      .add(Rotation{Axis::kX, kPi / 2, qubit})
      .add(Rotation{Axis::kZ, kPi / 2, qubit});
  return s;
}

GateSequence cz_sequence(int qubit_a, int qubit_b, int n_qubits) {
  check_pair(qubit_a, qubit_b, n_qubits);
  GateSequence s{n_qubits, {}, {}};
  s.add(Rotation{Axis::kZ, kPi / 2, qubit_a})
      .add(Rotation{Axis::kZ, kPi / 2, qubit_b})
      .add(ZZEvolution{-kPi / 2, qubit_a, qubit_b})
      .add(GlobalPhase{kPi / 4});
  return s;
}

GateSequence cnot_from_cz(int control, int target, int n_qubits) {
  check_pair(control, target, n_qubits);
  GateSequence s{n_qubits, {}, {}};
  s.add_block(hadamard_sequence(target, n_qubits), "hadamard");
  for (const GatePrimitive& p : cz_sequence(control, target, n_qubits).primitives) s.add(p);
  s.add_block(hadamard_sequence(target, n_qubits), "hadamard");
  return s;
}

GateSequence cnot_from_sqrtswap(int control, int target, int n_qubits) {
  check_pair(control, target, n_qubits);
  GateSequence s{n_qubits, {}, {}};
  s.add(Rotation{Axis::kY, kPi / 2, control})
      .add(Rotation{Axis::kY, kPi, target})
      .add(FlipFlopEvolution{1.0, control, target})
      .add(Rotation{Axis::kX, kPi, target})
      .add(FlipFlopEvolution{1.0, control, target})
      .add(Rotation{Axis::kX, kPi / 2, control})
      .add(Rotation{Axis::kY, -kPi / 2, control})
      .add(Rotation{Axis::kX, kPi / 2, target})
      .add(Rotation{Axis::kY, kPi, target});
  return s;
}

GateSequence swap_sequence(int qubit_a, int qubit_b, int n_qubits) {
  check_pair(qubit_a, qubit_b, n_qubits);
  GateSequence s{n_qubits, {}, {}};
  s.add(FlipFlopEvolution{2.0, qubit_a, qubit_b});
  return s;
}

GateSequence sqrt_swap_sequence(int qubit_a, int qubit_b, int n_qubits) {
  check_pair(qubit_a, qubit_b, n_qubits);
  GateSequence s{n_qubits, {}, {}};
  s.add(FlipFlopEvolution{1.0, qubit_a, qubit_b});
  return s;
}

GateSequence toffoli_sequence(CnotConstruction construction) {
  constexpr int n = 3;
  auto cnot = [&](int c, int t) {
    return construction == CnotConstruction::kViaCz ? cnot_from_cz(c, t, n)
                                                    : cnot_from_sqrtswap(c, t, n);
  };
  auto rz = [](double angle, int q) { return Rotation{Axis::kZ, angle, q}; };

  GateSequence s{n, {}, {}};
  s.add_block(hadamard_sequence(2, n), "hadamard");
  s.add_block(cnot(1, 2), "cnot");
  s.add(rz(-kPi / 4, 2));
  s.add_block(cnot(0, 2), "cnot");
  s.add(rz(kPi / 4, 2));
  s.add_block(cnot(1, 2), "cnot");
  s.add(rz(-kPi / 4, 2));
  s.add_block(cnot(0, 2), "cnot");
  s.add(rz(-kPi / 4, 1));
  s.add(rz(kPi / 4, 2));
  s.add_block(hadamard_sequence(2, n), "hadamard");
  s.add_block(cnot(0, 1), "cnot");
  s.add(rz(-kPi / 4, 1));
  s.add_block(cnot(0, 1), "cnot");
  s.add(rz(kPi / 2, 1));
  s.add(rz(kPi / 4, 0));
  return s;
}

GateCensus census(const GateSequence& seq) {
  GateCensus c;
  std::vector<bool> in_block(seq.primitives.size(), false);
  for (const GateBlock& b : seq.blocks) {
    for (std::size_t k = b.begin; k < b.end && k < in_block.size(); ++k) in_block[k] = true;
    if (b.label == "cnot") {
      ++c.cnot;
    } else if (b.label == "hadamard") {
      ++c.single;
    }
  }
  for (std::size_t k = 0; k < seq.primitives.size(); ++k) {
    if (in_block[k]) continue;
    std::visit(Overloaded{
                   [&](const Rotation&) { ++c.single; },
                   [&](const ZZEvolution&) { ++c.zz; },
                   [&](const FlipFlopEvolution&) { ++c.flipflop; },
                   [&](const GlobalPhase&) {},
               },
               seq.primitives[k]);
  }
  return c;
}

double total_gate_time(const GateSequence& seq, double nu_dip_khz, double rabi_mhz) {
  if (!(nu_dip_khz > 0) || !(rabi_mhz > 0)) throw std::invalid_argument("rates must be positive");
  const double nu_mhz = nu_dip_khz * 1e-3;
  double total = 0.0;
  for (const GatePrimitive& p : seq.primitives) {
    total += std::visit(
        Overloaded{
            [&](const Rotation& r) { return std::abs(r.angle) / (kTwoPi * rabi_mhz); },
            [&](const ZZEvolution& z) {
              // e^{-i phi ZZ} is pi-periodic in phi up to a global sign.
              double phi = std::fmod(z.angle / 2.0, kPi);
              if (phi < 0) phi += kPi;
              return phi / (kTwoPi * nu_mhz / 4.0);
            },
            [&](const FlipFlopEvolution& f) { return f.nu_t / nu_mhz; },
            [&](const GlobalPhase&) { return 0.0; },
        },
        p);
  }
  return total;
}

ComplexMatrix ideal_hadamard() {
  return (pauli_x() + pauli_z()) / std::sqrt(2.0);
}

ComplexMatrix ideal_cnot(int control, int target, int n_qubits) {
  check_pair(control, target, n_qubits);
  return permutation_matrix(n_qubits, [&](int i) {
    return bit_of(i, control, n_qubits) ? flip_bit(i, target, n_qubits) : i;
  });
}

ComplexMatrix ideal_cz(int qubit_a, int qubit_b, int n_qubits) {
  check_pair(qubit_a, qubit_b, n_qubits);
  const int dim = 1 << n_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (bit_of(i, qubit_a, n_qubits) && bit_of(i, qubit_b, n_qubits)) u(i, i) = -1.0;
  }
  return u;
}

ComplexMatrix ideal_toffoli(int control_a, int control_b, int target, int n_qubits) {
  check_pair(control_a, control_b, n_qubits);
  check_pair(control_a, target, n_qubits);
  check_pair(control_b, target, n_qubits);
  return permutation_matrix(n_qubits, [&](int i) {
    return bit_of(i, control_a, n_qubits) && bit_of(i, control_b, n_qubits)
               ? flip_bit(i, target, n_qubits)
               : i;
  });
}

ComplexMatrix ideal_swap(int qubit_a, int qubit_b, int n_qubits) {
  check_pair(qubit_a, qubit_b, n_qubits);
  return permutation_matrix(n_qubits, [&](int i) {
    const int ba = bit_of(i, qubit_a, n_qubits);
    const int bb = bit_of(i, qubit_b, n_qubits);
    if (ba == bb) return i;
    return flip_bit(flip_bit(i, qubit_a, n_qubits), qubit_b, n_qubits);
  });
}

}  // namespace nvforge
