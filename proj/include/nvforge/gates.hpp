#pragma once

// Analytic gate constructions for dipolar-coupled NV qubits.
//
// Qubit encoding: |0> = m_s 0, |1> = m_s -1. Qubit 0 is the most significant
// index of the register. Primitives are listed in time order: the first
// primitive acts first, so the compiled unitary is P_n ... P_2 P_1.

#include "nvforge/core.hpp"

#include <string>
#include <variant>
#include <vector>

namespace nvforge {

enum class Axis { kX, kY, kZ };

char to_char(Axis a);

/// e^{-i sigma_axis angle / 2} on one qubit.
struct Rotation {
  Axis axis;
  double angle;
  int qubit;
};

/// e^{-i (angle / 2) Z_a Z_b}.
struct ZZEvolution {
  double angle;
  int qubit_a;
  int qubit_b;
};

/// Resonant flip-flop evolution on a pair for a duration t with nu_dip * t = nu_t.
/// nu_t = 2 fully exchanges |01> and |10>; nu_t = 1 is the square-root step.
struct FlipFlopEvolution {
  double nu_t;
  int qubit_a;
  int qubit_b;
};

struct GlobalPhase {
  double angle;
};

using GatePrimitive = std::variant<Rotation, ZZEvolution, FlipFlopEvolution, GlobalPhase>;

/// A labelled range [begin, end) of primitives forming one logical gate.
struct GateBlock {
  std::string label;
  std::size_t begin;
  std::size_t end;
};

struct GateSequence {
  int n_qubits = 1;
  std::vector<GatePrimitive> primitives;
  std::vector<GateBlock> blocks;

  GateSequence& add(const GatePrimitive& p);
  /// Appends another sequence's primitives as one block labelled `label`.
  /// The inner sequence's own blocks are dropped.
  GateSequence& add_block(const GateSequence& inner, const std::string& label);
};

ComplexMatrix primitive_unitary(const GatePrimitive& p, int n_qubits);

/// Ordered product of primitive unitaries.
ComplexMatrix compile(const GateSequence& seq);

/// Dipolar ZZ coupling strength in kHz, scaling as 1/r^3 and anchored to 101 kHz
/// for parallel and 42.7 kHz for non-parallel pairs at 8 nm.
double dipolar_strength(double r_nm, bool parallel);

/// e^{-i H t} for H = nu/16 (XX + YY) + Omega1/2 Z1 + Omega2/2 Z2 (frequencies
/// in kHz, times in us, H in cycles). In the odd-parity subspace the flip-flop
/// term is a Rabi drive of period 4 / nu_dip.
ComplexMatrix flipflop_evolution(double nu_dip_khz, double duration_us, double omega1_khz = 0.0,
                                 double omega2_khz = 0.0);

GateSequence hadamard_sequence(int qubit, int n_qubits = 1);
GateSequence cz_sequence(int qubit_a, int qubit_b, int n_qubits = 2);
GateSequence cnot_from_cz(int control, int target, int n_qubits = 2);
GateSequence cnot_from_sqrtswap(int control, int target, int n_qubits = 2);
/// Full flip-flop (nu_t = 2): |01> <-> |10> with phase -i, an iSWAP-type gate.
GateSequence swap_sequence(int qubit_a, int qubit_b, int n_qubits = 2);
GateSequence sqrt_swap_sequence(int qubit_a, int qubit_b, int n_qubits = 2);

enum class CnotConstruction { kViaCz, kViaSqrtSwap };

/// Six-CNOT, ten-single-qubit-gate Toffoli on qubits (0, 1) -> 2.
GateSequence toffoli_sequence(CnotConstruction cnot = CnotConstruction::kViaCz);

struct GateCensus {
  int cnot = 0;
  int single = 0;
  int flipflop = 0;
  int zz = 0;
};

/// Counts top-level gates: each block counts once by label ("cnot" -> cnot,
/// "hadamard" -> single); loose primitives count by kind. Global phases are free.
GateCensus census(const GateSequence& seq);

/// Wall-clock duration in us. Rotations take |angle| / (2 pi rabi); flip-flops
/// nu_t / nu_dip; ZZ evolutions run under the ZZ drift (nu_dip / 4) Z Z for the
/// shortest non-negative time giving the requested phase up to a global sign.
double total_gate_time(const GateSequence& seq, double nu_dip_khz, double rabi_mhz);

// Ideal reference unitaries.
ComplexMatrix ideal_hadamard();
ComplexMatrix ideal_cnot(int control, int target, int n_qubits = 2);
ComplexMatrix ideal_cz(int qubit_a, int qubit_b, int n_qubits = 2);
ComplexMatrix ideal_toffoli(int control_a = 0, int control_b = 1, int target = 2,
                            int n_qubits = 3);
ComplexMatrix ideal_swap(int qubit_a, int qubit_b, int n_qubits = 2);

}  // namespace nvforge
