#pragma once

// Piecewise-constant optimal control of dipolar-coupled NV qubits in the
// rotating frame. Amplitudes are Rabi frequencies in MHz, times in us; the
// Hamiltonians stored in ControlProblem are angular (rad/us).

#include "nvforge/core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace nvforge {

struct Coupling {
  int qubit_a = 0;
  int qubit_b = 1;
  double nu_khz = 100.0;
};

/// kQuarter: nu/4 Z Z (spin-1/2 S_z products); kFull: nu Z Z.
enum class ZZConvention { kQuarter, kFull };

/// Sum over couplings of 2 pi (nu/4) Z_a Z_b (or 2 pi nu Z_a Z_b), rad/us.
ComplexMatrix zz_drift(int n_qubits, const std::vector<Coupling>& couplings,
                       ZZConvention convention = ZZConvention::kQuarter);

struct ControlProblem {
  int n_qubits = 2;
  ComplexMatrix drift;
  std::vector<ComplexMatrix> controls;
  std::vector<std::string> control_names;
  int n_slices = 40;
  double slice_us = 1.0;
  ComplexMatrix target;
  double amplitude_bound_mhz = 10.0;

  int dim() const { return 1 << n_qubits; }
  int n_controls() const { return static_cast<int>(controls.size()); }
  double duration_us() const { return n_slices * slice_us; }
  void validate() const;
};

/// x and y drives on every qubit (pi sigma per MHz of Rabi frequency), named
/// u1x, u1y, u2x, ...
ControlProblem make_problem(int n_qubits, const std::vector<Coupling>& couplings, int n_slices,
                            double slice_us, const ComplexMatrix& target,
                            double amplitude_bound_mhz = 10.0,
                            ZZConvention convention = ZZConvention::kQuarter);

struct PulseSequence {
  Eigen::MatrixXd amplitudes;  // n_slices x n_controls, MHz
  double slice_us = 1.0;
};

PulseSequence zero_pulses(const ControlProblem& prob);
/// Uniform amplitudes in [-scale, scale] from a seeded mt19937_64.
PulseSequence random_pulses(const ControlProblem& prob, std::uint64_t seed,
                            double scale_mhz = 0.1);

ComplexMatrix propagate(const ControlProblem& prob, const PulseSequence& pulses);

/// Average gate fidelity (tr(M M^dag) + |tr M|^2) / (d (d + 1)), M = target^dag u,
/// d the Hilbert-space dimension.
double fidelity(const ComplexMatrix& u, const ComplexMatrix& target);

struct FidelityGradient {
  double fidelity = 0.0;
  Eigen::MatrixXd gradient;  // n_slices x n_controls
};

/// Fidelity and its exact gradient with respect to every amplitude. Each slice
/// derivative is taken in the eigenbasis of the slice Hamiltonian.
FidelityGradient fidelity_and_gradient(const ControlProblem& prob, const PulseSequence& pulses);

Eigen::MatrixXd gradient(const ControlProblem& prob, const PulseSequence& pulses);

enum class StepRule { kBacktracking, kFixed };
enum class Direction { kSteepest, kLbfgs };

struct OptimizeOptions {
  int max_iters = 2000;
  StepRule step_rule = StepRule::kBacktracking;
  Direction direction = Direction::kLbfgs;
  double target_fidelity = 0.99;
  /// Initial trial step (backtracking) or the step itself (fixed), in MHz per
  /// unit gradient.
  double step = 10.0;
  int lbfgs_memory = 10;
  std::uint64_t seed = 0;
};

struct OptimizeResult {
  PulseSequence pulses;
  std::vector<double> fidelity_trace;  // entry 0 is the initial fidelity
  int iterations = 0;
  bool converged = false;
  std::string status;
};

/// Projected ascent on the amplitude box. With backtracking every accepted step
/// satisfies an Armijo condition, so the trace never decreases; the best pulses
/// seen are returned either way.
OptimizeResult optimize(const ControlProblem& prob, const PulseSequence& init,
                        const OptimizeOptions& opts);

}  // namespace nvforge
