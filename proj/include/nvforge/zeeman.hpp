#pragma once

// Ground-state NV spin in a static field along the cantilever axis [-1-1-1]:
// ODMR transition curves, the P1 (substitutional nitrogen) line, and field
// windows free of cross relaxation.
//
// Frequencies here are ordinary frequencies in MHz (not angular); fields in gauss.

#include "nvforge/core.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace nvforge {

enum class Orientation { kM1M1M1, kM111, k1M11, k11M1 };

inline constexpr std::array<Orientation, 4> kAllOrientations = {
    Orientation::kM1M1M1, Orientation::kM111, Orientation::k1M11, Orientation::k11M1};

/// Miller-index label, e.g. "[-1-1-1]".
std::string to_string(Orientation o);
Orientation orientation_from_string(const std::string& label);

/// Unit vector of the NV axis in crystal coordinates.
Eigen::Vector3d nv_axis(Orientation o);

/// Angle in degrees between the NV axis and a field along [-1-1-1]:
/// 0 for the aligned class, arccos(-1/3) = 109.47 for the three tilted ones.
double field_angle_deg(Orientation o);

struct NVConfiguration {
  Orientation orientation = Orientation::kM1M1M1;
  double phi_deg = 0.0;
  double position_um = 0.0;

  double theta_deg() const { return field_angle_deg(orientation); }
};

struct ZeemanParameters {
  double zero_field_splitting_mhz = 2880.0;
  double gyromagnetic_mhz_per_gauss = 2.8;

  void validate() const;
};

/// 3x3 Hamiltonian in MHz in the {|+1>, |0>, |-1>} basis of S_z'.
ComplexMatrix nv_hamiltonian(double b_gauss, double theta_deg, double phi_deg,
                             const ZeemanParameters& p = {});
ComplexMatrix nv_hamiltonian(double b_gauss, const NVConfiguration& cfg,
                             const ZeemanParameters& p = {});

enum class TransitionLabel { kZeroToPlus, kZeroToMinus, kPlusToMinus };

inline constexpr std::array<TransitionLabel, 3> kAllTransitions = {
    TransitionLabel::kZeroToPlus, TransitionLabel::kZeroToMinus, TransitionLabel::kPlusToMinus};

std::string to_string(TransitionLabel label);

/// Transition frequencies labelled by zero-field ancestry of the levels.
struct TransitionSet {
  double zero_to_plus = 0.0;
  double zero_to_minus = 0.0;
  double plus_to_minus = 0.0;

  double operator[](TransitionLabel label) const;
};

/// Follows the three levels continuously in b, matching eigenvectors by
/// maximum overlap with the previous step. Labels start from the zero-field
/// basis at b = 0, so level crossings at theta = 0 keep their identity.
class LevelTracker {
 public:
  LevelTracker(double theta_deg, double phi_deg, ZeemanParameters p = {});

  /// Moves to field b (any direction) and returns the labelled transitions.
  /// Large jumps are subdivided so no step exceeds max_step_gauss.
  TransitionSet advance(double b_gauss);

  double field() const { return b_; }
  /// Level energies (MHz) ordered +1, 0, -1 by ancestry.
  const Eigen::Vector3d& energies() const { return energies_; }

  static constexpr double kMaxStepGauss = 1.0;

 private:
  void step_to(double b_gauss);

  double theta_deg_;
  double phi_deg_;
  ZeemanParameters params_;
  double b_ = 0.0;
  ComplexMatrix states_;  // columns ordered +1, 0, -1
  Eigen::Vector3d energies_;
};

TransitionSet transition_frequencies(double b_gauss, const NVConfiguration& cfg,
                                     const ZeemanParameters& p = {});
TransitionSet transition_frequencies(double b_gauss, double theta_deg, double phi_deg,
                                     const ZeemanParameters& p = {});

/// Electron spin-1/2 Zeeman line of a P1 centre.
double p1_transition(double b_gauss, const ZeemanParameters& p = {});

struct FieldWindow {
  double b_min = 0.0;
  double b_max = 0.0;
  double span_mhz = 0.0;
};

struct WindowOptions {
  /// Which defect class carries the qubit transition whose monotonicity and
  /// span are checked.
  bool operating_aligned = true;
  TransitionLabel operating_transition = TransitionLabel::kZeroToMinus;
  /// Bisection resolution for window edges.
  double resolution_gauss = 0.01;
};

/// Maximal field intervals in [b_min, b_max] where no transition of one defect
/// class (aligned NVs, tilted NVs, P1) comes within guard_mhz of a transition of
/// another class, and the operating transition is monotonic. Grid scan at
/// step_gauss, edges refined by bisection.
std::vector<FieldWindow> cross_relaxation_windows(double b_min, double b_max, double step_gauss,
                                                  double guard_mhz, const ZeemanParameters& p = {},
                                                  const WindowOptions& opts = {});

/// floor(span / linewidth).
long addressable_count(double frequency_span_mhz, double linewidth_mhz);

struct TransitionSample {
  double b_gauss;
  std::string orientation;  // Miller label or "P1"
  std::string transition_label;
  double frequency_mhz;
};

/// All transition curves of the four orientations plus the P1 line on a
/// uniform grid from b_min to b_max inclusive.
std::vector<TransitionSample> scan_transitions(double b_min, double b_max, double step_gauss,
                                               double phi_deg = 0.0,
                                               const ZeemanParameters& p = {});

/// Grid b_min, b_min + step, ..., with the last point clamped to b_max.
std::vector<double> field_grid(double b_min, double b_max, double step_gauss);

}  // namespace nvforge
