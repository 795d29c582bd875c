#pragma once

// Cantilever strain, NV-frame transforms, and strain-shifted optical
// transitions of the excited-state orbital doublet Ex / Ey.

#include "nvforge/zeeman.hpp"

#include <Eigen/Dense>

#include <optional>

namespace nvforge {

enum class StrainFrame { kCantilever, kNv };

/// Symmetric 3x3 dimensionless strain tensor tagged with its coordinate frame.
/// For the NV frame the orientation is recorded alongside.
struct StrainTensor {
  StrainFrame frame = StrainFrame::kCantilever;
  std::optional<Orientation> orientation;
  Eigen::Matrix3d components = Eigen::Matrix3d::Zero();

  static StrainTensor cantilever(const Eigen::Matrix3d& components);
  /// diag(-nu, -nu, 1) * strain: uniaxial stress along the cantilever axis.
  static StrainTensor uniaxial(double strain, double poisson);
};

/// Orbital strain couplings (PHz), intrinsic splittings (GHz) and ZPL (THz).
struct StrainCouplings {
  double lambda_a1_phz = -1.95;
  double lambda_a1p_phz = 2.16;
  double lambda_e_phz = -0.85;
  double lambda_ep_phz = 0.02;
  double df_e1_ghz = 6.3;
  double df_e2_ghz = 0.15;
  double f_zpl_thz = 470.6;

  void validate() const;
};

struct CantileverGeometry {
  double length_um = 5.0;
  double width_um = 0.5;
  double height_um = 0.25;
  double force_n = 0.0;
  double youngs_modulus_gpa = 1100.0;
  double poisson = 0.11;

  void validate() const;
};

/// Euler-Bernoulli strain at distance z from the clamped end and x from the
/// neutral axis: eps_zz = F (L - z) x / (E I), I = w h^3 / 12, lateral
/// components -nu eps_zz.
StrainTensor cantilever_strain(const CantileverGeometry& geom, double z_um, double x_um);

/// Largest eps_zz on the beam, reached at z = 0, x = h/2.
double peak_strain(const CantileverGeometry& geom);

/// End load that makes peak_strain(geom) equal `target`.
double force_for_peak_strain(const CantileverGeometry& geom, double target);

/// Rotation taking cantilever coordinates to the NV frame (rows are the NV
/// axes x', y', z' in cantilever coordinates). z' is the NV axis; x' is the
/// projection of one carbon bond onto the plane normal to z':
///
///   orientation   x' bond
///   [-1-1-1]      [-111]   (this frame is the cantilever frame)
///   [-111]        [1-11]
///   [1-11]        [11-1]
///   [11-1]        [-111]
///
/// The three tilted rows are images of each other under the threefold
/// rotation about the cantilever axis.
Eigen::Matrix3d nv_frame_rotation(Orientation o);

StrainTensor transform_to_nv_frame(const StrainTensor& e, Orientation o);

struct StrainShifts {
  double g_a1_ghz = 0.0;
  double g_e1_ghz = 0.0;
  double g_e2_ghz = 0.0;
};

StrainShifts coupling_shifts(const StrainTensor& e, const StrainCouplings& c = {});

/// Ex and Ey as detunings from the ZPL, in GHz.
struct OpticalDetunings {
  double ex_ghz = 0.0;
  double ey_ghz = 0.0;
};

OpticalDetunings optical_transitions(const StrainShifts& g, const StrainCouplings& c = {});

/// Absolute frequency of a detuning, in GHz.
double absolute_frequency_ghz(double detuning_ghz, const StrainCouplings& c = {});

/// Detunings for a uniaxial cantilever strain seen by an NV of orientation o.
OpticalDetunings detunings_for_strain(double strain, Orientation o, double poisson = 0.11,
                                      const StrainCouplings& c = {});

/// floor(|Ex(strain_max) - Ex(0)| / linewidth).
long strain_addressable_count(double strain_max, double linewidth_mhz = 13.0,
                              const StrainCouplings& c = {},
                              Orientation o = Orientation::kM1M1M1, double poisson = 0.11);

}  // namespace nvforge
