#include "nvforge/strain.hpp"

#include <cmath>
#include <stdexcept>

namespace nvforge {

namespace {

constexpr double kPhzToGhz = 1e6;
constexpr double kThzToGhz = 1e3;

Eigen::Vector3d bond_for_x_axis(Orientation o) {
  switch (o) {
    case Orientation::kM1M1M1: return {-1, 1, 1};
    case Orientation::kM111: return {1, -1, 1};
    case Orientation::k1M11: return {1, 1, -1};
    case Orientation::k11M1: return {-1, 1, 1};
  }
  throw std::invalid_argument("unknown orientation");
}

// Rows x', y', z' of the NV frame in crystal coordinates.
Eigen::Matrix3d crystal_frame(Orientation o) {
  const Eigen::Vector3d z = nv_axis(o);
  const Eigen::Vector3d bond = bond_for_x_axis(o).normalized();
  const Eigen::Vector3d x = (bond - bond.dot(z) * z).normalized();
  const Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix3d frame;
  frame.row(0) = x.transpose();
  frame.row(1) = y.transpose();
  frame.row(2) = z.transpose();
  return frame;
}

}  // namespace

StrainTensor StrainTensor::cantilever(const Eigen::Matrix3d& components) {
  if ((components - components.transpose()).cwiseAbs().maxCoeff() > 1e-15) {
    throw std::invalid_argument("strain tensor must be symmetric");
  }
  return {StrainFrame::kCantilever, std::nullopt, components};
}

StrainTensor StrainTensor::uniaxial(double strain, double poisson) {
  return cantilever(Eigen::Vector3d(-poisson * strain, -poisson * strain, strain).asDiagonal());
}

void StrainCouplings::validate() const {
  for (double v : {lambda_a1_phz, lambda_a1p_phz, lambda_e_phz, lambda_ep_phz, df_e1_ghz,
                   df_e2_ghz, f_zpl_thz}) {
    if (!std::isfinite(v)) throw std::invalid_argument("strain couplings must be finite");
  }
}

void CantileverGeometry::validate() const {
  if (!(length_um > 0 && width_um > 0 && height_um > 0 && youngs_modulus_gpa > 0 && poisson > 0)) {
    throw std::invalid_argument("cantilever dimensions and moduli must be positive");
  }
  if (!(force_n >= 0)) throw std::invalid_argument("cantilever force must be non-negative");
}

namespace {

// eps_zz per unit (L - z) * x, in SI: 1 / (E I) with F folded in.
double bending_factor(const CantileverGeometry& g) {
  const double e_pa = g.youngs_modulus_gpa * 1e9;
  const double w = g.width_um * 1e-6;
  const double h = g.height_um * 1e-6;
  const double inertia = w * h * h * h / 12.0;
  return g.force_n / (e_pa * inertia);
}

}  // namespace

StrainTensor cantilever_strain(const CantileverGeometry& geom, double z_um, double x_um) {
  geom.validate();
  constexpr double kSlack = 1e-12;
  if (z_um < -kSlack || z_um > geom.length_um + kSlack) {
    throw std::out_of_range("cantilever_strain: z outside the beam");
  }
  if (std::abs(x_um) > geom.height_um / 2 + kSlack) {
    throw std::out_of_range("cantilever_strain: x outside the beam");
  }
  const double eps = bending_factor(geom) * (geom.length_um - z_um) * 1e-6 * x_um * 1e-6;
  return StrainTensor::uniaxial(eps, geom.poisson);
}

double peak_strain(const CantileverGeometry& geom) {
  geom.validate();
  return bending_factor(geom) * geom.length_um * 1e-6 * geom.height_um * 0.5e-6;
}

double force_for_peak_strain(const CantileverGeometry& geom, double target) {
  if (!(target >= 0)) throw std::invalid_argument("target strain must be non-negative");
  CantileverGeometry unit = geom;
  unit.force_n = 1.0;
  return target / peak_strain(unit);
}

Eigen::Matrix3d nv_frame_rotation(Orientation o) {
  if (o == Orientation::kM1M1M1) return Eigen::Matrix3d::Identity();
  return crystal_frame(o) * crystal_frame(Orientation::kM1M1M1).transpose();
}

StrainTensor transform_to_nv_frame(const StrainTensor& e, Orientation o) {
  if (e.frame != StrainFrame::kCantilever) {
    throw std::invalid_argument("transform_to_nv_frame: input must be in the cantilever frame");
  }
  const Eigen::Matrix3d r = nv_frame_rotation(o);
  Eigen::Matrix3d rotated = r * e.components * r.transpose();
  // Restore exact symmetry lost to rounding.
  rotated = 0.5 * (rotated + rotated.transpose()).eval();
  return {StrainFrame::kNv, o, rotated};
}

StrainShifts coupling_shifts(const StrainTensor& e, const StrainCouplings& c) {
  if (e.frame != StrainFrame::kNv) {
    throw std::invalid_argument("coupling_shifts: strain must be in an NV frame");
  }
  c.validate();
  const Eigen::Matrix3d& s = e.components;
  StrainShifts g;
  g.g_a1_ghz = kPhzToGhz * (c.lambda_a1_phz * s(2, 2) + c.lambda_a1p_phz * (s(0, 0) + s(1, 1)));
  g.g_e1_ghz = kPhzToGhz * (c.lambda_e_phz * (s(1, 1) - s(0, 0)) +
                            c.lambda_ep_phz * (s(0, 2) + s(2, 0)));
  g.g_e2_ghz = kPhzToGhz * (c.lambda_e_phz * (s(0, 1) + s(1, 0)) +
                            c.lambda_ep_phz * (s(1, 2) + s(2, 1)));
  return g;
}

OpticalDetunings optical_transitions(const StrainShifts& g, const StrainCouplings& c) {
  c.validate();
  const double splitting = std::hypot(g.g_e1_ghz + c.df_e1_ghz, g.g_e2_ghz + c.df_e2_ghz);
  return {g.g_a1_ghz + splitting, g.g_a1_ghz - splitting};
}

double absolute_frequency_ghz(double detuning_ghz, const StrainCouplings& c) {
  return detuning_ghz + c.f_zpl_thz * kThzToGhz;
}

OpticalDetunings detunings_for_strain(double strain, Orientation o, double poisson,
                                      const StrainCouplings& c) {
  const StrainTensor nv = transform_to_nv_frame(StrainTensor::uniaxial(strain, poisson), o);
  return optical_transitions(coupling_shifts(nv, c), c);
}

long strain_addressable_count(double strain_max, double linewidth_mhz, const StrainCouplings& c,
                              Orientation o, double poisson) {
  if (!(strain_max >= 0)) throw std::invalid_argument("strain_max must be non-negative");
  if (!(linewidth_mhz > 0)) throw std::invalid_argument("linewidth must be positive");
  const double shift_mhz = std::abs(detunings_for_strain(strain_max, o, poisson, c).ex_ghz -
                                    detunings_for_strain(0.0, o, poisson, c).ex_ghz) *
                           1e3;
  return static_cast<long>(std::floor(shift_mhz / linewidth_mhz * (1.0 + 1e-12)));
}

}  // namespace nvforge
