#pragma once

// Six-term gate error probability for a dipolar NV register.

#include <string>
#include <vector>

namespace nvforge {

struct ErrorParams {
  double t_us = 20.0;
  double t1_ms = 50.0;
  double t2_ms = 1.0;
  double delta1_khz = 10.0;
  double omega_mw_khz = 800.0;
  double omega_opt_mhz = 10.0;
  double delta_mag_mhz = 20.0;
  double delta_str_mhz = 500.0;
  double nu_dip_khz = 100.0;

  /// All fields must be positive; t_us may be zero.
  void validate() const;
};

/// Machine-readable note where a computed term disagrees with a published value.
struct DiscrepancyNote {
  std::string term;
  double computed = 0.0;
  double published = 0.0;
  std::string note;
};

struct ErrorBudget {
  double p_t1 = 0.0;
  double p_t2 = 0.0;
  double p_mw = 0.0;
  double p_mag = 0.0;
  double p_str = 0.0;
  double p_dip = 0.0;
  double total = 0.0;
  std::vector<DiscrepancyNote> discrepancies;
};

/// Hardware set from the published estimate (20 us gate, T1 50 ms, ...).
ErrorParams reference_parameters();

/// p_t1 = t/T1, p_t2 = (t/T2)^3, p_mw = (delta1/omega_mw)^2,
/// p_mag = (omega_mw/delta_mag)^2, p_str = (omega_opt/delta_str)^2,
/// p_dip = (nu_dip/omega_mw)^2. Discrepancy notes are attached when the inputs
/// equal reference_parameters().
ErrorBudget error_probability(const ErrorParams& p);

struct SweepPoint {
  double omega_mw_khz;
  ErrorBudget budget;
};

/// Budget over a uniform omega_mw grid, other parameters fixed.
std::vector<SweepPoint> sweep_omega_mw(const ErrorParams& base, double omega_min_khz,
                                       double omega_max_khz, int n_points);

}  // namespace nvforge
