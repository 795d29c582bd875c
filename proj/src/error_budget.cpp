#include "nvforge/error_budget.hpp"

#include <cmath>
#include <stdexcept>

namespace nvforge {

namespace {

constexpr double kPublishedPDip = 1.95e-3;
constexpr double kPublishedTotal = 4.5e-3;

double sq(double x) { return x * x; }

bool same_inputs(const ErrorParams& a, const ErrorParams& b) {
  return a.t_us == b.t_us && a.t1_ms == b.t1_ms && a.t2_ms == b.t2_ms &&
         a.delta1_khz == b.delta1_khz && a.omega_mw_khz == b.omega_mw_khz &&
         a.omega_opt_mhz == b.omega_opt_mhz && a.delta_mag_mhz == b.delta_mag_mhz &&
         a.delta_str_mhz == b.delta_str_mhz && a.nu_dip_khz == b.nu_dip_khz;
}

}  // namespace

void ErrorParams::validate() const {
  if (!(t_us >= 0) || !std::isfinite(t_us)) throw std::invalid_argument("t_us must be >= 0");
  for (double v : {t1_ms, t2_ms, delta1_khz, omega_mw_khz, omega_opt_mhz, delta_mag_mhz,
                   delta_str_mhz, nu_dip_khz}) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw std::invalid_argument("error parameters must be positive and finite");
    }
  }
}

ErrorParams reference_parameters() { return {}; }

ErrorBudget error_probability(const ErrorParams& p) {
  p.validate();
  ErrorBudget b;
  b.p_t1 = p.t_us / (p.t1_ms * 1e3);
  b.p_t2 = std::pow(p.t_us / (p.t2_ms * 1e3), 3);
  b.p_mw = sq(p.delta1_khz / p.omega_mw_khz);
  b.p_mag = sq(p.omega_mw_khz * 1e-3 / p.delta_mag_mhz);
  b.p_str = sq(p.omega_opt_mhz / p.delta_str_mhz);
  b.p_dip = sq(p.nu_dip_khz / p.omega_mw_khz);
  b.total = b.p_t1 + b.p_t2 + b.p_mw + b.p_mag + b.p_str + b.p_dip;

  if (same_inputs(p, reference_parameters())) {
    b.discrepancies.push_back(
        {"p_dip", b.p_dip, kPublishedPDip,
         "(nu_dip/omega_mw)^2 with the reference inputs does not reproduce the published value; "
         "the formula value is reported"});
    b.discrepancies.push_back({"total", b.total, kPublishedTotal,
                               "sum of the formula terms; differs from the published total "
                               "through p_dip"});
  }
  return b;
}

std::vector<SweepPoint> sweep_omega_mw(const ErrorParams& base, double omega_min_khz,
                                       double omega_max_khz, int n_points) {
  if (n_points < 2) throw std::invalid_argument("sweep needs at least two points");
  if (!(omega_min_khz > 0) || !(omega_max_khz > omega_min_khz)) {
    throw std::invalid_argument("sweep range must be positive and increasing");
  }
  std::vector<SweepPoint> out;
  out.reserve(n_points);
  for (int k = 0; k < n_points; ++k) {
    ErrorParams p = base;
    p.omega_mw_khz =
        k == n_points - 1
            ? omega_max_khz
            : omega_min_khz + (omega_max_khz - omega_min_khz) * k / (n_points - 1);
    out.push_back({p.omega_mw_khz, error_probability(p)});
  }
  return out;
}

}  // namespace nvforge
