#include "nvforge/zeeman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace nvforge {

namespace {

constexpr double kDegToRad = kPi / 180.0;

const Eigen::Vector3d kFieldAxis = Eigen::Vector3d(-1, -1, -1).normalized();

// Permutations of three labels, used for overlap matching.
constexpr std::array<std::array<int, 3>, 6> kPermutations = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

TransitionSet transitions_from_energies(const Eigen::Vector3d& e) {
  // e ordered +1, 0, -1
  return {std::abs(e(0) - e(1)), std::abs(e(2) - e(1)), std::abs(e(0) - e(2))};
}

}  // namespace

std::string to_string(Orientation o) {
  switch (o) {
    case Orientation::kM1M1M1: return "[-1-1-1]";
    case Orientation::kM111: return "[-111]";
    case Orientation::k1M11: return "[1-11]";
    case Orientation::k11M1: return "[11-1]";
  }
  throw std::invalid_argument("unknown orientation");
}

Orientation orientation_from_string(const std::string& label) {
  for (Orientation o : kAllOrientations) {
    if (to_string(o) == label) return o;
  }
  throw std::invalid_argument("unknown orientation label: " + label);
}

Eigen::Vector3d nv_axis(Orientation o) {
  switch (o) {
    case Orientation::kM1M1M1: return Eigen::Vector3d(-1, -1, -1).normalized();
    case Orientation::kM111: return Eigen::Vector3d(-1, 1, 1).normalized();
    case Orientation::k1M11: return Eigen::Vector3d(1, -1, 1).normalized();
    case Orientation::k11M1: return Eigen::Vector3d(1, 1, -1).normalized();
  }
  throw std::invalid_argument("unknown orientation");
}

double field_angle_deg(Orientation o) {
  if (o == Orientation::kM1M1M1) return 0.0;
  // Exact tetrahedral angle rather than a dot product, so all three tilted
  // orientations give bit-identical curves.
  return std::acos(-1.0 / 3.0) / kDegToRad;
}

void ZeemanParameters::validate() const {
  if (!(zero_field_splitting_mhz > 0.0)) throw std::invalid_argument("D must be positive");
  if (!(gyromagnetic_mhz_per_gauss > 0.0)) {
    throw std::invalid_argument("gyromagnetic ratio must be positive");
  }
}

ComplexMatrix nv_hamiltonian(double b_gauss, double theta_deg, double phi_deg,
                             const ZeemanParameters& p) {
  if (!(b_gauss >= 0.0)) throw std::invalid_argument("nv_hamiltonian: field must be >= 0");
  p.validate();
  const double d = p.zero_field_splitting_mhz;
  const double delta = p.gyromagnetic_mhz_per_gauss * b_gauss;
  const double theta = theta_deg * kDegToRad;
  const double phi = phi_deg * kDegToRad;
  const double axial = delta * std::cos(theta);
  const Complex lower = -delta * std::sin(theta) / std::sqrt(2.0) * std::polar(1.0, phi);
  const Complex upper = std::conj(lower);

  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = d + axial;
  h(2, 2) = d - axial;
  h(0, 1) = upper;
  h(1, 0) = lower;
  h(1, 2) = upper;
  h(2, 1) = lower;
  return h;
}

ComplexMatrix nv_hamiltonian(double b_gauss, const NVConfiguration& cfg,
                             const ZeemanParameters& p) {
  return nv_hamiltonian(b_gauss, cfg.theta_deg(), cfg.phi_deg, p);
}

std::string to_string(TransitionLabel label) {
  switch (label) {
    case TransitionLabel::kZeroToPlus: return "0->+1";
    case TransitionLabel::kZeroToMinus: return "0->-1";
    case TransitionLabel::kPlusToMinus: return "+1<->-1";
  }
  throw std::invalid_argument("unknown transition label");
}

double TransitionSet::operator[](TransitionLabel label) const {
  switch (label) {
    case TransitionLabel::kZeroToPlus: return zero_to_plus;
    case TransitionLabel::kZeroToMinus: return zero_to_minus;
    case TransitionLabel::kPlusToMinus: return plus_to_minus;
  }
  throw std::invalid_argument("unknown transition label");
}

LevelTracker::LevelTracker(double theta_deg, double phi_deg, ZeemanParameters p)
    : theta_deg_(theta_deg), phi_deg_(phi_deg), params_(p) {
  params_.validate();
  states_ = ComplexMatrix::Identity(3, 3);
  energies_ << params_.zero_field_splitting_mhz, 0.0, params_.zero_field_splitting_mhz;
}

TransitionSet LevelTracker::advance(double b_gauss) {
  if (!(b_gauss >= 0.0)) throw std::invalid_argument("LevelTracker: field must be >= 0");
  const double distance = std::abs(b_gauss - b_);
  const int steps = std::max(1, static_cast<int>(std::ceil(distance / kMaxStepGauss)));
  const double start = b_;
  for (int k = 1; k <= steps; ++k) {
    step_to(k == steps ? b_gauss : start + (b_gauss - start) * k / steps);
  }
  return transitions_from_energies(energies_);
}

void LevelTracker::step_to(double b_gauss) {
  b_ = b_gauss;
  if (b_gauss == 0.0) {
    states_ = ComplexMatrix::Identity(3, 3);
    energies_ << params_.zero_field_splitting_mhz, 0.0, params_.zero_field_splitting_mhz;
    return;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      nv_hamiltonian(b_gauss, theta_deg_, phi_deg_, params_));
  const ComplexMatrix overlap = states_.adjoint() * solver.eigenvectors();
  const Eigen::Matrix3d weight = overlap.cwiseAbs2();

  const std::array<int, 3>* best = &kPermutations[0];
  double best_score = -1.0;
  for (const auto& perm : kPermutations) {
    const double score = weight(0, perm[0]) + weight(1, perm[1]) + weight(2, perm[2]);
    if (score > best_score) {
      best_score = score;
      best = &perm;
    }
  }
  ComplexMatrix next(3, 3);
  for (int label = 0; label < 3; ++label) {
    const int col = (*best)[static_cast<std::size_t>(label)];
    next.col(label) = solver.eigenvectors().col(col);
    energies_(label) = solver.eigenvalues()(col);
  }
  states_ = std::move(next);
}

TransitionSet transition_frequencies(double b_gauss, double theta_deg, double phi_deg,
                                     const ZeemanParameters& p) {
  LevelTracker tracker(theta_deg, phi_deg, p);
  return tracker.advance(b_gauss);
}

TransitionSet transition_frequencies(double b_gauss, const NVConfiguration& cfg,
                                     const ZeemanParameters& p) {
  return transition_frequencies(b_gauss, cfg.theta_deg(), cfg.phi_deg, p);
}

double p1_transition(double b_gauss, const ZeemanParameters& p) {
  if (!(b_gauss >= 0.0)) throw std::invalid_argument("p1_transition: field must be >= 0");
  p.validate();
  return p.gyromagnetic_mhz_per_gauss * b_gauss;
}

long addressable_count(double frequency_span_mhz, double linewidth_mhz) {
  if (!(linewidth_mhz > 0.0)) throw std::invalid_argument("linewidth must be positive");
  if (!(frequency_span_mhz > 0.0)) return 0;
  // Relative slack absorbs representation error in exact divisions such as 10 / 0.1.
  return static_cast<long>(std::floor(frequency_span_mhz / linewidth_mhz * (1.0 + 1e-12)));
}

std::vector<double> field_grid(double b_min, double b_max, double step_gauss) {
  if (!(step_gauss > 0.0)) throw std::invalid_argument("field step must be positive");
  if (!(b_min >= 0.0)) throw std::invalid_argument("field range must be non-negative");
  if (!(b_max >= b_min)) throw std::invalid_argument("field range is inverted");
  std::vector<double> grid;
  const auto intervals = static_cast<long>(std::ceil((b_max - b_min) / step_gauss - 1e-9));
  grid.reserve(static_cast<std::size_t>(intervals + 1));
  for (long k = 0; k < intervals; ++k) grid.push_back(b_min + static_cast<double>(k) * step_gauss);
  grid.push_back(b_max);
  return grid;
}

std::vector<TransitionSample> scan_transitions(double b_min, double b_max, double step_gauss,
                                               double phi_deg, const ZeemanParameters& p) {
  const std::vector<double> grid = field_grid(b_min, b_max, step_gauss);
  std::vector<LevelTracker> trackers;
  for (Orientation o : kAllOrientations) trackers.emplace_back(field_angle_deg(o), phi_deg, p);

  std::vector<TransitionSample> rows;
  rows.reserve(grid.size() * 13);
  for (double b : grid) {
    for (std::size_t k = 0; k < kAllOrientations.size(); ++k) {
      const TransitionSet t = trackers[k].advance(b);
      for (TransitionLabel label : kAllTransitions) {
        rows.push_back({b, to_string(kAllOrientations[k]), to_string(label), t[label]});
      }
    }
    rows.push_back({b, "P1", "-1/2->+1/2", p1_transition(b, p)});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Cross-relaxation windows
// ---------------------------------------------------------------------------

namespace {

struct CurveSample {
  double b = 0.0;
  TransitionSet aligned;
  TransitionSet tilted;
  double p1 = 0.0;
};

// Both NV classes tracked together so any snapshot can be re-advanced.
class CurveSampler {
 public:
  explicit CurveSampler(const ZeemanParameters& p)
      : params_(p),
        aligned_(field_angle_deg(Orientation::kM1M1M1), 0.0, p),
        tilted_(field_angle_deg(Orientation::kM111), 0.0, p) {}

  CurveSample at(double b) {
    return {b, aligned_.advance(b), tilted_.advance(b), p1_transition(b, params_)};
  }

 private:
  ZeemanParameters params_;
  LevelTracker aligned_;
  LevelTracker tilted_;
};

double min_interclass_separation(const CurveSample& s) {
  double best = std::numeric_limits<double>::infinity();
  for (TransitionLabel a : kAllTransitions) {
    best = std::min(best, std::abs(s.aligned[a] - s.p1));
    best = std::min(best, std::abs(s.tilted[a] - s.p1));
    for (TransitionLabel t : kAllTransitions) {
      best = std::min(best, std::abs(s.aligned[a] - s.tilted[t]));
    }
  }
  return best;
}

class WindowScanner {
 public:
  WindowScanner(double b_min, double b_max, double step, double guard, const ZeemanParameters& p,
                const WindowOptions& opts)
      : guard_(guard), opts_(opts) {
    grid_ = field_grid(b_min, b_max, step);
    CurveSampler sampler(p);
    snapshots_.reserve(grid_.size());
    samples_.reserve(grid_.size());
    for (double b : grid_) {
      samples_.push_back(sampler.at(b));
      snapshots_.push_back(sampler);
    }
  }

  std::vector<FieldWindow> windows() {
    std::vector<FieldWindow> out;
    const std::size_t n = grid_.size();
    std::size_t i = 0;
    while (i < n) {
      if (!ok(samples_[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < n && ok(samples_[j + 1])) ++j;
      const double left = i == 0 ? grid_[0] : refine_edge(i - 1, grid_[i - 1], grid_[i], false);
      const double right = j + 1 == n ? grid_[n - 1] : refine_edge(j, grid_[j], grid_[j + 1], true);
      split_monotonic(left, right, i, j, out);
      i = j + 1;
    }
    return out;
  }

 private:
  bool ok(const CurveSample& s) const { return min_interclass_separation(s) >= guard_; }

  double operating(const CurveSample& s) const {
    return opts_.operating_aligned ? s.aligned[opts_.operating_transition]
                                   : s.tilted[opts_.operating_transition];
  }

  // Evaluates curves at b starting from the snapshot of grid point `near`.
  CurveSample eval(std::size_t near, double b) {
    CurveSampler copy = snapshots_[near];
    return copy.at(b);
  }

  std::size_t nearest_index(double b) const {
    auto it = std::upper_bound(grid_.begin(), grid_.end(), b);
    if (it == grid_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(grid_.begin(), it) - 1);
  }

  // Edge between an ok point and a bad point; returns the ok side.
  double refine_edge(std::size_t near, double lo, double hi, bool ok_is_lo) {
    while (hi - lo > opts_.resolution_gauss) {
      const double mid = 0.5 * (lo + hi);
      const bool mid_ok = ok(eval(near, mid));
      if (mid_ok == ok_is_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return ok_is_lo ? lo : hi;
  }

  double slope(double b) {
    const double h = std::max(opts_.resolution_gauss * 0.1, 1e-6);
    const double lo = std::max(b - h, grid_.front());
    const double hi = std::min(b + h, grid_.back());
    const std::size_t near = nearest_index(b);
    return operating(eval(near, hi)) - operating(eval(near, lo));
  }

  double locate_extremum(double lo, double hi) {
    const double sign_lo = slope(lo) > 0 ? 1.0 : -1.0;
    while (hi - lo > opts_.resolution_gauss) {
      const double mid = 0.5 * (lo + hi);
      if ((slope(mid) > 0 ? 1.0 : -1.0) == sign_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  void emit(double b_lo, double b_hi, std::vector<FieldWindow>& out) {
    if (!(b_hi - b_lo > 0.0)) return;
    const double f_lo = operating(eval(nearest_index(b_lo), b_lo));
    const double f_hi = operating(eval(nearest_index(b_hi), b_hi));
    out.push_back({b_lo, b_hi, std::abs(f_hi - f_lo)});
  }

  void split_monotonic(double left, double right, std::size_t i, std::size_t j,
                       std::vector<FieldWindow>& out) {
    std::vector<double> points{left};
    std::vector<double> values{operating(eval(nearest_index(left), left))};
    for (std::size_t k = i; k <= j; ++k) {
      if (grid_[k] > points.back() && grid_[k] < right) {
        points.push_back(grid_[k]);
        values.push_back(operating(samples_[k]));
      }
    }
    if (right > points.back()) {
      points.push_back(right);
      values.push_back(operating(eval(nearest_index(right), right)));
    }

    double start = left;
    int direction = 0;
    for (std::size_t k = 1; k < points.size(); ++k) {
      const double diff = values[k] - values[k - 1];
      const int sign = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
      if (sign == 0) continue;
      if (direction != 0 && sign != direction) {
        const double lo = k >= 2 ? points[k - 2] : points[k - 1];
        const double extremum = locate_extremum(std::max(lo, start), points[k]);
        emit(start, extremum, out);
        start = extremum;
      }
      direction = sign;
    }
    emit(start, right, out);
  }

  double guard_;
  WindowOptions opts_;
  std::vector<double> grid_;
  std::vector<CurveSample> samples_;
  std::vector<CurveSampler> snapshots_;
};

}  // namespace

std::vector<FieldWindow> cross_relaxation_windows(double b_min, double b_max, double step_gauss,
                                                  double guard_mhz, const ZeemanParameters& p,
                                                  const WindowOptions& opts) {
  if (!(guard_mhz > 0.0)) throw std::invalid_argument("guard must be positive");
  if (!(opts.resolution_gauss > 0.0)) throw std::invalid_argument("resolution must be positive");
  p.validate();
  WindowScanner scanner(b_min, b_max, step_gauss, guard_mhz, p, opts);
  return scanner.windows();
}

}  // namespace nvforge
