#include "nvforge/grape.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace nvforge {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;

struct SliceEigen {
  ComplexMatrix vectors;
  Eigen::VectorXd values;
  ComplexMatrix unitary;
};

ComplexMatrix slice_hamiltonian(const ControlProblem& prob, const PulseSequence& pulses, int k) {
  ComplexMatrix h = prob.drift;
  for (int j = 0; j < prob.n_controls(); ++j) h += pulses.amplitudes(k, j) * prob.controls[j];
  return h;
}

SliceEigen slice_eigen(const ComplexMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("slice eigendecomposition failed");
  SliceEigen s{es.eigenvectors(), es.eigenvalues(), {}};
  ComplexVector phases(s.values.size());
  for (int a = 0; a < s.values.size(); ++a) phases(a) = std::polar(1.0, -s.values(a) * dt);
  s.unitary = s.vectors * phases.asDiagonal() * s.vectors.adjoint();
  return s;
}

void check_pulses(const ControlProblem& prob, const PulseSequence& pulses) {
  if (pulses.amplitudes.rows() != prob.n_slices || pulses.amplitudes.cols() != prob.n_controls()) {
    throw std::invalid_argument("pulse array does not match the control problem");
  }
  if (pulses.slice_us != prob.slice_us) {
    throw std::invalid_argument("pulse slice duration does not match the control problem");
  }
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

using Flat = Eigen::VectorXd;

Flat flatten(const Eigen::MatrixXd& m) { return Eigen::Map<const Flat>(m.data(), m.size()); }

Eigen::MatrixXd unflatten(const Flat& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

Flat project(const Flat& x, double bound) { return x.cwiseMax(-bound).cwiseMin(bound); }

// Zero the components that would push an amplitude already on the bound outward.
void freeze_active(Flat& d, const Flat& x, double bound) {
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if ((x(i) >= bound && d(i) > 0) || (x(i) <= -bound && d(i) < 0)) d(i) = 0.0;
  }
}

class LbfgsMemory {
 public:
  explicit LbfgsMemory(int size) : size_(size) {}

  void clear() { pairs_.clear(); }
  bool empty() const { return pairs_.empty(); }

  // s: step in x, y: change in the ascent gradient.
  void push(const Flat& s, const Flat& y) {
    // Curvature of -F along s.
    const double sy = -s.dot(y);
    if (sy <= 1e-12 * s.norm() * y.norm()) return;
    pairs_.push_back({s, -y, 1.0 / sy});
    if (static_cast<int>(pairs_.size()) > size_) pairs_.pop_front();
  }

  // Ascent direction H g for the maximisation problem.
  Flat direction(const Flat& g) const {
    Flat q = -g;
    std::vector<double> alpha(pairs_.size());
    for (int i = static_cast<int>(pairs_.size()) - 1; i >= 0; --i) {
      alpha[i] = pairs_[i].rho * pairs_[i].s.dot(q);
      q -= alpha[i] * pairs_[i].y;
    }
    const Pair& last = pairs_.back();
    q *= 1.0 / (last.rho * last.y.squaredNorm());
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const double beta = pairs_[i].rho * pairs_[i].y.dot(q);
      q += (alpha[i] - beta) * pairs_[i].s;
    }
    return -q;
  }

 private:
  struct Pair {
    Flat s;
    Flat y;
    double rho;
  };
  int size_;
  std::deque<Pair> pairs_;
};

}  // namespace

ComplexMatrix zz_drift(int n_qubits, const std::vector<Coupling>& couplings,
                       ZZConvention convention) {
  if (n_qubits < 1) throw std::invalid_argument("n_qubits must be positive");
  const int dim = 1 << n_qubits;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  const double factor = convention == ZZConvention::kQuarter ? 0.25 : 1.0;
  for (const Coupling& c : couplings) {
    if (c.qubit_a < 0 || c.qubit_a >= n_qubits || c.qubit_b < 0 || c.qubit_b >= n_qubits) {
      throw std::out_of_range("coupling qubit index out of range");
    }
    if (c.qubit_a == c.qubit_b) throw std::invalid_argument("coupling needs two distinct qubits");
    h += kTwoPi * factor * c.nu_khz * 1e-3 *
         embed_pair(pauli_z(), c.qubit_a, pauli_z(), c.qubit_b, n_qubits);
  }
  return h;
}

void ControlProblem::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("n_qubits must be positive");
  const int d = dim();
  if (drift.rows() != d || drift.cols() != d) throw std::invalid_argument("drift dimension mismatch");
  if (!is_hermitian(drift)) throw std::invalid_argument("drift must be Hermitian");
  if (controls.size() != control_names.size()) {
    throw std::invalid_argument("each control needs a name");
  }
  for (const ComplexMatrix& c : controls) {
    if (c.rows() != d || c.cols() != d) throw std::invalid_argument("control dimension mismatch");
    if (!is_hermitian(c)) throw std::invalid_argument("controls must be Hermitian");
  }
  if (n_slices < 1) throw std::invalid_argument("n_slices must be positive");
  if (!(slice_us >= 0)) throw std::invalid_argument("slice duration must be non-negative");
  if (target.rows() != d || target.cols() != d) throw std::invalid_argument("target dimension mismatch");
  if (!is_unitary(target, 1e-9)) throw std::invalid_argument("target must be unitary");
  if (!(amplitude_bound_mhz > 0)) throw std::invalid_argument("amplitude bound must be positive");
}

ControlProblem make_problem(int n_qubits, const std::vector<Coupling>& couplings, int n_slices,
                            double slice_us, const ComplexMatrix& target,
                            double amplitude_bound_mhz, ZZConvention convention) {
  ControlProblem p;
  p.n_qubits = n_qubits;
  p.drift = zz_drift(n_qubits, couplings, convention);
  for (int q = 0; q < n_qubits; ++q) {
    p.controls.push_back(kPi * embed(pauli_x(), q, n_qubits));
    p.control_names.push_back("u" + std::to_string(q + 1) + "x");
    p.controls.push_back(kPi * embed(pauli_y(), q, n_qubits));
    p.control_names.push_back("u" + std::to_string(q + 1) + "y");
  }
  p.n_slices = n_slices;
  p.slice_us = slice_us;
  p.target = target;
  p.amplitude_bound_mhz = amplitude_bound_mhz;
  p.validate();
  return p;
}

PulseSequence zero_pulses(const ControlProblem& prob) {
  return {Eigen::MatrixXd::Zero(prob.n_slices, prob.n_controls()), prob.slice_us};
}

PulseSequence random_pulses(const ControlProblem& prob, std::uint64_t seed, double scale_mhz) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale_mhz, scale_mhz);
  PulseSequence p = zero_pulses(prob);
  // Row-major fill so the draw order does not depend on Eigen's storage.
  for (int k = 0; k < prob.n_slices; ++k) {
    for (int j = 0; j < prob.n_controls(); ++j) p.amplitudes(k, j) = dist(rng);
  }
  return p;
}

ComplexMatrix propagate(const ControlProblem& prob, const PulseSequence& pulses) {
  check_pulses(prob, pulses);
  ComplexMatrix u = ComplexMatrix::Identity(prob.dim(), prob.dim());
  for (int k = 0; k < prob.n_slices; ++k) {
    u = slice_eigen(slice_hamiltonian(prob, pulses, k), prob.slice_us).unitary * u;
  }
  return u;
}

double fidelity(const ComplexMatrix& u, const ComplexMatrix& target) {
  if (u.rows() != target.rows() || u.cols() != target.cols() || !is_square(u)) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const double d = static_cast<double>(u.rows());
  const ComplexMatrix m = target.adjoint() * u;
  const double tr_mm = (m * m.adjoint()).trace().real();
  return (tr_mm + std::norm(m.trace())) / (d * (d + 1.0));
}

FidelityGradient fidelity_and_gradient(const ControlProblem& prob, const PulseSequence& pulses) {
  check_pulses(prob, pulses);
  const int n = prob.n_slices;
  const int d = prob.dim();
  const double dt = prob.slice_us;

  std::vector<SliceEigen> slices;
  slices.reserve(n);
  for (int k = 0; k < n; ++k) slices.push_back(slice_eigen(slice_hamiltonian(prob, pulses, k), dt));

  // forward[k] = U_k ... U_1 (forward[0] = I); backward[k] = U_n ... U_{k+1}.
  std::vector<ComplexMatrix> forward(n + 1), backward(n + 1);
  forward[0] = ComplexMatrix::Identity(d, d);
  for (int k = 0; k < n; ++k) forward[k + 1] = slices[k].unitary * forward[k];
  backward[n] = ComplexMatrix::Identity(d, d);
  for (int k = n - 1; k >= 0; --k) backward[k] = backward[k + 1] * slices[k].unitary;

  const ComplexMatrix& u = forward[n];
  const ComplexMatrix m = prob.target.adjoint() * u;
  const Complex g = m.trace();
  const double norm = static_cast<double>(d) * (d + 1.0);

  FidelityGradient out;
  out.fidelity = ((m * m.adjoint()).trace().real() + std::norm(g)) / norm;
  out.gradient = Eigen::MatrixXd::Zero(n, prob.n_controls());

  const ComplexMatrix target_dag = prob.target.adjoint();
  for (int k = 0; k < n; ++k) {
    const SliceEigen& s = slices[k];
    // d tr(T^dag B U_k F) = tr(X dU_k) with X = F T^dag B.
    const ComplexMatrix x = forward[k] * target_dag * backward[k + 1];
    const ComplexMatrix y = s.vectors.adjoint() * x * s.vectors;
    ComplexMatrix w(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        const double la = s.values(a), lb = s.values(b);
        const Complex phi = Complex(0.0, -dt) * std::polar(1.0, -(la + lb) * dt / 2.0) *
                            sinc((la - lb) * dt / 2.0);
        w(a, b) = y(b, a) * phi;
      }
    }
    for (int j = 0; j < prob.n_controls(); ++j) {
      const ComplexMatrix c = s.vectors.adjoint() * prob.controls[j] * s.vectors;
      const Complex dg = w.cwiseProduct(c).sum();
      out.gradient(k, j) = 2.0 * (std::conj(g) * dg).real() / norm;
    }
  }
  return out;
}

Eigen::MatrixXd gradient(const ControlProblem& prob, const PulseSequence& pulses) {
  return fidelity_and_gradient(prob, pulses).gradient;
}

OptimizeResult optimize(const ControlProblem& prob, const PulseSequence& init,
                        const OptimizeOptions& opts) {
  prob.validate();
  check_pulses(prob, init);
  if (opts.max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (!(opts.step > 0)) throw std::invalid_argument("step must be positive");
  const double bound = prob.amplitude_bound_mhz;
  if (init.amplitudes.cwiseAbs().maxCoeff() > bound) {
    throw std::invalid_argument("initial pulses exceed the amplitude bound");
  }

  const Eigen::Index rows = init.amplitudes.rows(), cols = init.amplitudes.cols();
  auto evaluate = [&](const Flat& x) {
    return fidelity_and_gradient(prob, {unflatten(x, rows, cols), prob.slice_us});
  };
  auto fidelity_at = [&](const Flat& x) {
    return fidelity(propagate(prob, {unflatten(x, rows, cols), prob.slice_us}), prob.target);
  };

  Flat x = flatten(init.amplitudes);
  FidelityGradient fg = evaluate(x);
  Flat g = flatten(fg.gradient);
  double f = fg.fidelity;

  OptimizeResult result;
  result.fidelity_trace.push_back(f);
  Flat best_x = x;
  double best_f = f;

  LbfgsMemory memory(opts.lbfgs_memory);
  double steepest_step = opts.step;
  result.status = "max_iters";

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    if (f >= opts.target_fidelity) break;

    Flat x_new;
    bool accepted = false;

    if (opts.step_rule == StepRule::kFixed) {
      Flat d = g;
      freeze_active(d, x, bound);
      x_new = project(x + opts.step * d, bound);
      accepted = true;
    } else {
      // Try the quasi-Newton direction first, then fall back to steepest ascent.
      const bool have_memory = opts.direction == Direction::kLbfgs && !memory.empty();
      for (int attempt = 0; attempt < (have_memory ? 2 : 1) && !accepted; ++attempt) {
        const bool quasi_newton = have_memory && attempt == 0;
        Flat d = quasi_newton ? memory.direction(g) : g;
        freeze_active(d, x, bound);
        if (g.dot(d) <= 0.0) continue;

        double alpha = quasi_newton ? 1.0 : steepest_step;
        for (int bt = 0; bt < kMaxBacktracks; ++bt, alpha *= 0.5) {
          const Flat trial = project(x + alpha * d, bound);
          const double rise = g.dot(trial - x);
          if (rise <= 0.0) continue;
          const double f_trial = fidelity_at(trial);
          if (f_trial > f && f_trial >= f + kArmijo * rise) {
            x_new = trial;
            accepted = true;
            if (!quasi_newton) steepest_step = 2.0 * alpha;
            break;
          }
        }
        if (!accepted && quasi_newton) memory.clear();
      }
      if (!accepted) {
        result.status = "line_search_stalled";
        break;
      }
    }

    const FidelityGradient fg_new = evaluate(x_new);
    const Flat g_new = flatten(fg_new.gradient);
    memory.push(x_new - x, g_new - g);
    x = x_new;
    g = g_new;
    f = fg_new.fidelity;
    result.fidelity_trace.push_back(f);
    if (f > best_f) {
      best_f = f;
      best_x = x;
    }
  }

  result.iterations = iter;
  result.converged = best_f >= opts.target_fidelity;
  if (result.converged) result.status = "converged";
  result.pulses = {unflatten(best_x, rows, cols), prob.slice_us};
  return result;
}

}  // namespace nvforge
