#pragma once

// Independent oracles shared by the unit tests and the acceptance run.

#include "nvforge/grape.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace nvforge::testing {

// Haar-distributed unitary from the QR of a complex Gaussian matrix.
inline ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

inline ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(n(rng), n(rng));
  return 0.5 * (a + a.adjoint());
}

inline ComplexVector haar_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(n(rng), n(rng));
  return v.normalized();
}

// Mean |<psi| v^dag u |psi>|^2 over Haar-random states.
inline double monte_carlo_fidelity(const ComplexMatrix& u, const ComplexMatrix& v, int samples,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix m = v.adjoint() * u;
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ComplexVector psi = haar_state(static_cast<int>(u.rows()), rng);
    sum += std::norm(psi.dot(m * psi));
  }
  return sum / samples;
}

struct RandomInstance {
  ControlProblem problem;
  PulseSequence pulses;
};

// Random couplings, slice count and duration, target and interior pulses.
inline RandomInstance random_instance(int n_qubits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> nu(20.0, 200.0);
  std::uniform_int_distribution<int> slices(3, 8);
  std::uniform_real_distribution<double> dt(0.2, 1.5);
  std::vector<Coupling> couplings;
  for (int a = 0; a < n_qubits; ++a)
    for (int b = a + 1; b < n_qubits; ++b) couplings.push_back({a, b, nu(rng)});
  const int n_slices = slices(rng);
  const double slice_us = dt(rng);
  const ComplexMatrix target = random_unitary(1 << n_qubits, rng);
  RandomInstance inst{make_problem(n_qubits, couplings, n_slices, slice_us, target), {}};
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  inst.pulses = zero_pulses(inst.problem);
  for (int k = 0; k < n_slices; ++k)
    for (int j = 0; j < inst.problem.n_controls(); ++j) inst.pulses.amplitudes(k, j) = amp(rng);
  return inst;
}

// Central finite differences of fidelity(propagate(.)) in every amplitude.
inline Eigen::MatrixXd finite_difference_gradient(const ControlProblem& prob,
                                                  const PulseSequence& pulses, double h) {
  Eigen::MatrixXd g(pulses.amplitudes.rows(), pulses.amplitudes.cols());
  for (Eigen::Index k = 0; k < g.rows(); ++k) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      PulseSequence plus = pulses, minus = pulses;
      plus.amplitudes(k, j) += h;
      minus.amplitudes(k, j) -= h;
      g(k, j) = (fidelity(propagate(prob, plus), prob.target) -
                 fidelity(propagate(prob, minus), prob.target)) /
                (2 * h);
    }
  }
  return g;
}

// Largest entrywise |a - b| / max(|b|, floor). The floor keeps entries that
// are numerically zero from dominating through finite-difference round-off.
inline double max_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 double floor = 1e-4) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double denom = std::max(std::abs(b(i)), floor);
    worst = std::max(worst, std::abs(a(i) - b(i)) / denom);
  }
  return worst;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

// Every regular file under dir, keyed by relative path.
inline std::vector<std::pair<std::string, std::string>> snapshot(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      out.emplace_back(std::filesystem::relative(e.path(), dir).string(), read_file(e.path()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("nvforge_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace nvforge::testing
