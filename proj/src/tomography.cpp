#include "nvforge/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nvforge {

ComplexVector pauli_coefficients(const ComplexMatrix& u, int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("n_qubits must be positive");
  const int dim = 1 << n_qubits;
  if (u.rows() != dim || u.cols() != dim) throw std::invalid_argument("chi_matrix: dimension mismatch");
  const int n_ops = dim * dim;
  ComplexVector c(n_ops);
  for (int m = 0; m < n_ops; ++m) {
    c(m) = (pauli_product(m, n_qubits).adjoint() * u).trace() / static_cast<double>(dim);
  }
  return c;
}

ProcessMatrix chi_matrix(const ComplexMatrix& u, int n_qubits) {
  const ComplexVector c = pauli_coefficients(u, n_qubits);
  ProcessMatrix p;
  p.n_qubits = n_qubits;
  p.chi = c * c.adjoint();
  p.labels.reserve(c.size());
  for (int m = 0; m < c.size(); ++m) p.labels.push_back(pauli_label(m, n_qubits));
  return p;
}

double chi_deviation_bound(double average_fidelity, int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  const double f_pro = ((dim + 1) * average_fidelity - 1.0) / dim;
  return std::sqrt(2.0 * std::max(0.0, 1.0 - f_pro));
}

}  // namespace nvforge
