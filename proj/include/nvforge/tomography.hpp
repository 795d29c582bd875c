#pragma once

// Process matrices in the Pauli product basis.

#include "nvforge/core.hpp"

#include <string>
#include <vector>

namespace nvforge {

struct ProcessMatrix {
  int n_qubits = 1;
  ComplexMatrix chi;                // 4^n x 4^n
  std::vector<std::string> labels;  // "II", "IX", ...
};

/// chi_mn = c_m conj(c_n), c_m = tr(P_m^dag u) / 2^n.
ProcessMatrix chi_matrix(const ComplexMatrix& u, int n_qubits);

/// Pauli coefficients c_m of u.
ComplexVector pauli_coefficients(const ComplexMatrix& u, int n_qubits);

/// Entrywise bound on |chi(u) - chi(v)| for unitaries with average gate
/// fidelity f: sqrt(2 (1 - F_pro)), F_pro = ((d + 1) f - 1) / d.
double chi_deviation_bound(double average_fidelity, int dim);

}  // namespace nvforge
