#pragma once

// Dense complex linear algebra shared by every module.
//
// Units: Hamiltonians passed to matexp() are angular frequencies in rad/us
// (2*pi*MHz); times are in microseconds.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace nvforge {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_square(const Eigen::MatrixBase<Derived>& m) {
  return m.rows() == m.cols() && m.rows() > 0;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::RealScalar tol = kHermitianTolerance) {
  return is_square(m) && max_abs(m - m.adjoint()) <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m,
                typename Derived::RealScalar tol = kUnitaryTolerance) {
  if (!is_square(m)) return false;
  using Plain = typename Derived::PlainObject;
  return max_abs(m.adjoint() * m - Plain::Identity(m.rows(), m.cols())) <= tol;
}

/// Kronecker product a (x) b. The first factor is the most significant index.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (!is_square(a) || !is_square(b)) {
    throw std::invalid_argument("kron: operands must be square");
  }
  const Eigen::Index ra = a.rows();
  const Eigen::Index rb = b.rows();
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(ra * rb, ra * rb);
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ra; ++j) {
      out.block(i * rb, j * rb, rb, rb) = a(i, j) * b;
    }
  }
  return out;
}

/// e^{-i h t} for Hermitian h via eigendecomposition. The result is unitary by
/// construction: V diag(e^{-i lambda t}) V^dagger.
template <typename Derived>
CMatrix<typename Derived::RealScalar> matexp(const Eigen::MatrixBase<Derived>& h,
                                              typename Derived::RealScalar t) {
  using Real = typename Derived::RealScalar;
  const Real scale = std::max<Real>(Real(1), max_abs(h));
  if (!is_hermitian(h, Real(kHermitianTolerance) * scale)) {
    throw std::invalid_argument("matexp: generator is not Hermitian");
  }
  const CMatrix<Real> hc = h.template cast<std::complex<Real>>();
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(hc);
  const auto& v = solver.eigenvectors();
  CVector<Real> phases(hc.rows());
  for (Eigen::Index k = 0; k < hc.rows(); ++k) {
    phases(k) = std::polar(Real(1), -solver.eigenvalues()(k) * t);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

/// e^{a} for an arbitrary square matrix by Taylor scaling and squaring. Slower
/// and not unitary by construction; kept as an independent cross-check for
/// matexp().
template <typename Derived>
CMatrix<typename Derived::RealScalar> expm_scaling_squaring(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  if (!is_square(a)) throw std::invalid_argument("expm_scaling_squaring: square input required");
  CMatrix<Real> x = a.template cast<std::complex<Real>>();
  const Real norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > Real(0.25)) squarings = static_cast<int>(std::ceil(std::log2(norm / Real(0.25))));
  x /= std::pow(Real(2), squarings);
  CMatrix<Real> result = CMatrix<Real>::Identity(x.rows(), x.cols());
  CMatrix<Real> term = result;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / Real(k);
    result += term;
    if (max_abs(term) < std::numeric_limits<Real>::epsilon() * Real(1e-3)) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

/// True iff min_phi max|u - e^{i phi} v| <= tol, with phi taken from tr(v^dagger u).
template <typename DerivedU, typename DerivedV>
bool equal_up_to_global_phase(const Eigen::MatrixBase<DerivedU>& u,
                              const Eigen::MatrixBase<DerivedV>& v,
                              typename DerivedU::RealScalar tol) {
  using Real = typename DerivedU::RealScalar;
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw std::invalid_argument("equal_up_to_global_phase: dimension mismatch");
  }
  const std::complex<Real> overlap = (v.adjoint() * u).trace();
  if (std::abs(overlap) <= tol) return false;
  const std::complex<Real> phase = overlap / std::abs(overlap);
  return max_abs(u - phase * v) <= tol;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

template <typename Real = double>
CMatrix<Real> pauli_i() {
  return CMatrix<Real>::Identity(2, 2);
}

template <typename Real = double>
CMatrix<Real> pauli_x() {
  CMatrix<Real> m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

template <typename Real = double>
CMatrix<Real> pauli_y() {
  const std::complex<Real> i(0, 1);
  CMatrix<Real> m(2, 2);
  m << Real(0), -i, i, Real(0);
  return m;
}

template <typename Real = double>
CMatrix<Real> pauli_z() {
  CMatrix<Real> m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Pauli by index 0..3 = I, X, Y, Z.
template <typename Real = double>
CMatrix<Real> pauli(int index) {
  switch (index) {
    case 0: return pauli_i<Real>();
    case 1: return pauli_x<Real>();
    case 2: return pauli_y<Real>();
    case 3: return pauli_z<Real>();
  }
  throw std::out_of_range("pauli: index must be in 0..3");
}

// Spin-1 operators in the {|+1>, |0>, |-1>} basis.

template <typename Real = double>
CMatrix<Real> spin1_x() {
  const Real s = Real(1) / std::sqrt(Real(2));
  CMatrix<Real> m = CMatrix<Real>::Zero(3, 3);
  m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = s;
  return m;
}

template <typename Real = double>
CMatrix<Real> spin1_y() {
  const std::complex<Real> a(0, -Real(1) / std::sqrt(Real(2)));
  CMatrix<Real> m = CMatrix<Real>::Zero(3, 3);
  m(0, 1) = a;
  m(1, 0) = std::conj(a);
  m(1, 2) = a;
  m(2, 1) = std::conj(a);
  return m;
}

template <typename Real = double>
CMatrix<Real> spin1_z() {
  CMatrix<Real> m = CMatrix<Real>::Zero(3, 3);
  m(0, 0) = 1;
  m(2, 2) = -1;
  return m;
}

enum class BasisKind { kSpin1, kQubitPauli };

template <typename Real = double>
struct OperatorBasis {
  BasisKind kind;
  std::vector<CMatrix<Real>> operators;
};

/// {Sx, Sy, Sz} for a spin-1.
template <typename Real = double>
OperatorBasis<Real> spin1_basis() {
  return {BasisKind::kSpin1, {spin1_x<Real>(), spin1_y<Real>(), spin1_z<Real>()}};
}

/// {I, X, Y, Z}.
template <typename Real = double>
OperatorBasis<Real> pauli_basis() {
  return {BasisKind::kQubitPauli,
          {pauli_i<Real>(), pauli_x<Real>(), pauli_y<Real>(), pauli_z<Real>()}};
}

/// I (x) ... (x) op (x) ... (x) I with op acting on `qubit` (0 = most significant).
template <typename Derived>
CMatrix<typename Derived::RealScalar> embed(const Eigen::MatrixBase<Derived>& op, int qubit,
                                            int n_qubits) {
  using Real = typename Derived::RealScalar;
  if (qubit < 0 || qubit >= n_qubits) throw std::out_of_range("embed: qubit index out of range");
  if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("embed: single-qubit operator required");
  CMatrix<Real> out = CMatrix<Real>::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    if (q == qubit) {
      out = kron(out, op.template cast<std::complex<Real>>());
    } else {
      out = kron(out, pauli_i<Real>());
    }
  }
  return out;
}

/// Product of two single-qubit operators on distinct qubits.
template <typename DerivedA, typename DerivedB>
CMatrix<typename DerivedA::RealScalar> embed_pair(const Eigen::MatrixBase<DerivedA>& a, int qa,
                                                  const Eigen::MatrixBase<DerivedB>& b, int qb,
                                                  int n_qubits) {
  if (qa == qb) throw std::invalid_argument("embed_pair: qubits must differ");
  return embed(a, qa, n_qubits) * embed(b, qb, n_qubits);
}

/// Pauli product with digits in base 4 (most significant digit = qubit 0).
template <typename Real = double>
CMatrix<Real> pauli_product(int index, int n_qubits) {
  CMatrix<Real> out = CMatrix<Real>::Identity(1, 1);
  int divisor = 1;
  for (int q = 1; q < n_qubits; ++q) divisor *= 4;
  for (int q = 0; q < n_qubits; ++q) {
    out = kron(out, pauli<Real>((index / divisor) % 4));
    divisor /= 4;
  }
  return out;
}

inline std::string pauli_label(int index, int n_qubits) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string label(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = n_qubits - 1; q >= 0; --q) {
    label[static_cast<std::size_t>(q)] = kLetters[index % 4];
    index /= 4;
  }
  return label;
}

}  // namespace nvforge
