// Dense complex linear algebra for one and two qubits: states, rotations,
// propagators, tensor structure and measurement diagonals.
//
// Everything here is a value type and every function is pure; there is no
// shared mutable state anywhere in this module.

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "lglab/errors.hpp"

namespace lglab::qcore {

using cplx = std::complex<double>;

// Tolerance for exact algebraic identities (unitarity, Hermiticity, traces).
inline constexpr double kAlgebraTol = 1e-12;
// Tolerance for compounded floating-point numerics.
inline constexpr double kNumericTol = 1e-10;

// Square complex matrix of dimension 2 or 4.
class Mat {
 public:
  Mat() : dim_(2) { e_.fill(cplx{0.0, 0.0}); }
  explicit Mat(int dim);

  static Mat identity(int dim);
  static Mat zero(int dim) { return Mat(dim); }

  int dim() const { return dim_; }

  cplx& operator()(int r, int c) { return e_[static_cast<size_t>(r) * dim_ + c]; }
  const cplx& operator()(int r, int c) const {
    return e_[static_cast<size_t>(r) * dim_ + c];
  }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat operator*(cplx s) const;
  friend Mat operator*(cplx s, const Mat& m) { return m * s; }

  Mat dagger() const;
  cplx trace() const;

  double frobenius_norm() const;
  double max_abs() const;
  // Spectral norm, computed from the eigenvalues of A^dag A.
  double operator_norm() const;

  bool is_finite() const;
  bool is_hermitian(double tol = kAlgebraTol) const;
  bool is_unitary(double tol = kAlgebraTol) const;

  // Eigenvalues of a Hermitian matrix, ascending (cyclic Jacobi sweeps).
  std::vector<double> hermitian_eigenvalues() const;

  // Scaling-and-squaring Taylor exponential, exp(this).
  Mat exp() const;

 private:
  int dim_;
  std::array<cplx, 16> e_;
};

Mat tensor(const Mat& a, const Mat& b);

// Pauli matrices and 2x2 identity.
const Mat& pauli_x();
const Mat& pauli_y();
const Mat& pauli_z();
const Mat& identity2();

struct BlochVector {
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;

  double norm2() const { return vx * vx + vy * vy + vz * vz; }
};

// Density matrix of a single qubit; Hermitian, unit trace, PSD
// (eigenvalue floor -1e-10) are enforced on construction.
class QubitState {
 public:
  explicit QubitState(const Mat& rho);

  const Mat& matrix() const { return rho_; }

  // Ground-state population, rho(0,0).
  double a() const { return rho_(0, 0).real(); }
  cplx b() const { return rho_(0, 1); }

  double expect_z() const { return 2.0 * a() - 1.0; }

 private:
  Mat rho_;
};

// Density matrix of the system-ancilla pair. Tensor ordering is fixed as
// system (first factor) x ancilla (second factor).
class TwoQubitState {
 public:
  explicit TwoQubitState(const Mat& rho);

  const Mat& matrix() const { return rho_; }

 private:
  Mat rho_;
};

enum class Axis { X, Y, Z, ZZ };
enum class Subsystem { System, Ancilla };

// rho = (I + vx X + vy Y + vz Z) / 2. Rejects vectors outside the unit ball.
QubitState density_from_bloch(const BlochVector& v);
BlochVector bloch_from_density(const QubitState& s);

QubitState ground_state();   // |0><0|
QubitState excited_state();  // |1><1|
QubitState maximally_mixed();

// X(n) = exp(-i X n / 2) and likewise for Y, Z; ZZ(n) = exp(-i ZZ n / 2)
// acting on the pair (dimension 4).
Mat rotation_unitary(Axis axis, double angle);

QubitState evolve(const QubitState& s, const Mat& u);
TwoQubitState evolve(const TwoQubitState& s, const Mat& u);

TwoQubitState tensor(const QubitState& system, const QubitState& ancilla);
QubitState partial_trace(const TwoQubitState& t, Subsystem keep);

// Free propagator exp(-i H t) for H = omega X / 2.
Mat spin_propagator(double omega, double t);

// System-detector Hamiltonian H_D = (omega/2) X (x) I + lambda omega Y (x) X.
Mat detector_hamiltonian(double omega, double lambda);

// Closed-form exp(-i H_D t) = cos(Omega t/2) I - (2i/Omega) sin(Omega t/2) H_D
// with Omega = omega sqrt(1 + 4 lambda^2).
Mat detector_propagator(double omega, double lambda, double t);

// Clamped diagonal of a density matrix. Entries below zero by at most 1e-10
// are clamped; a diagonal sum off from 1 by more than 1e-8 is an error.
std::vector<double> diagonal_probabilities(const QubitState& s);
std::vector<double> diagonal_probabilities(const TwoQubitState& s);

}  // namespace lglab::qcore
