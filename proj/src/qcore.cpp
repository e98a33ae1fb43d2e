#include "lglab/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lglab::qcore {

namespace {

const cplx kI{0.0, 1.0};

void require_dim(int dim) {
  if (dim != 2 && dim != 4) {
    throw numerics_error("matrix dimension must be 2 or 4, got " + std::to_string(dim));
  }
}

std::vector<double> clamped_diagonal(const Mat& m) {
  std::vector<double> p(static_cast<size_t>(m.dim()));
  double sum = 0.0;
  for (int i = 0; i < m.dim(); ++i) {
    double d = m(i, i).real();
    if (d < -kNumericTol) {
      throw numerics_error("diagonal entry below -1e-10: " + std::to_string(d));
    }
    d = std::clamp(d, 0.0, 1.0);
    p[static_cast<size_t>(i)] = d;
    sum += d;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw numerics_error("diagonal sum deviates from 1 by " + std::to_string(sum - 1.0));
  }
  for (double& d : p) d /= sum;
  return p;
}

void validate_density(const Mat& rho, const char* what) {
  if (!rho.is_finite()) throw numerics_error(std::string(what) + ": non-finite entries");
  if (!rho.is_hermitian(kAlgebraTol)) {
    throw numerics_error(std::string(what) + ": not Hermitian to 1e-12");
  }
  if (std::abs(rho.trace().real() - 1.0) > kAlgebraTol ||
      std::abs(rho.trace().imag()) > kAlgebraTol) {
    throw numerics_error(std::string(what) + ": trace differs from 1");
  }
  const auto eig = rho.hermitian_eigenvalues();
  if (eig.front() < -kNumericTol) {
    throw numerics_error(std::string(what) + ": negative eigenvalue " +
                         std::to_string(eig.front()));
  }
}

}  // namespace

Mat::Mat(int dim) : dim_(dim) {
  require_dim(dim);
  e_.fill(cplx{0.0, 0.0});
}

Mat Mat::identity(int dim) {
  Mat m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  if (dim_ != o.dim_) throw numerics_error("matrix dimension mismatch in +");
  Mat r(dim_);
  for (int i = 0; i < dim_ * dim_; ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  if (dim_ != o.dim_) throw numerics_error("matrix dimension mismatch in -");
  Mat r(dim_);
  for (int i = 0; i < dim_ * dim_; ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

Mat Mat::operator*(const Mat& o) const {
  if (dim_ != o.dim_) throw numerics_error("matrix dimension mismatch in *");
  Mat r(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int k = 0; k < dim_; ++k) {
      const cplx aik = (*this)(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (int j = 0; j < dim_; ++j) r(i, j) += aik * o(k, j);
    }
  }
  return r;
}

Mat Mat::operator*(cplx s) const {
  Mat r(dim_);
  for (int i = 0; i < dim_ * dim_; ++i) r.e_[i] = e_[i] * s;
  return r;
}

Mat Mat::dagger() const {
  Mat r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

cplx Mat::trace() const {
  cplx t{0.0, 0.0};
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double Mat::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < dim_ * dim_; ++i) s += std::norm(e_[i]);
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < dim_ * dim_; ++i) m = std::max(m, std::abs(e_[i]));
  return m;
}

double Mat::operator_norm() const {
  const Mat gram = dagger() * (*this);
  const auto eig = gram.hermitian_eigenvalues();
  return std::sqrt(std::max(0.0, eig.back()));
}

bool Mat::is_finite() const {
  for (int i = 0; i < dim_ * dim_; ++i) {
    if (!std::isfinite(e_[i].real()) || !std::isfinite(e_[i].imag())) return false;
  }
  return true;
}

bool Mat::is_hermitian(double tol) const {
  return ((*this) - dagger()).max_abs() <= tol;
}

bool Mat::is_unitary(double tol) const {
  return ((dagger() * (*this)) - identity(dim_)).max_abs() <= tol;
}

std::vector<double> Mat::hermitian_eigenvalues() const {
  // Cyclic Jacobi for Hermitian matrices. A 2x2 input converges in the
  // first rotation; 4x4 needs only a handful of sweeps at these scales.
  Mat a = *this;
  const int n = dim_;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r < 1e-300) continue;
        const cplx u = apq / r;  // phase of the off-diagonal entry
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- J^dag A J with J(p,p) = J(q,q) = c, J(p,q) = s u,
        // J(q,p) = -s conj(u); this zeroes a(p,q).
        for (int k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - s * std::conj(u) * akq;
          a(k, q) = s * u * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s * u * aqk;
          a(q, k) = s * std::conj(u) * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<size_t>(i)] = a(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

Mat Mat::exp() const {
  // Scale so the Taylor series converges fast, square back afterwards.
  const double norm = frobenius_norm();
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const Mat a = (*this) * cplx{scale, 0.0};
  Mat result = identity(dim_);
  Mat term = identity(dim_);
  for (int k = 1; k <= 24; ++k) {
    term = term * a * cplx{1.0 / k, 0.0};
    result = result + term;
    if (term.max_abs() < 1e-18) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Mat tensor(const Mat& a, const Mat& b) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw numerics_error("tensor product requires two 2x2 factors");
  }
  Mat r(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

const Mat& pauli_x() {
  static const Mat m = [] {
    Mat x(2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    return x;
  }();
  return m;
}

const Mat& pauli_y() {
  static const Mat m = [] {
    Mat y(2);
    y(0, 1) = -kI;
    y(1, 0) = kI;
    return y;
  }();
  return m;
}

const Mat& pauli_z() {
  static const Mat m = [] {
    Mat z(2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return z;
  }();
  return m;
}

const Mat& identity2() {
  static const Mat m = Mat::identity(2);
  return m;
}

QubitState::QubitState(const Mat& rho) : rho_(rho) {
  if (rho.dim() != 2) throw numerics_error("QubitState requires a 2x2 matrix");
  validate_density(rho_, "QubitState");
}

TwoQubitState::TwoQubitState(const Mat& rho) : rho_(rho) {
  if (rho.dim() != 4) throw numerics_error("TwoQubitState requires a 4x4 matrix");
  validate_density(rho_, "TwoQubitState");
}

QubitState density_from_bloch(const BlochVector& v) {
  if (v.norm2() > 1.0 + kAlgebraTol) {
    throw numerics_error("Bloch vector outside the unit ball, |v|^2 = " +
                         std::to_string(v.norm2()));
  }
  Mat rho = (identity2() + pauli_x() * cplx{v.vx, 0.0} + pauli_y() * cplx{v.vy, 0.0} +
             pauli_z() * cplx{v.vz, 0.0}) *
            cplx{0.5, 0.0};
  return QubitState(rho);
}

BlochVector bloch_from_density(const QubitState& s) {
  const Mat& rho = s.matrix();
  BlochVector v;
  v.vx = (pauli_x() * rho).trace().real();
  v.vy = (pauli_y() * rho).trace().real();
  v.vz = (pauli_z() * rho).trace().real();
  return v;
}

QubitState ground_state() { return density_from_bloch({0.0, 0.0, 1.0}); }
QubitState excited_state() { return density_from_bloch({0.0, 0.0, -1.0}); }
QubitState maximally_mixed() { return density_from_bloch({0.0, 0.0, 0.0}); }

Mat rotation_unitary(Axis axis, double angle) {
  if (!std::isfinite(angle)) throw numerics_error("rotation angle must be finite");
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  if (axis == Axis::ZZ) {
    const Mat zz = tensor(pauli_z(), pauli_z());
    return Mat::identity(4) * cplx{c, 0.0} - zz * (kI * s);
  }
  const Mat& p = axis == Axis::X ? pauli_x() : axis == Axis::Y ? pauli_y() : pauli_z();
  return identity2() * cplx{c, 0.0} - p * (kI * s);
}

namespace {

Mat conjugate(const Mat& rho, const Mat& u) {
  if (u.dim() != rho.dim()) throw numerics_error("evolve: dimension mismatch");
  if (!u.is_unitary(kNumericTol)) throw numerics_error("evolve: non-unitary propagator");
  return u * rho * u.dagger();
}

}  // namespace

QubitState evolve(const QubitState& s, const Mat& u) {
  return QubitState(conjugate(s.matrix(), u));
}

TwoQubitState evolve(const TwoQubitState& s, const Mat& u) {
  return TwoQubitState(conjugate(s.matrix(), u));
}

TwoQubitState tensor(const QubitState& system, const QubitState& ancilla) {
  return TwoQubitState(tensor(system.matrix(), ancilla.matrix()));
}

QubitState partial_trace(const TwoQubitState& t, Subsystem keep) {
  const Mat& r = t.matrix();
  Mat out(2);
  if (keep == Subsystem::System) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out(i, j) = r(2 * i, 2 * j) + r(2 * i + 1, 2 * j + 1);
  } else {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out(i, j) = r(i, j) + r(i + 2, j + 2);
  }
  return QubitState(out);
}

Mat spin_propagator(double omega, double t) {
  return rotation_unitary(Axis::X, omega * t);
}

Mat detector_hamiltonian(double omega, double lambda) {
  if (!(omega > 0.0) || lambda < 0.0 || !std::isfinite(omega) || !std::isfinite(lambda)) {
    throw numerics_error("detector_hamiltonian requires omega > 0 and lambda >= 0");
  }
  const Mat xi = tensor(pauli_x(), identity2());
  const Mat yx = tensor(pauli_y(), pauli_x());
  return xi * cplx{omega / 2.0, 0.0} + yx * cplx{lambda * omega, 0.0};
}

Mat detector_propagator(double omega, double lambda, double t) {
  if (!std::isfinite(t)) throw numerics_error("detector_propagator: non-finite time");
  const Mat hd = detector_hamiltonian(omega, lambda);
  const double big_omega = omega * std::sqrt(1.0 + 4.0 * lambda * lambda);
  const double half = big_omega * t / 2.0;
  return Mat::identity(4) * cplx{std::cos(half), 0.0} -
         hd * (kI * (2.0 / big_omega) * std::sin(half));
}

std::vector<double> diagonal_probabilities(const QubitState& s) {
  return clamped_diagonal(s.matrix());
}

std::vector<double> diagonal_probabilities(const TwoQubitState& s) {
  return clamped_diagonal(s.matrix());
}

}  // namespace lglab::qcore
