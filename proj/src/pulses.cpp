#include "lglab/pulses.hpp"

#include <cmath>
#include <sstream>

namespace lglab::pulses {

using qcore::Axis;
using qcore::cplx;
using qcore::Mat;

SequenceElement SequenceElement::rotation(Axis axis, double angle, Target target) {
  if (!std::isfinite(angle)) throw numerics_error("rotation angle must be finite");
  if (axis == Axis::ZZ) throw numerics_error("use zz() for the coupling evolution");
  SequenceElement e;
  e.kind = Kind::Rotation;
  e.axis = axis;
  e.angle = angle;
  e.target = target;
  return e;
}

SequenceElement SequenceElement::zz(double angle) {
  if (!std::isfinite(angle)) throw numerics_error("zz angle must be finite");
  SequenceElement e;
  e.kind = Kind::ZzEvolution;
  e.angle = angle;
  return e;
}

SequenceElement SequenceElement::delay(double seconds) {
  if (!(seconds >= 0.0)) throw numerics_error("delay must be nonnegative");
  SequenceElement e;
  e.kind = Kind::Delay;
  e.duration = seconds;
  return e;
}

SequenceElement SequenceElement::gradient() {
  SequenceElement e;
  e.kind = Kind::Gradient;
  return e;
}

namespace {

Mat single_qubit_rotation(Axis axis, double angle) {
  return qcore::rotation_unitary(axis, angle);
}

Mat element_unitary(const SequenceElement& e) {
  switch (e.kind) {
    case SequenceElement::Kind::Rotation: {
      const Mat u = single_qubit_rotation(e.axis, e.angle);
      switch (e.target) {
        case Target::System:
          return qcore::tensor(u, qcore::identity2());
        case Target::Ancilla:
          return qcore::tensor(qcore::identity2(), u);
        case Target::Both:
        default:
          return qcore::tensor(u, u);
      }
    }
    case SequenceElement::Kind::ZzEvolution:
      return qcore::rotation_unitary(Axis::ZZ, e.angle);
    case SequenceElement::Kind::Delay:
      return Mat::identity(4);
    case SequenceElement::Kind::Gradient:
    default:
      throw numerics_error("gradient elements have no unitary form");
  }
}

const Mat& pauli(Axis axis) {
  switch (axis) {
    case Axis::X:
      return qcore::pauli_x();
    case Axis::Y:
      return qcore::pauli_y();
    case Axis::Z:
    default:
      return qcore::pauli_z();
  }
}

// Generator of a rotation element on the pair, normalized so that
// exp(-i angle G / 2) is the ideal element unitary.
Mat rotation_generator(const SequenceElement& e) {
  const Mat& p = pauli(e.axis);
  switch (e.target) {
    case Target::System:
      return qcore::tensor(p, qcore::identity2());
    case Target::Ancilla:
      return qcore::tensor(qcore::identity2(), p);
    case Target::Both:
    default:
      return qcore::tensor(p, qcore::identity2()) + qcore::tensor(qcore::identity2(), p);
  }
}

Sequence yx_block(double angle) {
  // exp(-i angle (Y x X) / 2) via local conjugation of the ZZ evolution.
  Sequence s;
  s.push_back(SequenceElement::rotation(Axis::X, M_PI / 2.0, Target::System));
  s.push_back(SequenceElement::rotation(Axis::Y, -M_PI / 2.0, Target::Ancilla));
  s.push_back(SequenceElement::zz(angle));
  s.push_back(SequenceElement::rotation(Axis::X, -M_PI / 2.0, Target::System));
  s.push_back(SequenceElement::rotation(Axis::Y, M_PI / 2.0, Target::Ancilla));
  return s;
}

void append(Sequence& dst, const Sequence& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

Sequence pps_sequence() {
  // Spatial-averaging preparation: halve the ancilla polarization, crush
  // transverse terms, then fold the system polarization through the coupling
  // so the surviving deviation matches the |00> pattern.
  Sequence s;
  s.push_back(SequenceElement::rotation(Axis::X, M_PI / 3.0, Target::Ancilla));
  s.push_back(SequenceElement::gradient());
  s.push_back(SequenceElement::rotation(Axis::X, M_PI / 4.0, Target::System));
  s.push_back(SequenceElement::zz(M_PI / 2.0));
  s.push_back(SequenceElement::rotation(Axis::Y, -M_PI / 4.0, Target::System));
  s.push_back(SequenceElement::gradient());
  return s;
}

Sequence cnot_sequence() {
  // Hadamard on the ancilla, controlled-Z core, Hadamard back.
  Sequence s;
  s.push_back(SequenceElement::rotation(Axis::Z, M_PI, Target::Ancilla));
  s.push_back(SequenceElement::rotation(Axis::Y, M_PI / 2.0, Target::Ancilla));
  s.push_back(SequenceElement::rotation(Axis::Z, -M_PI / 2.0, Target::System));
  s.push_back(SequenceElement::rotation(Axis::Z, -M_PI / 2.0, Target::Ancilla));
  s.push_back(SequenceElement::zz(M_PI / 2.0));
  s.push_back(SequenceElement::rotation(Axis::Z, M_PI, Target::Ancilla));
  s.push_back(SequenceElement::rotation(Axis::Y, M_PI / 2.0, Target::Ancilla));
  return s;
}

Sequence delay_sequence(double tau, double a) {
  // Two half waits separated by a pi pulse; the coupling acquired in the
  // first half is unwound in the second, and the trailing pi pulse restores
  // the frame.
  Sequence s;
  s.push_back(SequenceElement::delay(a * tau / 2.0));
  s.push_back(SequenceElement::rotation(Axis::X, M_PI, Target::System));
  s.push_back(SequenceElement::delay(a * tau / 2.0));
  s.push_back(SequenceElement::rotation(Axis::X, M_PI, Target::System));
  return s;
}

Sequence detector_sequence(const std::array<double, 3>& euler) {
  // X~(alpha) YX~(beta) X~(gamma) in the embedded su(2); the gamma-side
  // rotation is applied first.
  Sequence s;
  s.push_back(SequenceElement::rotation(Axis::X, euler[2], Target::System));
  append(s, yx_block(euler[1]));
  s.push_back(SequenceElement::rotation(Axis::X, euler[0], Target::System));
  return s;
}

}  // namespace

Sequence compile_component(const std::string& name, const ComponentParams& params) {
  if (name == "P") return pps_sequence();
  if (name == "P1") {
    Sequence s = pps_sequence();
    s.push_back(SequenceElement::rotation(Axis::X, -M_PI / 4.0, Target::System));
    return s;
  }
  if (name == "P2") {
    Sequence s = pps_sequence();
    s.push_back(SequenceElement::rotation(Axis::Y, 2.0 * M_PI / 5.0, Target::System));
    return s;
  }
  if (name == "U_c") return cnot_sequence();
  if (name == "U_ac") {
    Sequence s;
    s.push_back(SequenceElement::rotation(Axis::X, M_PI, Target::System));
    append(s, cnot_sequence());
    s.push_back(SequenceElement::rotation(Axis::X, M_PI, Target::System));
    return s;
  }
  if (name == "D_atau") return delay_sequence(params.tau, params.a);
  if (name == "U_v1") {
    return detector_sequence(params.euler.value_or(kUv1ReferenceAngles));
  }
  if (name == "U_v2") {
    return detector_sequence(params.euler.value_or(kUv2ReferenceAngles));
  }
  throw config_error("unknown component name: " + name);
}

std::array<double, 3> solved_detector_angles(double omega, double lambda, double t) {
  // exp(-i H_D t) is a rotation by Omega t about an axis in the 1-2 plane of
  // the embedded su(2), tilted by eta = atan(2 lambda) from the X(x)I axis.
  const double big = omega * std::sqrt(1.0 + 4.0 * lambda * lambda);
  const double eta = std::atan(2.0 * lambda);
  const double half = big * t / 2.0;
  const double beta = 2.0 * std::asin(std::sin(half) * std::sin(eta));
  const double ac = std::atan2(std::sin(half) * std::cos(eta), std::cos(half));
  return {ac, beta, ac};
}

qcore::Mat sequence_unitary_ideal(const Sequence& seq) {
  Mat u = Mat::identity(4);
  for (const SequenceElement& e : seq) {
    u = element_unitary(e) * u;
  }
  return u;
}

qcore::TwoQubitState apply_sequence_ideal(const qcore::TwoQubitState& state,
                                          const Sequence& seq) {
  qcore::TwoQubitState s = state;
  for (const SequenceElement& e : seq) {
    if (e.kind == SequenceElement::Kind::Gradient) {
      s = gradient_channel(s, e.zeroed);
    } else {
      s = qcore::evolve(s, element_unitary(e));
    }
  }
  return s;
}

qcore::TwoQubitState gradient_channel(const qcore::TwoQubitState& state,
                                      const std::vector<std::pair<int, int>>& zeroed) {
  Mat rho = state.matrix();
  if (zeroed.empty()) {
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        if (r != c) rho(r, c) = cplx{0.0, 0.0};
      }
    }
  } else {
    for (const auto& [r, c] : zeroed) {
      if (r < 0 || r > 3 || c < 0 || c > 3 || r == c) {
        throw numerics_error("gradient mask positions must be off-diagonal");
      }
      rho(r, c) = cplx{0.0, 0.0};
      rho(c, r) = cplx{0.0, 0.0};
    }
  }
  return qcore::TwoQubitState(rho);
}

qcore::Mat sequence_unitary_with_drift(const Sequence& seq, double j_coupling_hz,
                                       double pulse_duration) {
  if (pulse_duration < 0.0) throw numerics_error("pulse_duration must be nonnegative");
  const Mat zz = qcore::tensor(qcore::pauli_z(), qcore::pauli_z());
  const cplx minus_i{0.0, -1.0};

  Mat u = Mat::identity(4);
  for (const SequenceElement& e : seq) {
    Mat step = Mat::identity(4);
    if (e.kind == SequenceElement::Kind::Rotation && pulse_duration > 0.0) {
      // H = (angle / duration) G / 2 + (pi J / 2) ZZ over the pulse window.
      const Mat h = rotation_generator(e) * cplx{e.angle / (2.0 * pulse_duration), 0.0} +
                    zz * cplx{M_PI * j_coupling_hz / 2.0, 0.0};
      step = (h * (minus_i * pulse_duration)).exp();
    } else if (e.kind == SequenceElement::Kind::Gradient) {
      throw numerics_error("drift composition is unitary; remove gradient elements");
    } else {
      step = element_unitary(e);
    }
    u = step * u;
  }
  return u;
}

double fidelity(const Mat& u, const Mat& target) {
  if (u.dim() != target.dim()) throw numerics_error("fidelity: dimension mismatch");
  return std::abs((u.dagger() * target).trace()) / static_cast<double>(u.dim());
}

double verify_decomposition(const Sequence& seq, const Mat& target) {
  if (!target.is_unitary(qcore::kNumericTol)) {
    throw numerics_error("verify_decomposition: target is not unitary");
  }
  return fidelity(sequence_unitary_ideal(seq), target);
}

namespace {

Target parse_target(const std::string& word, int line) {
  if (word == "system") return Target::System;
  if (word == "ancilla") return Target::Ancilla;
  if (word == "both") return Target::Both;
  throw config_error("line " + std::to_string(line) + ": unknown target '" + word + "'");
}

Axis parse_axis(const std::string& word, int line) {
  if (word == "X") return Axis::X;
  if (word == "Y") return Axis::Y;
  if (word == "Z") return Axis::Z;
  throw config_error("line " + std::to_string(line) + ": unknown axis '" + word + "'");
}

const char* target_name(Target t) {
  switch (t) {
    case Target::System:
      return "system";
    case Target::Ancilla:
      return "ancilla";
    case Target::Both:
    default:
      return "both";
  }
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X:
      return "X";
    case Axis::Y:
      return "Y";
    case Axis::Z:
    default:
      return "Z";
  }
}

}  // namespace

Sequence parse_sequence(const std::string& text) {
  Sequence seq;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string op;
    if (!(ls >> op)) continue;
    if (op == "ROT") {
      std::string axis, target;
      double angle = 0.0;
      if (!(ls >> axis >> angle >> target)) {
        throw config_error("line " + std::to_string(line) + ": ROT axis angle target");
      }
      seq.push_back(
          SequenceElement::rotation(parse_axis(axis, line), angle, parse_target(target, line)));
    } else if (op == "ZZ") {
      double angle = 0.0;
      if (!(ls >> angle)) throw config_error("line " + std::to_string(line) + ": ZZ angle");
      seq.push_back(SequenceElement::zz(angle));
    } else if (op == "DELAY") {
      double seconds = 0.0;
      if (!(ls >> seconds)) {
        throw config_error("line " + std::to_string(line) + ": DELAY seconds");
      }
      seq.push_back(SequenceElement::delay(seconds));
    } else if (op == "GRAD") {
      seq.push_back(SequenceElement::gradient());
    } else {
      throw config_error("line " + std::to_string(line) + ": unknown element '" + op + "'");
    }
    std::string rest;
    if (ls >> rest) {
      throw config_error("line " + std::to_string(line) + ": trailing input '" + rest + "'");
    }
  }
  return seq;
}

std::string format_sequence(const Sequence& seq) {
  std::ostringstream out;
  out.precision(17);
  for (const SequenceElement& e : seq) {
    switch (e.kind) {
      case SequenceElement::Kind::Rotation:
        out << "ROT " << axis_name(e.axis) << ' ' << e.angle << ' ' << target_name(e.target)
            << '\n';
        break;
      case SequenceElement::Kind::ZzEvolution:
        out << "ZZ " << e.angle << '\n';
        break;
      case SequenceElement::Kind::Delay:
        out << "DELAY " << e.duration << '\n';
        break;
      case SequenceElement::Kind::Gradient:
        out << "GRAD\n";
        break;
    }
  }
  return out.str();
}

}  // namespace lglab::pulses
