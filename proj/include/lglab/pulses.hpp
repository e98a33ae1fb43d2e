// Gate-level composition of the named circuit components used by the
// experiments (preparation, CNOT / anti-CNOT, refocused delays and the
// system-detector blocks), a drift-aware composition mode, and an exact
// decomposition verifier.
//
// Sequences act on the system (x) ancilla pair. Elements are applied in list
// order. The text form is line oriented:
//   ROT axis angle target      axis in {X,Y,Z}, target in {system,ancilla,both}
//   ZZ angle
//   DELAY seconds
//   GRAD
// with angles in radians and '#' starting a comment.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lglab/qcore.hpp"

namespace lglab::pulses {

enum class Target { System, Ancilla, Both };

struct SequenceElement {
  enum class Kind { Rotation, ZzEvolution, Delay, Gradient };

  Kind kind = Kind::Rotation;
  qcore::Axis axis = qcore::Axis::X;  // Rotation only
  double angle = 0.0;                 // Rotation and ZzEvolution, radians
  Target target = Target::System;     // Rotation only
  double duration = 0.0;              // Delay only, seconds
  // Gradient only: coherence positions (r, c) to zero, Hermitian partners
  // implied. Empty means every off-diagonal position.
  std::vector<std::pair<int, int>> zeroed;

  static SequenceElement rotation(qcore::Axis axis, double angle, Target target);
  static SequenceElement zz(double angle);
  static SequenceElement delay(double seconds);
  static SequenceElement gradient();
};

using Sequence = std::vector<SequenceElement>;

struct ComponentParams {
  double tau = 0.0;      // delay components: total engineered delay per unit interval
  double a = 1.0;        // delay components: interval multiplier
  // Detector blocks: rotation angles of the system-detector Euler template.
  std::optional<std::array<double, 3>> euler;
};

// Rotation angles quoted for the detector blocks in the source experiment.
inline constexpr std::array<double, 3> kUv1ReferenceAngles = {4.9751, 1.8335, 0.1035};
inline constexpr std::array<double, 3> kUv2ReferenceAngles = {5.2433, 2.1018, 0.1998};

// Names: P, P1, P2, U_c, U_ac, D_atau, U_v1, U_v2.
Sequence compile_component(const std::string& name, const ComponentParams& params = {});

// Euler angles (alpha, beta, gamma) such that the detector-block template
// X~(alpha) YX~(beta) X~(gamma) equals exp(-i H_D t) exactly, where X~ and
// YX~ generate the embedded su(2) spanned by X(x)I, Y(x)X, Z(x)X.
std::array<double, 3> solved_detector_angles(double omega, double lambda, double t);

// Product of the element unitaries. Throws if the sequence contains a
// gradient (that path is a channel, use apply_sequence_ideal).
qcore::Mat sequence_unitary_ideal(const Sequence& seq);

// Applies the sequence as a channel; gradients zero the selected coherences.
qcore::TwoQubitState apply_sequence_ideal(const qcore::TwoQubitState& state,
                                          const Sequence& seq);

qcore::TwoQubitState gradient_channel(const qcore::TwoQubitState& state,
                                      const std::vector<std::pair<int, int>>& zeroed = {});

// Like sequence_unitary_ideal, but every rotation is generated by its control
// Hamiltonian plus the always-on coupling (pi J / 2) Z(x)Z acting for
// pulse_duration. pulse_duration = 0 reproduces the ideal composition.
qcore::Mat sequence_unitary_with_drift(const Sequence& seq, double j_coupling_hz,
                                       double pulse_duration);

// |tr(U_seq^dag U_target)| / dim; 1 exactly when equal up to global phase.
double verify_decomposition(const Sequence& seq, const qcore::Mat& target);
double fidelity(const qcore::Mat& u, const qcore::Mat& target);

Sequence parse_sequence(const std::string& text);
std::string format_sequence(const Sequence& seq);

}  // namespace lglab::pulses
