// Relaxation channels for the engineered inter-measurement delays, and the
// calibration of an effective per-interval exposure against target moments.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lglab/qcore.hpp"

namespace lglab::noise {

// T1/T2 relaxation with an engineered delay per measurement interval.
//
// equilibrium_z selects the longitudinal fixed point: +1 relaxes toward the
// ground state, 0 toward the unpolarized state (the behaviour of a
// pseudo-pure deviation on the observable scale). ancilla_relaxation extends
// the channel to the ancilla during two-qubit segments.
struct RelaxationParams {
  double t1 = 1.0;
  double t2 = 1.0;
  double delay = 0.0;
  double equilibrium_z = 1.0;
  bool ancilla_relaxation = false;

  void validate() const;
};

// Kraus operators of the combined dephasing + amplitude-damping channel for
// the given exposure. Transverse components scale by exp(-d/T2), the
// longitudinal component relaxes toward equilibrium_z with rate 1/T1.
std::vector<qcore::Mat> relaxation_kraus(const RelaxationParams& params, double duration);

qcore::QubitState relaxation_channel(const qcore::QubitState& state,
                                     const RelaxationParams& params, double duration);

// Same channel acting on the system factor of a pair (and on the ancilla
// factor too when params.ancilla_relaxation is set).
qcore::TwoQubitState relaxation_channel_system(const qcore::TwoQubitState& state,
                                               const RelaxationParams& params,
                                               double duration);

// One evolution segment of the delayed experiments: relaxation for
// steps * params.delay followed by the rotation X(steps * omega_t).
// steps may be fractional; steps = 0 is the identity.
qcore::QubitState delayed_interval_evolution(const qcore::QubitState& state, double omega_t,
                                             const RelaxationParams& params, double steps);

struct CalibratedDamping {
  double gamma_eff = 1.0;   // per-interval transverse factor exp(-delay_eff/T2)
  double delay_eff = 0.0;   // fitted effective exposure per interval, seconds
  std::vector<std::pair<std::string, double>> residuals;  // per-target fit error
};

// Optional targets for the six moments, in (q1, q2, q3, c12, c23, c13) order.
using MomentTargets = std::array<std::optional<double>, 6>;

// Least-squares fit of the effective per-interval exposure so that the
// delayed-evolution closed forms
//   <Q_i> = v_y g2^m sin(m w t) + v_z g1^m cos(m w t)
//   C_ij  = g1^(m_j - m_i) cos((m_j - m_i) w t)
// with g2 = exp(-d/T2), g1 = exp(-d/T1) match the targets. The longitudinal
// fixed point of the fitted channel is the unpolarized state.
CalibratedDamping calibrate_damping(const MomentTargets& targets,
                                    const qcore::BlochVector& initial, double omega_t,
                                    const std::array<double, 3>& times,
                                    const RelaxationParams& base);

// Closed-form predictions used by the calibration, exposed for cross-checks.
double predicted_expectation(const qcore::BlochVector& initial, double omega_t,
                             double steps, const RelaxationParams& params);
double predicted_correlator(double omega_t, double step_gap, const RelaxationParams& params);

}  // namespace lglab::noise
