// The three correlator-measurement procedures: projective two-time
// measurement, ideal negative measurement (CNOT / anti-CNOT runs with
// post-selected halves), and the continuous-in-time velocity measurement.
// Also the finite-shot sampler used for error-bar studies.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lglab/lgi.hpp"
#include "lglab/noise.hpp"
#include "lglab/qcore.hpp"

namespace lglab::protocols {

struct SpinModel {
  double omega = 1.0;  // rad/s; H = omega X / 2, measured by Q = Z

  void validate() const {
    if (!(omega > 0.0)) throw numerics_error("SpinModel requires omega > 0");
  }
};

struct DetectorModel {
  double omega = 1.0;
  double lambda = 0.0;  // dimensionless coupling to the velocity operator

  double big_omega() const { return omega * std::sqrt(1.0 + 4.0 * lambda * lambda); }
  void validate() const {
    if (!(omega > 0.0) || lambda < 0.0) {
      throw numerics_error("DetectorModel requires omega > 0 and lambda >= 0");
    }
  }
};

// Evolution of the primary system between measurement times. The damped
// variant threads the engineered-delay relaxation through both the
// single-qubit and the system-side two-qubit paths.
class IntervalEvolution {
 public:
  virtual ~IntervalEvolution() = default;
  virtual qcore::QubitState advance(const qcore::QubitState& s, double t_from,
                                    double t_to) const = 0;
  virtual qcore::TwoQubitState advance_system(const qcore::TwoQubitState& s, double t_from,
                                              double t_to) const = 0;
};

class UnitaryEvolution final : public IntervalEvolution {
 public:
  explicit UnitaryEvolution(SpinModel model);
  qcore::QubitState advance(const qcore::QubitState& s, double t_from,
                            double t_to) const override;
  qcore::TwoQubitState advance_system(const qcore::TwoQubitState& s, double t_from,
                                      double t_to) const override;

 private:
  SpinModel model_;
};

class DampedEvolution final : public IntervalEvolution {
 public:
  // t_unit is the base measurement interval; the engineered exposure scales
  // as params.delay per t_unit of evolution.
  DampedEvolution(SpinModel model, noise::RelaxationParams params, double t_unit);
  qcore::QubitState advance(const qcore::QubitState& s, double t_from,
                            double t_to) const override;
  qcore::TwoQubitState advance_system(const qcore::TwoQubitState& s, double t_from,
                                      double t_to) const override;

 private:
  SpinModel model_;
  noise::RelaxationParams params_;
  double t_unit_;
};

// <Q_i> = v_z cos(w t_i) + v_y sin(w t_i).
double expectation_q(const qcore::BlochVector& initial, const SpinModel& model, double t_i);

// Two-time probabilities from a projective first measurement:
// p(+,+) = a a', p(+,-) = a (1-a'), p(-,+) = (1-a) a'', p(-,-) = (1-a)(1-a'').
lgi::TwoTimeTable projective_two_time(const qcore::QubitState& initial,
                                      const SpinModel& model, double t_i, double t_j);
lgi::TwoTimeTable projective_two_time(const qcore::QubitState& initial,
                                      const IntervalEvolution& evolution, double t_i,
                                      double t_j);

double correlator_from_probs(const lgi::TwoTimeTable& p);

enum class InmGate { Cnot, AntiCnot };

// Diagonal of the final two-qubit state of one INM circuit run, in the fixed
// system (x) ancilla basis order |00>, |01>, |10>, |11>.
std::vector<double> inm_circuit(const qcore::QubitState& initial, const SpinModel& model,
                                double t_i, double t_j, InmGate gate);
std::vector<double> inm_circuit(const qcore::QubitState& initial,
                                const IntervalEvolution& evolution, double t_i, double t_j,
                                InmGate gate);

// Two-time table assembled from the kept halves: (s_i = +) outcomes from the
// CNOT run, (s_i = -) outcomes from the anti-CNOT run.
lgi::TwoTimeTable inm_two_time(const qcore::QubitState& initial,
                               const IntervalEvolution& evolution, double t_i, double t_j);

double inm_correlator(const qcore::QubitState& initial, const SpinModel& model, double t_i,
                      double t_j);
double inm_correlator(const qcore::QubitState& initial, const IntervalEvolution& evolution,
                      double t_i, double t_j);

enum class CtvmMode { Exact, SmallLambda };

// Probability of the ancilla ending in |1> after coupling for `duration`.
// Exact mode evolves the full pair under the detector propagator and traces
// out the system; SmallLambda uses p(1) ~= 2 lambda^2 (1 - cos(w duration)).
double ctvm_p1(const qcore::QubitState& initial, const DetectorModel& detector,
               double duration, CtvmMode mode = CtvmMode::Exact);

// C = 1 - p(1) / (2 lambda^2). May fall below -1 for out-of-regime inputs;
// the value is reported as-is and flagged, never clamped.
double ctvm_correlator(double p1, double lambda);

inline bool correlator_out_of_regime(double c) { return c < -1.0 - 1e-12 || c > 1.0 + 1e-12; }

struct ShotEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long shots = 0;
  std::uint64_t seed = 0;
};

// Multinomial sampling with a deterministic seeded generator. Estimates are
// empirical frequencies with std_error = sqrt(p(1-p)/n).
std::vector<ShotEstimate> sample_shots(const std::vector<double>& probs, long long n,
                                       std::uint64_t seed);

// Shots per INM circuit run needed for a target correlator standard error,
// propagated through the kept-halves combination.
long long shots_for_correlator_stderr(const lgi::TwoTimeTable& p, double target_stderr);

}  // namespace lglab::protocols
