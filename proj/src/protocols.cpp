#include "lglab/protocols.hpp"

#include <cmath>
#include <random>

namespace lglab::protocols {

using qcore::cplx;
using qcore::Mat;
using qcore::QubitState;
using qcore::TwoQubitState;

namespace {

void require_times(double t_i, double t_j) {
  if (t_i < 0.0 || t_j < t_i) {
    throw numerics_error("measurement times must satisfy 0 <= t_i <= t_j");
  }
}

// CNOT with the system as control: ancilla flips when the system is |1>.
const Mat& cnot_matrix() {
  static const Mat m = [] {
    Mat c(4);
    c(0, 0) = 1.0;
    c(1, 1) = 1.0;
    c(2, 3) = 1.0;
    c(3, 2) = 1.0;
    return c;
  }();
  return m;
}

// Anti-CNOT: ancilla flips when the system is |0>.
const Mat& anti_cnot_matrix() {
  static const Mat m = [] {
    Mat c(4);
    c(0, 1) = 1.0;
    c(1, 0) = 1.0;
    c(2, 2) = 1.0;
    c(3, 3) = 1.0;
    return c;
  }();
  return m;
}

}  // namespace

UnitaryEvolution::UnitaryEvolution(SpinModel model) : model_(model) { model_.validate(); }

QubitState UnitaryEvolution::advance(const QubitState& s, double t_from, double t_to) const {
  return qcore::evolve(s, qcore::spin_propagator(model_.omega, t_to - t_from));
}

TwoQubitState UnitaryEvolution::advance_system(const TwoQubitState& s, double t_from,
                                               double t_to) const {
  const Mat u = qcore::tensor(qcore::spin_propagator(model_.omega, t_to - t_from),
                              qcore::identity2());
  return qcore::evolve(s, u);
}

DampedEvolution::DampedEvolution(SpinModel model, noise::RelaxationParams params,
                                 double t_unit)
    : model_(model), params_(params), t_unit_(t_unit) {
  model_.validate();
  params_.validate();
  if (!(t_unit > 0.0)) throw numerics_error("DampedEvolution requires t_unit > 0");
}

QubitState DampedEvolution::advance(const QubitState& s, double t_from, double t_to) const {
  const double steps = (t_to - t_from) / t_unit_;
  return noise::delayed_interval_evolution(s, model_.omega * t_unit_, params_, steps);
}

TwoQubitState DampedEvolution::advance_system(const TwoQubitState& s, double t_from,
                                              double t_to) const {
  const double steps = (t_to - t_from) / t_unit_;
  if (steps < 0.0) throw numerics_error("advance_system: negative interval");
  if (steps == 0.0) return s;
  const TwoQubitState relaxed =
      noise::relaxation_channel_system(s, params_, steps * params_.delay);
  const Mat u = qcore::tensor(qcore::spin_propagator(model_.omega, t_to - t_from),
                              qcore::identity2());
  return qcore::evolve(relaxed, u);
}

double expectation_q(const qcore::BlochVector& initial, const SpinModel& model, double t_i) {
  model.validate();
  return initial.vz * std::cos(model.omega * t_i) + initial.vy * std::sin(model.omega * t_i);
}

lgi::TwoTimeTable projective_two_time(const QubitState& initial,
                                      const IntervalEvolution& evolution, double t_i,
                                      double t_j) {
  require_times(t_i, t_j);
  const QubitState at_ti = evolution.advance(initial, 0.0, t_i);
  const double a = at_ti.a();
  const double a1 = evolution.advance(qcore::ground_state(), t_i, t_j).a();
  const double a2 = evolution.advance(qcore::excited_state(), t_i, t_j).a();
  lgi::TwoTimeTable p;
  p.pp = a * a1;
  p.pm = a * (1.0 - a1);
  p.mp = (1.0 - a) * a2;
  p.mm = (1.0 - a) * (1.0 - a2);
  return p;
}

lgi::TwoTimeTable projective_two_time(const QubitState& initial, const SpinModel& model,
                                      double t_i, double t_j) {
  return projective_two_time(initial, UnitaryEvolution(model), t_i, t_j);
}

double correlator_from_probs(const lgi::TwoTimeTable& p) { return p.correlator(); }

std::vector<double> inm_circuit(const QubitState& initial,
                                const IntervalEvolution& evolution, double t_i, double t_j,
                                InmGate gate) {
  require_times(t_i, t_j);
  const QubitState at_ti = evolution.advance(initial, 0.0, t_i);
  TwoQubitState pair = qcore::tensor(at_ti, qcore::ground_state());
  pair = qcore::evolve(pair, gate == InmGate::Cnot ? cnot_matrix() : anti_cnot_matrix());
  pair = evolution.advance_system(pair, t_i, t_j);
  return qcore::diagonal_probabilities(pair);
}

std::vector<double> inm_circuit(const QubitState& initial, const SpinModel& model,
                                double t_i, double t_j, InmGate gate) {
  return inm_circuit(initial, UnitaryEvolution(model), t_i, t_j, gate);
}

lgi::TwoTimeTable inm_two_time(const QubitState& initial,
                               const IntervalEvolution& evolution, double t_i, double t_j) {
  // Basis order is |system, ancilla>. After a CNOT the ancilla records
  // s_i = - as |1>, so the kept (s_i = +) outcomes sit at ancilla |0>:
  // indices 0 (s_j = +) and 2 (s_j = -). After an anti-CNOT the ancilla
  // records s_i = + as |1>, so the kept (s_i = -) outcomes are again the
  // ancilla-|0> diagonal entries.
  const auto cnot = inm_circuit(initial, evolution, t_i, t_j, InmGate::Cnot);
  const auto anti = inm_circuit(initial, evolution, t_i, t_j, InmGate::AntiCnot);
  lgi::TwoTimeTable p;
  p.pp = cnot[0];
  p.pm = cnot[2];
  p.mp = anti[0];
  p.mm = anti[2];
  return p;
}

double inm_correlator(const QubitState& initial, const IntervalEvolution& evolution,
                      double t_i, double t_j) {
  return inm_two_time(initial, evolution, t_i, t_j).correlator();
}

double inm_correlator(const QubitState& initial, const SpinModel& model, double t_i,
                      double t_j) {
  return inm_correlator(initial, UnitaryEvolution(model), t_i, t_j);
}

double ctvm_p1(const QubitState& initial, const DetectorModel& detector, double duration,
               CtvmMode mode) {
  detector.validate();
  if (duration < 0.0) throw numerics_error("ctvm_p1: duration must be nonnegative");
  if (mode == CtvmMode::SmallLambda) {
    return 2.0 * detector.lambda * detector.lambda *
           (1.0 - std::cos(detector.omega * duration));
  }
  const Mat u = qcore::detector_propagator(detector.omega, detector.lambda, duration);
  const TwoQubitState pair = qcore::tensor(initial, qcore::ground_state());
  const QubitState ancilla =
      qcore::partial_trace(qcore::evolve(pair, u), qcore::Subsystem::Ancilla);
  return qcore::diagonal_probabilities(ancilla)[1];
}

double ctvm_correlator(double p1, double lambda) {
  if (!(lambda > 0.0)) {
    throw numerics_error("ctvm_correlator requires lambda > 0");
  }
  if (p1 < 0.0 || p1 > 1.0) throw numerics_error("ctvm_correlator: p1 outside [0, 1]");
  return 1.0 - p1 / (2.0 * lambda * lambda);
}

std::vector<ShotEstimate> sample_shots(const std::vector<double>& probs, long long n,
                                       std::uint64_t seed) {
  if (n < 1) throw numerics_error("sample_shots requires n >= 1");
  if (probs.empty()) throw numerics_error("sample_shots: empty probability vector");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-12) throw numerics_error("sample_shots: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw numerics_error("sample_shots: probabilities must sum to 1");
  }

  std::vector<double> cumulative(probs.size());
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += std::max(probs[i], 0.0) / sum;
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;

  std::mt19937_64 eng(seed);
  std::vector<long long> counts(probs.size(), 0);
  for (long long s = 0; s < n; ++s) {
    // 53-bit uniform in [0, 1); avoids distribution objects so that the
    // stream is identical across standard library implementations.
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    size_t k = 0;
    while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
    ++counts[k];
  }

  std::vector<ShotEstimate> out(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) {
    const double mean = static_cast<double>(counts[i]) / static_cast<double>(n);
    out[i].mean = mean;
    out[i].std_error = std::sqrt(std::max(mean * (1.0 - mean), 0.0) / static_cast<double>(n));
    out[i].shots = n;
    out[i].seed = seed;
  }
  return out;
}

long long shots_for_correlator_stderr(const lgi::TwoTimeTable& p, double target_stderr) {
  if (!(target_stderr > 0.0)) {
    throw numerics_error("shots_for_correlator_stderr: target must be positive");
  }
  // C = (pp - pm) + (-mp + mm), the two parentheses coming from independent
  // n-shot runs. Var per run follows from the multinomial covariance.
  const double kept_plus = p.pp + p.pm;
  const double kept_minus = p.mp + p.mm;
  const double var_plus = kept_plus - (p.pp - p.pm) * (p.pp - p.pm);
  const double var_minus = kept_minus - (p.mm - p.mp) * (p.mm - p.mp);
  const double total = var_plus + var_minus;
  return static_cast<long long>(std::ceil(total / (target_stderr * target_stderr)));
}

}  // namespace lglab::protocols
