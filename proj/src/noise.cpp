#include "lglab/noise.hpp"

#include <cmath>

namespace lglab::noise {

using qcore::cplx;
using qcore::Mat;

void RelaxationParams::validate() const {
  if (!(t1 > 0.0) || !(t2 > 0.0)) {
    throw numerics_error("relaxation times must be positive");
  }
  if (t2 > 2.0 * t1 + 1e-12) {
    throw numerics_error("T2 must not exceed 2*T1");
  }
  if (delay < 0.0) throw numerics_error("delay must be nonnegative");
  if (std::abs(equilibrium_z) > 1.0 + 1e-12) {
    throw numerics_error("equilibrium_z must lie in [-1, 1]");
  }
}

std::vector<Mat> relaxation_kraus(const RelaxationParams& params, double duration) {
  params.validate();
  if (duration < 0.0) throw numerics_error("relaxation duration must be nonnegative");

  // Generalized amplitude damping toward equilibrium_z, then pure dephasing
  // topping the transverse decay up to exp(-d/T2).
  const double gamma = 1.0 - std::exp(-duration / params.t1);
  const double p = 0.5 * (1.0 + params.equilibrium_z);
  const double extra = std::exp(-duration * (1.0 / params.t2 - 0.5 / params.t1));

  const double sp = std::sqrt(p);
  const double sq = std::sqrt(1.0 - p);
  const double sg = std::sqrt(gamma);
  const double skeep = std::sqrt(1.0 - gamma);

  std::vector<Mat> ad;
  {
    Mat k(2);
    k(0, 0) = sp;
    k(1, 1) = sp * skeep;
    ad.push_back(k);
  }
  if (gamma > 0.0 && p > 0.0) {
    Mat k(2);
    k(0, 1) = sp * sg;
    ad.push_back(k);
  }
  {
    Mat k(2);
    k(0, 0) = sq * skeep;
    k(1, 1) = sq;
    ad.push_back(k);
  }
  if (gamma > 0.0 && p < 1.0) {
    Mat k(2);
    k(1, 0) = sq * sg;
    ad.push_back(k);
  }

  const double f = std::min(extra, 1.0);
  const double d0 = std::sqrt(0.5 * (1.0 + f));
  const double d1 = std::sqrt(0.5 * (1.0 - f));

  std::vector<Mat> out;
  out.reserve(ad.size() * 2);
  for (const Mat& k : ad) {
    out.push_back(k * cplx{d0, 0.0});
    if (d1 > 0.0) out.push_back(qcore::pauli_z() * k * cplx{d1, 0.0});
  }
  return out;
}

namespace {

Mat apply_kraus(const Mat& rho, const std::vector<Mat>& ks) {
  Mat out(rho.dim());
  for (const Mat& k : ks) out = out + k * rho * k.dagger();
  return out;
}

std::vector<Mat> lift_system(const std::vector<Mat>& ks) {
  std::vector<Mat> out;
  out.reserve(ks.size());
  for (const Mat& k : ks) out.push_back(qcore::tensor(k, qcore::identity2()));
  return out;
}

std::vector<Mat> lift_ancilla(const std::vector<Mat>& ks) {
  std::vector<Mat> out;
  out.reserve(ks.size());
  for (const Mat& k : ks) out.push_back(qcore::tensor(qcore::identity2(), k));
  return out;
}

}  // namespace

qcore::QubitState relaxation_channel(const qcore::QubitState& state,
                                     const RelaxationParams& params, double duration) {
  if (duration == 0.0) return state;
  return qcore::QubitState(apply_kraus(state.matrix(), relaxation_kraus(params, duration)));
}

qcore::TwoQubitState relaxation_channel_system(const qcore::TwoQubitState& state,
                                               const RelaxationParams& params,
                                               double duration) {
  if (duration == 0.0) return state;
  const auto ks = relaxation_kraus(params, duration);
  Mat rho = apply_kraus(state.matrix(), lift_system(ks));
  if (params.ancilla_relaxation) rho = apply_kraus(rho, lift_ancilla(ks));
  return qcore::TwoQubitState(rho);
}

qcore::QubitState delayed_interval_evolution(const qcore::QubitState& state, double omega_t,
                                             const RelaxationParams& params, double steps) {
  if (steps < 0.0) throw numerics_error("delayed_interval_evolution: steps must be >= 0");
  if (steps == 0.0) return state;
  const qcore::QubitState relaxed = relaxation_channel(state, params, steps * params.delay);
  return qcore::evolve(relaxed, qcore::rotation_unitary(qcore::Axis::X, steps * omega_t));
}

double predicted_expectation(const qcore::BlochVector& initial, double omega_t,
                             double steps, const RelaxationParams& params) {
  const double d = steps * params.delay;
  const double g2 = std::exp(-d / params.t2);
  const double g1 = std::exp(-d / params.t1);
  return initial.vy * g2 * std::sin(steps * omega_t) +
         initial.vz * g1 * std::cos(steps * omega_t);
}

double predicted_correlator(double omega_t, double step_gap, const RelaxationParams& params) {
  const double g1 = std::exp(-step_gap * params.delay / params.t1);
  return g1 * std::cos(step_gap * omega_t);
}

namespace {

double calibration_loss(double d, const MomentTargets& targets,
                        const qcore::BlochVector& initial, double omega_t,
                        const std::array<double, 3>& times, const RelaxationParams& base) {
  RelaxationParams p = base;
  p.delay = d;
  p.equilibrium_z = 0.0;
  const std::array<double, 3> gaps = {times[1] - times[0], times[2] - times[1],
                                      times[2] - times[0]};
  double loss = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (targets[i]) {
      const double pred = predicted_expectation(initial, omega_t, times[i], p);
      loss += (pred - *targets[i]) * (pred - *targets[i]);
    }
  }
  for (int i = 0; i < 3; ++i) {
    if (targets[3 + i]) {
      const double pred = predicted_correlator(omega_t, gaps[i], p);
      loss += (pred - *targets[3 + i]) * (pred - *targets[3 + i]);
    }
  }
  return loss;
}

}  // namespace

CalibratedDamping calibrate_damping(const MomentTargets& targets,
                                    const qcore::BlochVector& initial, double omega_t,
                                    const std::array<double, 3>& times,
                                    const RelaxationParams& base) {
  base.validate();
  bool any = false;
  for (const auto& t : targets) any = any || t.has_value();
  if (!any) throw config_error("calibrate_damping: empty target set");

  // Golden-section search on the effective exposure per interval.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 5.0 * base.t2;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = calibration_loss(x1, targets, initial, omega_t, times, base);
  double f2 = calibration_loss(x2, targets, initial, omega_t, times, base);
  for (int it = 0; it < 300 && hi - lo > 1e-13; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = calibration_loss(x1, targets, initial, omega_t, times, base);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = calibration_loss(x2, targets, initial, omega_t, times, base);
    }
  }
  const double d = 0.5 * (lo + hi);

  CalibratedDamping cal;
  cal.delay_eff = d;
  cal.gamma_eff = std::exp(-d / base.t2);

  RelaxationParams fitted = base;
  fitted.delay = d;
  fitted.equilibrium_z = 0.0;
  const std::array<double, 3> gaps = {times[1] - times[0], times[2] - times[1],
                                      times[2] - times[0]};
  static const char* kNames[6] = {"q1", "q2", "q3", "c12", "c23", "c13"};
  for (int i = 0; i < 3; ++i) {
    if (targets[i]) {
      cal.residuals.emplace_back(
          kNames[i], predicted_expectation(initial, omega_t, times[i], fitted) - *targets[i]);
    }
  }
  for (int i = 0; i < 3; ++i) {
    if (targets[3 + i]) {
      cal.residuals.emplace_back(
          kNames[3 + i], predicted_correlator(omega_t, gaps[i], fitted) - *targets[3 + i]);
    }
  }
  return cal;
}

}  // namespace lglab::noise
