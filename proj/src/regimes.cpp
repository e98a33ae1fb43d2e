#include "lglab/regimes.hpp"

#include <algorithm>
#include <cmath>

#include "lglab/protocols.hpp"

namespace lglab::regimes {

ErrorBudget ctvm_error_budget(double lambda, double omega_t) {
  if (lambda < 0.0) throw numerics_error("ctvm_error_budget: lambda must be >= 0");
  if (!(omega_t >= 0.0) || omega_t >= M_PI) {
    throw numerics_error("ctvm_error_budget: omega_t must lie in [0, pi)");
  }
  ErrorBudget b;
  const double t = std::tan(omega_t / 2.0);
  const double s = std::sin(omega_t / 2.0);
  b.multi_sign_prob = t * t * t * t;
  b.back_action_prob = 4.0 * lambda * lambda * s * s;
  b.approx_deviation = std::sqrt(1.0 + 4.0 * lambda * lambda) - 1.0;
  const protocols::DetectorModel detector{1.0, lambda};
  b.p1_signal = protocols::ctvm_p1(qcore::ground_state(), detector, omega_t,
                                   protocols::CtvmMode::Exact);
  return b;
}

const char* cell_class_name(CellClass c) {
  switch (c) {
    case CellClass::Lg2AllSatisfied:
      return "lg2_all_satisfied";
    case CellClass::Lg2Violated:
      return "lg2_violated";
    case CellClass::OutsideBall:
    default:
      return "outside_ball";
  }
}

double RegionMap::coordinate(int index) const {
  return -1.0 + 2.0 * static_cast<double>(index) / static_cast<double>(n_grid - 1);
}

RegionMap scan_initial_states(double omega_t, int n_grid,
                              const std::array<double, 3>& times) {
  if (n_grid < 2) throw numerics_error("scan_initial_states requires n_grid >= 2");
  RegionMap map;
  map.omega_t = omega_t;
  map.n_grid = n_grid;
  map.times = times;
  map.cells.resize(static_cast<size_t>(n_grid) * n_grid);

  lgi::MomentSet m;
  m.c12 = std::cos((times[1] - times[0]) * omega_t);
  m.c23 = std::cos((times[2] - times[1]) * omega_t);
  m.c13 = std::cos((times[2] - times[0]) * omega_t);

  for (int iy = 0; iy < n_grid; ++iy) {
    const double vy = map.coordinate(iy);
    for (int iz = 0; iz < n_grid; ++iz) {
      const double vz = map.coordinate(iz);
      CellClass cls;
      if (vy * vy + vz * vz > 1.0 + 1e-12) {
        cls = CellClass::OutsideBall;
      } else {
        m.q1 = vz * std::cos(times[0] * omega_t) + vy * std::sin(times[0] * omega_t);
        m.q2 = vz * std::cos(times[1] * omega_t) + vy * std::sin(times[1] * omega_t);
        m.q3 = vz * std::cos(times[2] * omega_t) + vy * std::sin(times[2] * omega_t);
        const auto lg2 = lgi::eval_lg2(m);
        const bool ok = std::all_of(lg2.begin(), lg2.end(),
                                    [](double v) { return v >= -1e-12; });
        cls = ok ? CellClass::Lg2AllSatisfied : CellClass::Lg2Violated;
      }
      map.cells[static_cast<size_t>(iy) * n_grid + iz] = cls;
    }
  }
  return map;
}

SignalRegion signal_region(const GridRange& lambda_range, const GridRange& omega_t_range,
                           double floor) {
  if (lambda_range.n < 1 || omega_t_range.n < 1) {
    throw numerics_error("signal_region: ranges must be nonempty");
  }
  SignalRegion region;
  region.lambda_range = lambda_range;
  region.omega_t_range = omega_t_range;
  region.floor = floor;
  region.p1.reserve(static_cast<size_t>(lambda_range.n) * omega_t_range.n);
  region.detectable.reserve(region.p1.capacity());

  for (int il = 0; il < lambda_range.n; ++il) {
    const double lam =
        lambda_range.n == 1
            ? lambda_range.lo
            : lambda_range.lo + (lambda_range.hi - lambda_range.lo) * il / (lambda_range.n - 1);
    for (int iw = 0; iw < omega_t_range.n; ++iw) {
      const double wt = omega_t_range.n == 1
                            ? omega_t_range.lo
                            : omega_t_range.lo +
                                  (omega_t_range.hi - omega_t_range.lo) * iw /
                                      (omega_t_range.n - 1);
      const protocols::DetectorModel detector{1.0, lam};
      const double p1 = protocols::ctvm_p1(qcore::ground_state(), detector, wt,
                                           protocols::CtvmMode::Exact);
      region.p1.push_back(p1);
      region.detectable.push_back(p1 >= floor - 0.5 * kSignalResolution ? 1 : 0);
    }
  }
  return region;
}

BoundShift lg3_bound_shift(double lambda, double omega_t) {
  if (lambda < 0.0) throw numerics_error("lg3_bound_shift: lambda must be >= 0");
  const double onep = 1.0 + 4.0 * lambda * lambda;
  const double big = omega_t * std::sqrt(onep);

  lgi::MomentSet ideal;
  ideal.c12 = std::cos(omega_t);
  ideal.c23 = std::cos(omega_t);
  ideal.c13 = std::cos(2.0 * omega_t);

  lgi::MomentSet ctvm;
  ctvm.c12 = 1.0 - (1.0 - std::cos(big)) / onep;
  ctvm.c23 = ctvm.c12;
  ctvm.c13 = 1.0 - (1.0 - std::cos(2.0 * big)) / onep;

  const auto lg3_ideal = lgi::eval_lg3(ideal);
  const auto lg3_ctvm = lgi::eval_lg3(ctvm);

  BoundShift out;
  out.ctvm_c_t = ctvm.c12;
  out.ctvm_c_2t = ctvm.c13;
  for (int i = 0; i < 4; ++i) {
    out.shift[i] = lg3_ctvm[i] - lg3_ideal[i];
    out.adjusted_bound[i] = std::min(0.0, out.shift[i]);
  }
  return out;
}

}  // namespace lglab::regimes
