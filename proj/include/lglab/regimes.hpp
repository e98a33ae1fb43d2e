// Parameter-space exploration: initial-state region scans, the CTVM design
// error budget, the detectable-signal region, and the inequality bound shift
// induced by a nonzero detector coupling.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lglab/lgi.hpp"
#include "lglab/qcore.hpp"

namespace lglab::regimes {

struct ErrorBudget {
  double multi_sign_prob = 0.0;    // tan^4(w t / 2)
  double back_action_prob = 0.0;   // 4 lambda^2 sin^2(w t / 2)
  double approx_deviation = 0.0;   // sqrt(1 + 4 lambda^2) - 1
  double p1_signal = 0.0;          // exact p(1) at coupling duration t
};

ErrorBudget ctvm_error_budget(double lambda, double omega_t);

enum class CellClass : std::uint8_t {
  Lg2AllSatisfied,
  Lg2Violated,
  OutsideBall,
};

const char* cell_class_name(CellClass c);

struct RegionMap {
  double omega_t = 0.0;
  int n_grid = 0;
  std::array<double, 3> times{0.0, 1.0, 2.0};  // multipliers of the base interval
  std::vector<CellClass> cells;                // row-major, v_y outer, v_z inner

  double coordinate(int index) const;  // grid coordinate in [-1, 1]
  CellClass at(int iy, int iz) const { return cells[static_cast<size_t>(iy) * n_grid + iz]; }
};

// Classifies every (v_y, v_z) cell by whether all twelve two-time
// inequalities hold for the moments of that initial state.
RegionMap scan_initial_states(double omega_t, int n_grid,
                              const std::array<double, 3>& times = {0.0, 1.0, 2.0});

struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  int n = 2;
};

struct SignalRegion {
  GridRange lambda_range;
  GridRange omega_t_range;
  double floor = 0.01;
  std::vector<double> p1;            // row-major, lambda outer
  std::vector<std::uint8_t> detectable;
};

// The signal floor is compared at the stated measurement resolution of one
// part in 10^3, so a cell counts as detectable when p(1) rounds up to it.
inline constexpr double kSignalResolution = 1e-3;

SignalRegion signal_region(const GridRange& lambda_range, const GridRange& omega_t_range,
                           double floor = 0.01);

struct BoundShift {
  std::array<double, 4> shift{};           // CTVM-theoretical minus ideal, per LG3
  std::array<double, 4> adjusted_bound{};  // min(0, shift)
  double ctvm_c_t = 0.0;                   // CTVM-theoretical correlator at gap t
  double ctvm_c_2t = 0.0;                  //   and at gap 2t
  double design_reference = 0.0028;        // historical design value at this operating point
};

// Difference between the three-time inequality values built from the
// CTVM-theoretical correlators C = 1 - (1 - cos(Omega dt)) / (1 + 4 lambda^2)
// and those built from the ideal C = cos(w dt), for equidistant times.
BoundShift lg3_bound_shift(double lambda, double omega_t);

}  // namespace lglab::regimes
