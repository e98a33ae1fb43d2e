// The augmented inequality set: twelve two-time inequalities and four
// three-time inequalities, assembly of two-time probability tables from
// moments, the no-signalling-in-time defect, and the joint-distribution
// feasibility test over the triple correlator.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lglab/errors.hpp"

namespace lglab::lgi {

// The six moments feeding every inequality: <Q1>, <Q2>, <Q3> and the
// pairwise correlators C12, C23, C13.
struct MomentSet {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double c12 = 0.0;
  double c23 = 0.0;
  double c13 = 0.0;

  bool within_bounds(double tol = 1e-12) const;
};

inline constexpr int kNumLg2 = 12;
inline constexpr int kNumLg3 = 4;

// Row order is frozen so golden comparisons are positional.
extern const std::array<const char*, kNumLg2> kLg2Labels;
extern const std::array<const char*, kNumLg3> kLg3Labels;

// The twelve signed sums 1 + s_i<Q_i> + s_j<Q_j> + s_i s_j C_ij, in label
// order (pairs 12, 23, 13; signs ++, -+, +-, -- within each pair).
std::array<double, kNumLg2> eval_lg2(const MomentSet& m);

// The four signed sums over C12, C23, C13, in label order.
std::array<double, kNumLg3> eval_lg3(const MomentSet& m);

enum class Regime {
  BothSatisfied,
  Lg2OnlyViolated,
  Lg3OnlyViolated,
  BothViolated,
};

const char* regime_name(Regime r);

struct InequalityValue {
  std::string label;
  double value = 0.0;
  double bound = 0.0;
  bool satisfied = false;  // value >= bound (to 1e-12)
};

struct InequalityReport {
  std::vector<InequalityValue> lg2;
  std::vector<InequalityValue> lg3;
  double base_bound = 0.0;
  Regime regime = Regime::BothSatisfied;
};

// Evaluates all sixteen inequalities against per-family bounds and verifies
// the sum identities (each LG2 quadruple and the LG3 quadruple sum to 4).
InequalityReport build_report(const MomentSet& m, double bound = 0.0,
                              const std::optional<std::array<double, kNumLg3>>&
                                  lg3_bounds = std::nullopt);

Regime classify_regime(const InequalityReport& report);

// Two-time probability table for outcomes (s_i, s_j) in {+,-}^2.
// Entries assembled from moments may be negative; that is the signal the
// two-time inequalities detect, so it is preserved, not clamped.
struct TwoTimeTable {
  double pp = 0.0;
  double pm = 0.0;
  double mp = 0.0;
  double mm = 0.0;

  double sum() const { return pp + pm + mp + mm; }
  double correlator() const { return pp - pm - mp + mm; }
  double min_entry() const;
  bool nonnegative(double tol = 1e-12) const { return min_entry() >= -tol; }
};

enum class TimePair { P12, P23, P13 };

// p(s_i, s_j) = (1 + s_i q_i + s_j q_j + s_i s_j c_ij) / 4.
TwoTimeTable assemble_two_time(const MomentSet& m, TimePair pair);

// Total-variation distance between two distributions over the same outcomes.
double nsit_defect(const std::vector<double>& p_marginalized,
                   const std::vector<double>& p_direct);

struct JointFeasibility {
  bool feasible = false;
  double t_lo = 0.0;  // admissible interval for the triple correlator
  double t_hi = 0.0;
  std::vector<double> witness;  // 8 probabilities at the interval midpoint
};

// Searches for a triple correlator T making all eight joint probabilities
// p(s1,s2,s3) = [1 + sum s_i q_i + sum s_i s_j c_ij + s1 s2 s3 T] / 8
// nonnegative. Returns the full admissible interval; feasibility is decided
// with tolerance 1e-12 on the interval test.
JointFeasibility fine_feasible(const MomentSet& m);

}  // namespace lglab::lgi
