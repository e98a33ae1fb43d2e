#include "lglab/lgi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lglab::lgi {

namespace {

constexpr double kSumTol = 1e-10;
constexpr double kBoundTol = 1e-12;

struct PairView {
  double qi;
  double qj;
  double c;
};

PairView pair_view(const MomentSet& m, TimePair pair) {
  switch (pair) {
    case TimePair::P12:
      return {m.q1, m.q2, m.c12};
    case TimePair::P23:
      return {m.q2, m.q3, m.c23};
    case TimePair::P13:
    default:
      return {m.q1, m.q3, m.c13};
  }
}

// Sign rows within a pair, matching the frozen label order.
constexpr int kSigns[4][2] = {{+1, +1}, {-1, +1}, {+1, -1}, {-1, -1}};

}  // namespace

const std::array<const char*, kNumLg2> kLg2Labels = {
    "2.1", "2.2", "2.3", "2.4", "2.5", "2.6",
    "2.7", "2.8", "2.9", "2.10", "2.11", "2.12"};

const std::array<const char*, kNumLg3> kLg3Labels = {"3.1", "3.2", "3.3", "3.4"};

bool MomentSet::within_bounds(double tol) const {
  const double vals[6] = {q1, q2, q3, c12, c23, c13};
  return std::all_of(std::begin(vals), std::end(vals),
                     [tol](double v) { return std::abs(v) <= 1.0 + tol; });
}

std::array<double, kNumLg2> eval_lg2(const MomentSet& m) {
  std::array<double, kNumLg2> out{};
  int idx = 0;
  for (TimePair pair : {TimePair::P12, TimePair::P23, TimePair::P13}) {
    const PairView v = pair_view(m, pair);
    for (const auto& s : kSigns) {
      out[idx++] = 1.0 + s[0] * v.qi + s[1] * v.qj + s[0] * s[1] * v.c;
    }
  }
  return out;
}

std::array<double, kNumLg3> eval_lg3(const MomentSet& m) {
  return {
      1.0 + m.c12 + m.c23 + m.c13,
      1.0 - m.c12 - m.c23 + m.c13,
      1.0 + m.c12 - m.c23 - m.c13,
      1.0 - m.c12 + m.c23 - m.c13,
  };
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::BothSatisfied:
      return "both_satisfied";
    case Regime::Lg2OnlyViolated:
      return "lg2_only_violated";
    case Regime::Lg3OnlyViolated:
      return "lg3_only_violated";
    case Regime::BothViolated:
    default:
      return "both_violated";
  }
}

InequalityReport build_report(const MomentSet& m, double bound,
                              const std::optional<std::array<double, kNumLg3>>& lg3_bounds) {
  const auto lg2 = eval_lg2(m);
  const auto lg3 = eval_lg3(m);

  for (int p = 0; p < 3; ++p) {
    const double quad = lg2[4 * p] + lg2[4 * p + 1] + lg2[4 * p + 2] + lg2[4 * p + 3];
    if (std::abs(quad - 4.0) > kSumTol) {
      throw numerics_error("LG2 quadruple sum deviates from 4");
    }
  }
  if (std::abs(lg3[0] + lg3[1] + lg3[2] + lg3[3] - 4.0) > kSumTol) {
    throw numerics_error("LG3 sum deviates from 4");
  }

  InequalityReport rep;
  rep.base_bound = bound;
  rep.lg2.reserve(kNumLg2);
  for (int i = 0; i < kNumLg2; ++i) {
    rep.lg2.push_back({kLg2Labels[i], lg2[i], bound, lg2[i] >= bound - kBoundTol});
  }
  rep.lg3.reserve(kNumLg3);
  for (int i = 0; i < kNumLg3; ++i) {
    const double b = lg3_bounds ? (*lg3_bounds)[i] : bound;
    rep.lg3.push_back({kLg3Labels[i], lg3[i], b, lg3[i] >= b - kBoundTol});
  }
  rep.regime = classify_regime(rep);
  return rep;
}

Regime classify_regime(const InequalityReport& report) {
  const bool lg2_ok = std::all_of(report.lg2.begin(), report.lg2.end(),
                                  [](const InequalityValue& v) { return v.satisfied; });
  const bool lg3_ok = std::all_of(report.lg3.begin(), report.lg3.end(),
                                  [](const InequalityValue& v) { return v.satisfied; });
  if (lg2_ok && lg3_ok) return Regime::BothSatisfied;
  if (lg3_ok) return Regime::Lg2OnlyViolated;
  if (lg2_ok) return Regime::Lg3OnlyViolated;
  return Regime::BothViolated;
}

double TwoTimeTable::min_entry() const {
  return std::min(std::min(pp, pm), std::min(mp, mm));
}

TwoTimeTable assemble_two_time(const MomentSet& m, TimePair pair) {
  const PairView v = pair_view(m, pair);
  TwoTimeTable t;
  t.pp = 0.25 * (1.0 + v.qi + v.qj + v.c);
  t.pm = 0.25 * (1.0 + v.qi - v.qj - v.c);
  t.mp = 0.25 * (1.0 - v.qi + v.qj - v.c);
  t.mm = 0.25 * (1.0 - v.qi - v.qj + v.c);
  return t;
}

double nsit_defect(const std::vector<double>& p_marginalized,
                   const std::vector<double>& p_direct) {
  if (p_marginalized.size() != p_direct.size() || p_marginalized.empty()) {
    throw numerics_error("nsit_defect: distributions must share outcome space");
  }
  double tv = 0.0;
  for (size_t i = 0; i < p_marginalized.size(); ++i) {
    tv += std::abs(p_marginalized[i] - p_direct[i]);
  }
  return 0.5 * tv;
}

JointFeasibility fine_feasible(const MomentSet& m) {
  // Each sign triple (s1, s2, s3) contributes a one-sided constraint on the
  // triple correlator T. Triples with s1 s2 s3 = +1 give lower bounds, the
  // others give upper bounds.
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();
  for (int s1 : {+1, -1}) {
    for (int s2 : {+1, -1}) {
      for (int s3 : {+1, -1}) {
        const double base = 1.0 + s1 * m.q1 + s2 * m.q2 + s3 * m.q3 +
                            s1 * s2 * m.c12 + s2 * s3 * m.c23 + s1 * s3 * m.c13;
        if (s1 * s2 * s3 > 0) {
          t_lo = std::max(t_lo, -base);
        } else {
          t_hi = std::min(t_hi, base);
        }
      }
    }
  }

  JointFeasibility f;
  f.t_lo = t_lo;
  f.t_hi = t_hi;
  f.feasible = t_lo <= t_hi + 1e-12;
  if (f.feasible) {
    const double t = 0.5 * (t_lo + t_hi);
    f.witness.reserve(8);
    double sum = 0.0;
    for (int s1 : {+1, -1}) {
      for (int s2 : {+1, -1}) {
        for (int s3 : {+1, -1}) {
          double p = 0.125 * (1.0 + s1 * m.q1 + s2 * m.q2 + s3 * m.q3 +
                              s1 * s2 * m.c12 + s2 * s3 * m.c23 + s1 * s3 * m.c13 +
                              s1 * s2 * s3 * t);
          p = std::max(p, 0.0);
          f.witness.push_back(p);
          sum += p;
        }
      }
    }
    for (double& p : f.witness) p /= sum;
  }
  return f;
}

}  // namespace lglab::lgi
