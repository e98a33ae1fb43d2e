// The experiment runner: executes the single-time and correlator experiments
// of a configuration, assembles the moments, evaluates the full inequality
// set and serializes the result.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lglab/config.hpp"
#include "lglab/lgi.hpp"
#include "lglab/noise.hpp"
#include "lglab/regimes.hpp"

namespace lglab::cli {

inline constexpr const char* kVersion = "1.0.0";

// One measured probability table (single-time populations, INM circuit
// diagonals, or the CTVM ancilla pair).
struct ExperimentRow {
  std::string name;
  std::vector<std::string> outcomes;
  std::vector<double> values;
  std::vector<double> std_errors;
};

struct RunReport {
  ExperimentConfig config;
  bool sampled = false;
  lgi::MomentSet moments;
  std::array<double, 6> moment_errors{};  // q1 q2 q3 c12 c23 c13
  lgi::InequalityReport inequalities;
  lgi::JointFeasibility feasibility;
  std::vector<ExperimentRow> tables;
  std::vector<std::pair<std::string, double>> nsit;  // exact mode diagnostics
  std::optional<regimes::BoundShift> bound_shift;
  std::optional<noise::CalibratedDamping> calibration;
  std::vector<std::string> out_of_regime;  // flagged correlators, never clamped
};

RunReport run_experiment_suite(const ExperimentConfig& config);

enum class ReportFormat { Json, Csv };

std::string render_report(const RunReport& report, ReportFormat format);

// Writes to the path, or to stdout when destination is "-".
void emit_report(const RunReport& report, ReportFormat format,
                 const std::string& destination);

// Inequality report for externally supplied moments (the `check` command).
std::string render_check(const lgi::MomentSet& m, double bound, ReportFormat format);

}  // namespace lglab::cli
