// Command-line runner for the inequality laboratory.
//
//   lglab run <config>        execute an experiment suite and report it
//   lglab scan <config>       initial-state region map (CSV)
//   lglab budget              detector design-error budget (point or grid)
//   lglab curve <fig1|fig9>   inequality curves (CSV)
//   lglab check <moments>     inequalities + feasibility from raw moments
//   lglab verify <seq> <tgt>  fidelity of a pulse sequence decomposition
//
// Exit codes: 0 success, 1 configuration error, 2 numerical invariant breach.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lglab/config.hpp"
#include "lglab/pulses.hpp"
#include "lglab/protocols.hpp"
#include "lglab/regimes.hpp"
#include "lglab/report.hpp"

namespace {

using lglab::config_error;
using lglab::numerics_error;

void write_text(const std::string& destination, const std::string& text) {
  if (destination == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + destination);
  out << text;
  if (!out) throw config_error("failed writing output file: " + destination);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

lglab::cli::ReportFormat parse_format(const std::string& name) {
  if (name == "json") return lglab::cli::ReportFormat::Json;
  if (name == "csv") return lglab::cli::ReportFormat::Csv;
  throw config_error("unknown format '" + name + "' (expected json or csv)");
}

std::string scan_csv(const lglab::regimes::RegionMap& map) {
  std::ostringstream out;
  out << "v_y,v_z,class\n";
  for (int iy = 0; iy < map.n_grid; ++iy) {
    for (int iz = 0; iz < map.n_grid; ++iz) {
      out << fmt(map.coordinate(iy)) << ',' << fmt(map.coordinate(iz)) << ','
          << lglab::regimes::cell_class_name(map.at(iy, iz)) << '\n';
    }
  }
  return out.str();
}

std::string budget_grid_csv(const lglab::regimes::GridRange& lam,
                            const lglab::regimes::GridRange& wt, double floor) {
  const auto region = lglab::regimes::signal_region(lam, wt, floor);
  std::ostringstream out;
  out << "lambda,omega_t,multi_sign,back_action,approx_deviation,p1,detectable\n";
  for (int il = 0; il < lam.n; ++il) {
    const double l = lam.n == 1 ? lam.lo : lam.lo + (lam.hi - lam.lo) * il / (lam.n - 1);
    for (int iw = 0; iw < wt.n; ++iw) {
      const double w = wt.n == 1 ? wt.lo : wt.lo + (wt.hi - wt.lo) * iw / (wt.n - 1);
      const auto budget = lglab::regimes::ctvm_error_budget(l, w);
      const size_t idx = static_cast<size_t>(il) * wt.n + iw;
      out << fmt(l) << ',' << fmt(w) << ',' << fmt(budget.multi_sign_prob) << ','
          << fmt(budget.back_action_prob) << ',' << fmt(budget.approx_deviation) << ','
          << fmt(region.p1[idx]) << ',' << (region.detectable[idx] ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

std::string budget_point_json(double lambda, double omega_t, double floor) {
  const auto budget = lglab::regimes::ctvm_error_budget(lambda, omega_t);
  const auto shift = lglab::regimes::lg3_bound_shift(lambda, omega_t);
  const bool detectable =
      budget.p1_signal >= floor - 0.5 * lglab::regimes::kSignalResolution;
  std::ostringstream out;
  out << "{\"approx_deviation\":" << fmt(budget.approx_deviation)
      << ",\"back_action_prob\":" << fmt(budget.back_action_prob)
      << ",\"bound_shift\":{\"adjusted_bound\":[" << fmt(shift.adjusted_bound[0]) << ','
      << fmt(shift.adjusted_bound[1]) << ',' << fmt(shift.adjusted_bound[2]) << ','
      << fmt(shift.adjusted_bound[3]) << "],\"design_reference\":"
      << fmt(shift.design_reference) << ",\"shift\":[" << fmt(shift.shift[0]) << ','
      << fmt(shift.shift[1]) << ',' << fmt(shift.shift[2]) << ',' << fmt(shift.shift[3])
      << "]},\"detectable\":" << (detectable ? "true" : "false")
      << ",\"lambda\":" << fmt(lambda) << ",\"multi_sign_prob\":" << fmt(budget.multi_sign_prob)
      << ",\"omega_t\":" << fmt(omega_t) << ",\"p1_signal\":" << fmt(budget.p1_signal)
      << "}\n";
  return out.str();
}

std::string curve_fig1_csv(int points) {
  std::ostringstream out;
  out << "omega_t_over_pi,lg3a,lg3b\n";
  for (int i = 0; i < points; ++i) {
    const double x = 2.0 * i / (points - 1);
    const double wt = x * M_PI;
    out << fmt(x) << ',' << fmt(1.0 + 2.0 * std::cos(wt) + std::cos(2.0 * wt)) << ','
        << fmt(1.0 - 2.0 * std::cos(wt) + std::cos(2.0 * wt)) << '\n';
  }
  return out.str();
}

std::string curve_fig9_csv(double lambda, int points) {
  std::ostringstream out;
  out << "omega_t_over_pi,lg3a_ideal,lg3b_ideal,lg3a_ctvm,lg3b_ctvm,shift_a,shift_b\n";
  for (int i = 0; i < points; ++i) {
    const double x = 2.0 * i / (points - 1);
    const double wt = x * M_PI;
    const double a_ideal = 1.0 + 2.0 * std::cos(wt) + std::cos(2.0 * wt);
    const double b_ideal = 1.0 - 2.0 * std::cos(wt) + std::cos(2.0 * wt);
    const auto shift = lglab::regimes::lg3_bound_shift(lambda, wt);
    const double a_ctvm = 1.0 + 2.0 * shift.ctvm_c_t + shift.ctvm_c_2t;
    const double b_ctvm = 1.0 - 2.0 * shift.ctvm_c_t + shift.ctvm_c_2t;
    out << fmt(x) << ',' << fmt(a_ideal) << ',' << fmt(b_ideal) << ',' << fmt(a_ctvm) << ','
        << fmt(b_ctvm) << ',' << fmt(a_ctvm - a_ideal) << ',' << fmt(b_ctvm - b_ideal)
        << '\n';
  }
  return out.str();
}

lglab::qcore::Mat parse_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open matrix file: " + path);
  std::vector<double> nums;
  double v = 0.0;
  while (in >> v) nums.push_back(v);
  int dim = 0;
  if (nums.size() == 8) dim = 2;
  if (nums.size() == 32) dim = 4;
  if (dim == 0) {
    throw config_error("matrix file must hold 8 or 32 numbers (re/im pairs, row major)");
  }
  lglab::qcore::Mat m(dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const size_t k = 2 * (static_cast<size_t>(r) * dim + c);
      m(r, c) = {nums[k], nums[k + 1]};
    }
  }
  return m;
}

lglab::qcore::Mat resolve_target(const std::string& name, double omega_t, double lambda,
                                 double duration_mult) {
  using lglab::qcore::Mat;
  if (name == "cnot") {
    Mat c(4);
    c(0, 0) = 1.0;
    c(1, 1) = 1.0;
    c(2, 3) = 1.0;
    c(3, 2) = 1.0;
    return c;
  }
  if (name == "anti_cnot") {
    Mat c(4);
    c(0, 1) = 1.0;
    c(1, 0) = 1.0;
    c(2, 2) = 1.0;
    c(3, 3) = 1.0;
    return c;
  }
  if (name == "identity") return Mat::identity(4);
  if (name == "detector") {
    return lglab::qcore::detector_propagator(1.0, lambda, duration_mult * omega_t);
  }
  return parse_matrix_file(name);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Leggett-Garg inequality laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "-";
  std::string format_name = "json";

  long long seed_override = -1;
  auto* run = app.add_subcommand("run", "run an experiment suite from a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--format", format_name, "json or csv");
  run->add_option("--out", out_path, "output path, - for stdout");
  run->add_option("--seed", seed_override, "override the config seed (shot mode)");

  std::string scan_config;
  std::string scan_out = "-";
  int grid = 401;
  auto* scan = app.add_subcommand("scan", "initial-state region map over (v_y, v_z)");
  scan->add_option("config", scan_config, "config file")->required();
  scan->add_option("--grid", grid, "grid points per axis");
  scan->add_option("--out", scan_out, "output path, - for stdout");

  double b_lambda = -1.0;
  double b_omega_t = -1.0;
  double b_floor = 0.01;
  double b_lambda_min = 0.0;
  double b_lambda_max = 0.3;
  double b_wt_min = 0.05 * M_PI;
  double b_wt_max = 0.45 * M_PI;
  int b_grid = 41;
  std::string budget_out = "-";
  auto* budget = app.add_subcommand("budget", "CTVM design-error budget");
  budget->add_option("--lambda", b_lambda, "single-point coupling");
  budget->add_option("--omega-t", b_omega_t, "single-point omega*t (radians)");
  budget->add_option("--floor", b_floor, "detectable-signal floor on p(1)");
  budget->add_option("--lambda-min", b_lambda_min, "grid: smallest lambda");
  budget->add_option("--lambda-max", b_lambda_max, "grid: largest lambda");
  budget->add_option("--omega-t-min", b_wt_min, "grid: smallest omega*t");
  budget->add_option("--omega-t-max", b_wt_max, "grid: largest omega*t");
  budget->add_option("--grid", b_grid, "grid points per axis");
  budget->add_option("--out", budget_out, "output path, - for stdout");

  std::string curve_name;
  std::string curve_out = "-";
  double curve_lambda = 0.11;
  int curve_points = 401;
  auto* curve = app.add_subcommand("curve", "inequality curves (fig1 or fig9)");
  curve->add_option("name", curve_name, "fig1 or fig9")->required();
  curve->add_option("--lambda", curve_lambda, "coupling for fig9");
  curve->add_option("--points", curve_points, "sample count");
  curve->add_option("--out", curve_out, "output path, - for stdout");

  std::string moments_path;
  std::string check_out = "-";
  std::string check_format = "json";
  double check_bound = 0.0;
  auto* check = app.add_subcommand("check", "inequalities + feasibility from moments JSON");
  check->add_option("moments", moments_path, "JSON file with q1,q2,q3,c12,c23,c13")
      ->required();
  check->add_option("--bound", check_bound, "violation bound");
  check->add_option("--format", check_format, "json or csv");
  check->add_option("--out", check_out, "output path, - for stdout");

  std::string seq_path;
  std::string target_name;
  double v_omega_t = 3.0 * M_PI / 10.0;
  double v_lambda = 0.11;
  double v_mult = 1.0;
  auto* verify = app.add_subcommand("verify", "fidelity of a sequence decomposition");
  verify->add_option("sequence", seq_path, "sequence file")->required();
  verify
      ->add_option("target", target_name,
                   "cnot | anti_cnot | identity | detector | matrix file path")
      ->required();
  verify->add_option("--omega-t", v_omega_t, "detector target: omega*t per interval");
  verify->add_option("--lambda", v_lambda, "detector target: coupling");
  verify->add_option("--duration-mult", v_mult, "detector target: interval multiplier");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    auto cfg = lglab::cli::load_config(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    const auto report = lglab::cli::run_experiment_suite(cfg);
    lglab::cli::emit_report(report, parse_format(format_name), out_path);
    return 0;
  }
  if (scan->parsed()) {
    const auto cfg = lglab::cli::load_config(scan_config);
    const auto map = lglab::regimes::scan_initial_states(cfg.omega_t, grid, cfg.times);
    write_text(scan_out, scan_csv(map));
    return 0;
  }
  if (budget->parsed()) {
    if (b_lambda >= 0.0 && b_omega_t >= 0.0) {
      write_text(budget_out, budget_point_json(b_lambda, b_omega_t, b_floor));
    } else {
      write_text(budget_out,
                 budget_grid_csv({b_lambda_min, b_lambda_max, b_grid},
                                 {b_wt_min, b_wt_max, b_grid}, b_floor));
    }
    return 0;
  }
  if (curve->parsed()) {
    if (curve_points < 2) throw config_error("curve requires --points >= 2");
    if (curve_name == "fig1") {
      write_text(curve_out, curve_fig1_csv(curve_points));
    } else if (curve_name == "fig9") {
      write_text(curve_out, curve_fig9_csv(curve_lambda, curve_points));
    } else {
      throw config_error("unknown curve '" + curve_name + "' (expected fig1 or fig9)");
    }
    return 0;
  }
  if (check->parsed()) {
    std::ifstream in(moments_path);
    if (!in) throw config_error("cannot open moments file: " + moments_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw config_error("invalid JSON in " + moments_path + ": " + e.what());
    }
    lglab::lgi::MomentSet m;
    try {
      m.q1 = j.at("q1").get<double>();
      m.q2 = j.at("q2").get<double>();
      m.q3 = j.at("q3").get<double>();
      m.c12 = j.at("c12").get<double>();
      m.c23 = j.at("c23").get<double>();
      m.c13 = j.at("c13").get<double>();
    } catch (const std::exception& e) {
      throw config_error("moments file must define q1,q2,q3,c12,c23,c13: " +
                         std::string(e.what()));
    }
    if (!m.within_bounds(1e-9)) {
      throw config_error("moments must lie in [-1, 1]");
    }
    write_text(check_out, lglab::cli::render_check(m, check_bound, parse_format(check_format)));
    return 0;
  }
  if (verify->parsed()) {
    std::ifstream in(seq_path);
    if (!in) throw config_error("cannot open sequence file: " + seq_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto seq = lglab::pulses::parse_sequence(buf.str());
    const auto target = resolve_target(target_name, v_omega_t, v_lambda, v_mult);
    const double f = lglab::pulses::verify_decomposition(seq, target);
    std::cout << "fidelity " << fmt(f) << '\n';
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const numerics_error& e) {
    std::cerr << "numerics error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
