#include "lglab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "lglab/protocols.hpp"

namespace lglab::cli {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t base, std::uint64_t row) {
  return splitmix64(base + splitmix64(row));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

struct PairSpec {
  const char* name;
  int i;
  int j;
};

constexpr PairSpec kPairs[3] = {{"c12", 0, 1}, {"c23", 1, 2}, {"c13", 0, 2}};

}  // namespace

RunReport run_experiment_suite(const ExperimentConfig& config) {
  config.validate();

  RunReport rep;
  rep.config = config;
  rep.sampled = config.shots.has_value();

  const protocols::SpinModel model{config.omega};
  const double tu = config.t_unit();
  const std::array<double, 3> t_sec = {config.times[0] * tu, config.times[1] * tu,
                                       config.times[2] * tu};

  std::optional<noise::RelaxationParams> relax = config.relaxation;
  if (config.calibrate_q2) {
    noise::MomentTargets targets{};
    targets[1] = *config.calibrate_q2;
    rep.calibration = noise::calibrate_damping(targets, config.initial, config.omega_t,
                                               config.times, *relax);
    relax->delay = rep.calibration->delay_eff;
    relax->equilibrium_z = 0.0;
  }

  std::unique_ptr<protocols::IntervalEvolution> evo;
  if (relax) {
    evo = std::make_unique<protocols::DampedEvolution>(model, *relax, tu);
  } else {
    evo = std::make_unique<protocols::UnitaryEvolution>(model);
  }

  const qcore::QubitState initial = qcore::density_from_bloch(config.initial);

  rep.tables.reserve(9);  // keeps the row references below stable
  std::uint64_t row_index = 0;
  auto push_row = [&](const std::string& name, const std::vector<std::string>& outcomes,
                      const std::vector<double>& exact_probs) -> const ExperimentRow& {
    ExperimentRow row;
    row.name = name;
    row.outcomes = outcomes;
    if (rep.sampled) {
      const auto est = protocols::sample_shots(exact_probs, *config.shots,
                                               sub_seed(config.seed, row_index));
      for (const auto& e : est) {
        row.values.push_back(e.mean);
        row.std_errors.push_back(e.std_error);
      }
    } else {
      row.values = exact_probs;
      row.std_errors.assign(exact_probs.size(), 0.0);
    }
    ++row_index;
    rep.tables.push_back(std::move(row));
    return rep.tables.back();
  };

  // Single-time populations determine <Q_i> for every protocol.
  for (int i = 0; i < 3; ++i) {
    const qcore::QubitState at_ti = evo->advance(initial, 0.0, t_sec[i]);
    const auto probs = qcore::diagonal_probabilities(at_ti);
    const auto& row = push_row("q" + std::to_string(i + 1), {"p0", "p1"}, probs);
    const double q = row.values[0] - row.values[1];
    const double err = 2.0 * row.std_errors[0];
    switch (i) {
      case 0:
        rep.moments.q1 = q;
        rep.moment_errors[0] = err;
        break;
      case 1:
        rep.moments.q2 = q;
        rep.moment_errors[1] = err;
        break;
      default:
        rep.moments.q3 = q;
        rep.moment_errors[2] = err;
        break;
    }
  }

  std::array<double, 3> correlators{};
  std::array<double, 3> correlator_errors{};

  for (int p = 0; p < 3; ++p) {
    const PairSpec& pair = kPairs[p];
    const double ti = t_sec[pair.i];
    const double tj = t_sec[pair.j];
    double c = 0.0;
    double err = 0.0;

    if (config.protocol == Protocol::Projective) {
      const lgi::TwoTimeTable table = protocols::projective_two_time(initial, *evo, ti, tj);
      const auto& row = push_row(pair.name, {"pp", "pm", "mp", "mm"},
                                 {table.pp, table.pm, table.mp, table.mm});
      c = row.values[0] - row.values[1] - row.values[2] + row.values[3];
      if (rep.sampled) {
        err = std::sqrt(std::max(1.0 - c * c, 0.0) / static_cast<double>(*config.shots));
      }
    } else if (config.protocol == Protocol::Inm) {
      const auto cnot =
          protocols::inm_circuit(initial, *evo, ti, tj, protocols::InmGate::Cnot);
      const auto anti =
          protocols::inm_circuit(initial, *evo, ti, tj, protocols::InmGate::AntiCnot);
      const std::vector<std::string> outcomes = {"p00", "p01", "p10", "p11"};
      const auto& crow = push_row(std::string(pair.name) + "_cnot", outcomes, cnot);
      const auto& arow = push_row(std::string(pair.name) + "_anticnot", outcomes, anti);
      // Kept halves: ancilla |0> entries of each run.
      const double pp = crow.values[0];
      const double pm = crow.values[2];
      const double mp = arow.values[0];
      const double mm = arow.values[2];
      c = pp - pm - mp + mm;
      if (rep.sampled) {
        const double n = static_cast<double>(*config.shots);
        const double var_c = (pp + pm - (pp - pm) * (pp - pm)) / n;
        const double var_a = (mp + mm - (mm - mp) * (mm - mp)) / n;
        err = std::sqrt(std::max(var_c + var_a, 0.0));
      }
    } else {
      const protocols::DetectorModel detector{config.omega, config.lambda};
      const qcore::QubitState at_ti = evo->advance(initial, 0.0, ti);
      const double p1 = protocols::ctvm_p1(at_ti, detector, tj - ti);
      const auto& row =
          push_row(std::string(pair.name) + "_ctvm", {"p0", "p1"}, {1.0 - p1, p1});
      c = protocols::ctvm_correlator(row.values[1], config.lambda);
      err = row.std_errors[1] / (2.0 * config.lambda * config.lambda);
      if (protocols::correlator_out_of_regime(c)) {
        rep.out_of_regime.push_back(pair.name);
      }
    }

    correlators[p] = c;
    correlator_errors[p] = err;
  }

  rep.moments.c12 = correlators[0];
  rep.moments.c23 = correlators[1];
  rep.moments.c13 = correlators[2];
  rep.moment_errors[3] = correlator_errors[0];
  rep.moment_errors[4] = correlator_errors[1];
  rep.moment_errors[5] = correlator_errors[2];

  // No-signalling diagnostics: marginal over the earlier outcome against the
  // undisturbed single-time distribution (exact mode only).
  if (!rep.sampled && config.protocol != Protocol::Ctvm) {
    for (const PairSpec& pair : kPairs) {
      const lgi::TwoTimeTable table =
          protocols::projective_two_time(initial, *evo, t_sec[pair.i], t_sec[pair.j]);
      const qcore::QubitState direct = evo->advance(initial, 0.0, t_sec[pair.j]);
      const auto pj = qcore::diagonal_probabilities(direct);
      const double defect =
          lgi::nsit_defect({table.pp + table.mp, table.pm + table.mm}, {pj[0], pj[1]});
      rep.nsit.emplace_back(pair.name, defect);
    }
  }

  if (!rep.sampled && !rep.moments.within_bounds(1e-12)) {
    throw numerics_error("exact-mode moments left [-1, 1]");
  }

  std::optional<std::array<double, 4>> lg3_bounds;
  if (config.lambda > 0.0) {
    rep.bound_shift = regimes::lg3_bound_shift(config.lambda, config.omega_t);
    if (config.bound_mode == BoundMode::CtvmShifted) {
      lg3_bounds = rep.bound_shift->adjusted_bound;
    }
  }
  rep.inequalities = lgi::build_report(rep.moments, 0.0, lg3_bounds);
  rep.feasibility = lgi::fine_feasible(rep.moments);
  return rep;
}

namespace {

void write_inequalities_json(std::ostringstream& out, const lgi::InequalityReport& rep) {
  auto rows = [&out](const std::vector<lgi::InequalityValue>& vals) {
    out << '[';
    for (size_t i = 0; i < vals.size(); ++i) {
      if (i) out << ',';
      out << "{\"bound\":" << fmt(vals[i].bound) << ",\"label\":\"" << vals[i].label
          << "\",\"satisfied\":" << (vals[i].satisfied ? "true" : "false")
          << ",\"value\":" << fmt(vals[i].value) << '}';
    }
    out << ']';
  };
  out << "\"lg2\":";
  rows(rep.lg2);
  out << ",\"lg3\":";
  rows(rep.lg3);
}

void write_moments_json(std::ostringstream& out, const lgi::MomentSet& m) {
  out << "{\"c12\":" << fmt(m.c12) << ",\"c13\":" << fmt(m.c13) << ",\"c23\":" << fmt(m.c23)
      << ",\"q1\":" << fmt(m.q1) << ",\"q2\":" << fmt(m.q2) << ",\"q3\":" << fmt(m.q3) << '}';
}

void write_feasibility_json(std::ostringstream& out, const lgi::JointFeasibility& f) {
  out << "{\"feasible\":" << (f.feasible ? "true" : "false") << ",\"t_hi\":" << fmt(f.t_hi)
      << ",\"t_lo\":" << fmt(f.t_lo) << ",\"witness\":[";
  for (size_t i = 0; i < f.witness.size(); ++i) {
    if (i) out << ',';
    out << fmt(f.witness[i]);
  }
  out << "]}";
}

void write_config_json(std::ostringstream& out, const ExperimentConfig& c) {
  out << "{\"bound_mode\":\"" << bound_mode_name(c.bound_mode) << "\",\"initial\":{\"vx\":"
      << fmt(c.initial.vx) << ",\"vy\":" << fmt(c.initial.vy) << ",\"vz\":" << fmt(c.initial.vz)
      << "},\"lambda\":" << fmt(c.lambda) << ",\"omega\":" << fmt(c.omega)
      << ",\"omega_t\":" << fmt(c.omega_t) << ",\"protocol\":\"" << protocol_name(c.protocol)
      << '"';
  if (c.relaxation) {
    out << ",\"relaxation\":{\"ancilla\":" << (c.relaxation->ancilla_relaxation ? "true" : "false");
    if (c.calibrate_q2) out << ",\"calibrate_q2\":" << fmt(*c.calibrate_q2);
    out << ",\"delay\":" << fmt(c.relaxation->delay)
        << ",\"equilibrium_z\":" << fmt(c.relaxation->equilibrium_z)
        << ",\"t1\":" << fmt(c.relaxation->t1) << ",\"t2\":" << fmt(c.relaxation->t2) << '}';
  }
  out << ",\"seed\":" << c.seed;
  if (c.shots) out << ",\"shots\":" << *c.shots;
  out << ",\"times\":[" << fmt(c.times[0]) << ',' << fmt(c.times[1]) << ','
      << fmt(c.times[2]) << "]}";
}

std::string render_json(const RunReport& rep) {
  std::ostringstream out;
  out << "{\"bound\":" << fmt(rep.inequalities.base_bound);
  if (rep.bound_shift) {
    const auto& b = *rep.bound_shift;
    out << ",\"bound_shift\":{\"adjusted_bound\":[" << fmt(b.adjusted_bound[0]) << ','
        << fmt(b.adjusted_bound[1]) << ',' << fmt(b.adjusted_bound[2]) << ','
        << fmt(b.adjusted_bound[3]) << "],\"ctvm_c_2t\":" << fmt(b.ctvm_c_2t)
        << ",\"ctvm_c_t\":" << fmt(b.ctvm_c_t)
        << ",\"design_reference\":" << fmt(b.design_reference) << ",\"shift\":["
        << fmt(b.shift[0]) << ',' << fmt(b.shift[1]) << ',' << fmt(b.shift[2]) << ','
        << fmt(b.shift[3]) << "]}";
  }
  if (rep.calibration) {
    out << ",\"calibration\":{\"delay_eff\":" << fmt(rep.calibration->delay_eff)
        << ",\"gamma_eff\":" << fmt(rep.calibration->gamma_eff) << ",\"residuals\":[";
    for (size_t i = 0; i < rep.calibration->residuals.size(); ++i) {
      if (i) out << ',';
      out << "{\"residual\":" << fmt(rep.calibration->residuals[i].second) << ",\"target\":\""
          << json_escape(rep.calibration->residuals[i].first) << "\"}";
    }
    out << "]}";
  }
  out << ",\"config\":";
  write_config_json(out, rep.config);
  out << ",\"feasibility\":";
  write_feasibility_json(out, rep.feasibility);
  out << ',';
  write_inequalities_json(out, rep.inequalities);
  out << ",\"moment_errors\":{\"c12\":" << fmt(rep.moment_errors[3])
      << ",\"c13\":" << fmt(rep.moment_errors[5]) << ",\"c23\":" << fmt(rep.moment_errors[4])
      << ",\"q1\":" << fmt(rep.moment_errors[0]) << ",\"q2\":" << fmt(rep.moment_errors[1])
      << ",\"q3\":" << fmt(rep.moment_errors[2]) << '}';
  out << ",\"moments\":";
  write_moments_json(out, rep.moments);
  out << ",\"nsit\":[";
  for (size_t i = 0; i < rep.nsit.size(); ++i) {
    if (i) out << ',';
    out << "{\"defect\":" << fmt(rep.nsit[i].second) << ",\"pair\":\""
        << json_escape(rep.nsit[i].first) << "\"}";
  }
  out << "],\"out_of_regime\":[";
  for (size_t i = 0; i < rep.out_of_regime.size(); ++i) {
    if (i) out << ',';
    out << '"' << json_escape(rep.out_of_regime[i]) << '"';
  }
  out << "],\"provenance\":\"" << (rep.sampled ? "sampled" : "exact") << '"';
  out << ",\"regime\":\"" << lgi::regime_name(rep.inequalities.regime) << '"';
  out << ",\"tables\":[";
  for (size_t i = 0; i < rep.tables.size(); ++i) {
    if (i) out << ',';
    const ExperimentRow& row = rep.tables[i];
    out << "{\"name\":\"" << json_escape(row.name) << "\",\"outcomes\":[";
    for (size_t k = 0; k < row.outcomes.size(); ++k) {
      if (k) out << ',';
      out << '"' << json_escape(row.outcomes[k]) << '"';
    }
    out << "],\"std_errors\":[";
    for (size_t k = 0; k < row.std_errors.size(); ++k) {
      if (k) out << ',';
      out << fmt(row.std_errors[k]);
    }
    out << "],\"values\":[";
    for (size_t k = 0; k < row.values.size(); ++k) {
      if (k) out << ',';
      out << fmt(row.values[k]);
    }
    out << "]}";
  }
  out << "],\"version\":\"" << kVersion << "\"}";
  out << '\n';
  return out.str();
}

std::string render_csv(const RunReport& rep) {
  const char* prov = rep.sampled ? "sampled" : "exact";
  std::ostringstream out;
  out << "section,label,outcome,value,std_error,bound,satisfied,provenance\n";
  static const char* kMomentNames[6] = {"q1", "q2", "q3", "c12", "c23", "c13"};
  const double moment_values[6] = {rep.moments.q1,  rep.moments.q2,  rep.moments.q3,
                                   rep.moments.c12, rep.moments.c23, rep.moments.c13};
  for (int i = 0; i < 6; ++i) {
    out << "moments," << kMomentNames[i] << ",," << fmt_short(moment_values[i]) << ','
        << fmt_short(rep.moment_errors[i]) << ",,," << prov << '\n';
  }
  auto ineq_rows = [&](const std::vector<lgi::InequalityValue>& vals) {
    for (const auto& v : vals) {
      out << "inequalities," << v.label << ",," << fmt_short(v.value) << ",,"
          << fmt_short(v.bound) << ',' << (v.satisfied ? "true" : "false") << ',' << prov
          << '\n';
    }
  };
  ineq_rows(rep.inequalities.lg2);
  ineq_rows(rep.inequalities.lg3);
  for (const ExperimentRow& row : rep.tables) {
    for (size_t k = 0; k < row.values.size(); ++k) {
      out << "probabilities," << row.name << ',' << row.outcomes[k] << ','
          << fmt_short(row.values[k]) << ',' << fmt_short(row.std_errors[k]) << ",,," << prov
          << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string render_report(const RunReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? render_json(report) : render_csv(report);
}

void emit_report(const RunReport& report, ReportFormat format,
                 const std::string& destination) {
  const std::string text = render_report(report, format);
  if (destination == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + destination);
  out << text;
  if (!out) throw config_error("failed writing output file: " + destination);
}

std::string render_check(const lgi::MomentSet& m, double bound, ReportFormat format) {
  const lgi::InequalityReport rep = lgi::build_report(m, bound);
  const lgi::JointFeasibility feas = lgi::fine_feasible(m);
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << "label,value,satisfied\n";
    for (const auto& rows : {rep.lg2, rep.lg3}) {
      for (const auto& v : rows) {
        out << v.label << ',' << fmt_short(v.value) << ',' << (v.satisfied ? "true" : "false")
            << '\n';
      }
    }
    return out.str();
  }
  std::ostringstream out;
  out << "{\"bound\":" << fmt(bound) << ",\"feasibility\":";
  write_feasibility_json(out, feas);
  out << ',';
  write_inequalities_json(out, rep);
  out << ",\"moments\":";
  write_moments_json(out, m);
  out << ",\"regime\":\"" << lgi::regime_name(rep.regime) << "\"}\n";
  return out.str();
}

}  // namespace lglab::cli
