// Flat key = value experiment configuration.
//
// Recognized keys (dotted keys group related fields):
//   omega                    rad/s, default 1.0
//   omega_t                  radians per base interval, required
//   times                    comma list of three interval multipliers, default 0,1,2
//   initial.vx/.vy/.vz       Bloch vector of the initial state, required
//   protocol                 projective | inm | ctvm, required
//   lambda                   detector coupling, required for ctvm
//   shots                    per-experiment shot count; absent = exact mode
//   seed                     base RNG seed, default 0
//   bound_mode               zero | ctvm_shifted, default zero
//   relaxation.t1/.t2        relaxation times, seconds
//   relaxation.delay         engineered delay per interval, seconds
//   relaxation.equilibrium_z longitudinal fixed point, default 1
//   relaxation.ancilla       true to relax the ancilla during pair segments
//   relaxation.calibrate_q2  fit relaxation.delay so <Q2> matches this target

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "lglab/noise.hpp"
#include "lglab/qcore.hpp"

namespace lglab::cli {

enum class Protocol { Projective, Inm, Ctvm };
enum class BoundMode { Zero, CtvmShifted };

const char* protocol_name(Protocol p);
const char* bound_mode_name(BoundMode m);

struct ExperimentConfig {
  double omega = 1.0;
  double omega_t = 0.0;
  std::array<double, 3> times = {0.0, 1.0, 2.0};
  qcore::BlochVector initial;
  Protocol protocol = Protocol::Projective;
  double lambda = 0.0;
  std::optional<noise::RelaxationParams> relaxation;
  std::optional<double> calibrate_q2;
  std::optional<long long> shots;
  std::uint64_t seed = 0;
  BoundMode bound_mode = BoundMode::Zero;

  double t_unit() const { return omega_t / omega; }
  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace lglab::cli
