#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lglab/protocols.hpp"
#include "oracles.hpp"

using namespace lglab;
using protocols::CtvmMode;
using protocols::DetectorModel;
using protocols::InmGate;
using protocols::SpinModel;
using qcore::BlochVector;
using qcore::QubitState;

namespace {

constexpr double kOmegaT2 = 3.0 * M_PI / 10.0;

QubitState rho2() { return qcore::density_from_bloch({0.951, 0.0, 0.309}); }

double round2(double v) { return std::round(v * 100.0) / 100.0; }
double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

bool multiset_match_2dp(std::vector<double> got, std::vector<double> want) {
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (size_t i = 0; i < got.size(); ++i) {
    if (std::abs(round2(got[i]) - want[i]) > 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("expectation_q at the published points") {
  const SpinModel model{1.0};
  CHECK(protocols::expectation_q({0.951, 0.0, 0.309}, model, 0.0) ==
        doctest::Approx(0.309).epsilon(1e-12));
  CHECK(protocols::expectation_q({0.0, 0.0, 0.0}, model, 1.7) == doctest::Approx(0.0));
  CHECK(protocols::expectation_q({0.951, 0.0, 0.309}, model, 3.0 * M_PI / 5.0) ==
        doctest::Approx(-0.0955).epsilon(1e-3));

  // Agreement with the density-matrix route.
  oracles::Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const BlochVector v = rng.bloch_in_ball();
    const double t = rng.uniform(0.0, 10.0);
    const QubitState evolved =
        qcore::evolve(qcore::density_from_bloch(v), qcore::spin_propagator(1.0, t));
    CHECK(std::abs(protocols::expectation_q(v, model, t) - evolved.expect_z()) <= 1e-12);
  }
}

TEST_CASE("projective_two_time matches the published table per outcome") {
  const SpinModel model{1.0};
  const auto p = protocols::projective_two_time(rho2(), model, 0.0, kOmegaT2);
  CHECK(round2(p.pp) == doctest::Approx(0.52));
  CHECK(round2(p.pm) == doctest::Approx(0.13));
  CHECK(round2(p.mp) == doctest::Approx(0.07));
  CHECK(round2(p.mm) == doctest::Approx(0.27));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));

  // Coincident times: repeated measurement reproduces the first outcome.
  const auto same = protocols::projective_two_time(rho2(), model, 0.7, 0.7);
  CHECK(same.pm == doctest::Approx(0.0));
  CHECK(same.mp == doctest::Approx(0.0));

  // The marginal over the later outcome is the single-time distribution.
  oracles::Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    const BlochVector v = rng.bloch_in_ball();
    const double ti = rng.uniform(0.0, 5.0);
    const double tj = ti + rng.uniform(0.0, 5.0);
    const auto t = protocols::projective_two_time(qcore::density_from_bloch(v), model, ti, tj);
    CHECK(std::abs((t.pp + t.pm) - (1.0 + protocols::expectation_q(v, model, ti)) / 2.0) <=
          1e-12);
  }

  CHECK_THROWS_AS(protocols::projective_two_time(rho2(), model, 1.0, 0.5), numerics_error);
}

TEST_CASE("projective_two_time agrees with the projector-chain oracle") {
  const SpinModel model{1.0};
  oracles::Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const BlochVector v = rng.bloch_pure();
    const double ti = rng.uniform(0.0, 5.0);
    const double tj = ti + rng.uniform(0.0, 5.0);
    const QubitState s = qcore::density_from_bloch(v);
    const auto got = protocols::projective_two_time(s, model, ti, tj);
    const auto want = oracles::projector_chain_two_time(
        s.matrix(), qcore::spin_propagator(1.0, ti), qcore::spin_propagator(1.0, tj - ti));
    CHECK(std::abs(got.pp - want.pp) <= 1e-12);
    CHECK(std::abs(got.pm - want.pm) <= 1e-12);
    CHECK(std::abs(got.mp - want.mp) <= 1e-12);
    CHECK(std::abs(got.mm - want.mm) <= 1e-12);
  }
}

TEST_CASE("correlator_from_probs") {
  CHECK(protocols::correlator_from_probs({1.0, 0.0, 0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(protocols::correlator_from_probs({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(0.0));
  const SpinModel model{1.0};
  const auto p = protocols::projective_two_time(rho2(), model, 0.0, kOmegaT2);
  CHECK(round2(protocols::correlator_from_probs(p)) == doctest::Approx(0.59));
}

TEST_CASE("inm_circuit diagonals per gate") {
  const SpinModel model{1.0};

  const auto cnot = protocols::inm_circuit(rho2(), model, 0.0, kOmegaT2, InmGate::Cnot);
  CHECK(multiset_match_2dp(cnot, {0.07, 0.13, 0.27, 0.52}));
  // Fixed basis order |sa>: s_j from the system bit, s_i recorded by the ancilla.
  CHECK(round2(cnot[0]) == doctest::Approx(0.52));  // (s_i,s_j) = (+,+)
  CHECK(round2(cnot[1]) == doctest::Approx(0.07));  // (-,+)
  CHECK(round2(cnot[2]) == doctest::Approx(0.13));  // (+,-)
  CHECK(round2(cnot[3]) == doctest::Approx(0.27));  // (-,-)

  const auto anti = protocols::inm_circuit(rho2(), model, 0.0, kOmegaT2, InmGate::AntiCnot);
  CHECK(multiset_match_2dp(anti, {0.07, 0.13, 0.27, 0.52}));
  CHECK(round2(anti[0]) == doctest::Approx(0.07));
  CHECK(round2(anti[1]) == doctest::Approx(0.52));
  CHECK(round2(anti[2]) == doctest::Approx(0.27));
  CHECK(round2(anti[3]) == doctest::Approx(0.13));

  const auto trivial =
      protocols::inm_circuit(qcore::ground_state(), model, 0.0, 0.0, InmGate::Cnot);
  CHECK(trivial[0] == doctest::Approx(1.0));
  CHECK(trivial[1] + trivial[2] + trivial[3] == doctest::Approx(0.0));
}

TEST_CASE("inm circuit diagonals factor as a, a', a'' products") {
  const SpinModel model{1.0};
  const protocols::UnitaryEvolution evo(model);
  oracles::Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const BlochVector v = rng.bloch_in_ball();
    const double ti = rng.uniform(0.0, 4.0);
    const double tj = ti + rng.uniform(0.0, 4.0);
    const QubitState s = qcore::density_from_bloch(v);
    const double a = evo.advance(s, 0.0, ti).a();
    const double a1 = evo.advance(qcore::ground_state(), ti, tj).a();
    const double a2 = evo.advance(qcore::excited_state(), ti, tj).a();
    const auto diag = protocols::inm_circuit(s, model, ti, tj, InmGate::Cnot);
    CHECK(std::abs(diag[0] - a * a1) <= 1e-10);
    CHECK(std::abs(diag[1] - (1.0 - a) * a2) <= 1e-10);
    CHECK(std::abs(diag[2] - a * (1.0 - a1)) <= 1e-10);
    CHECK(std::abs(diag[3] - (1.0 - a) * (1.0 - a2)) <= 1e-10);
  }
}

TEST_CASE("inm_correlator equals cos(w dt) for any state and time pair") {
  const SpinModel model{1.0};
  CHECK(round2(protocols::inm_correlator(rho2(), model, 0.0, kOmegaT2)) ==
        doctest::Approx(0.59));
  CHECK(protocols::inm_correlator(rho2(), model, 0.4, 0.4) == doctest::Approx(1.0));
  CHECK(protocols::inm_correlator(rho2(), model, 0.0, 2.0 * kOmegaT2) ==
        doctest::Approx(-0.3090).epsilon(1e-4));

  oracles::Rng rng(19);
  for (int i = 0; i < 1000; ++i) {
    const BlochVector v = rng.bloch_in_ball();
    const double ti = rng.uniform(0.0, 4.0);
    const double dt = rng.uniform(0.0, 2.0 * M_PI);
    const double c =
        protocols::inm_correlator(qcore::density_from_bloch(v), model, ti, ti + dt);
    CHECK(std::abs(c - std::cos(dt)) <= 1e-10);
  }

  // Systematic sweep of the interval with a fresh state per point.
  for (int i = 0; i < 1000; ++i) {
    const double dt = 2.0 * M_PI * i / 1000.0;
    const QubitState s = qcore::density_from_bloch(rng.bloch_in_ball());
    CHECK(std::abs(protocols::inm_correlator(s, model, 0.3, 0.3 + dt) - std::cos(dt)) <=
          1e-10);
  }
}

TEST_CASE("INM kept halves equal the projective rows, damped included") {
  const SpinModel model{1.3};
  oracles::Rng rng(21);

  noise::RelaxationParams relax;
  relax.t1 = 8.66;
  relax.t2 = 1.10;
  relax.delay = 0.4;
  relax.equilibrium_z = 0.0;
  const protocols::UnitaryEvolution unitary(model);
  const protocols::DampedEvolution damped(model, relax, 0.5);

  for (const protocols::IntervalEvolution* evo :
       {static_cast<const protocols::IntervalEvolution*>(&unitary),
        static_cast<const protocols::IntervalEvolution*>(&damped)}) {
    for (int i = 0; i < 300; ++i) {
      const QubitState s = qcore::density_from_bloch(rng.bloch_in_ball());
      const double ti = rng.uniform(0.0, 3.0);
      const double tj = ti + rng.uniform(0.0, 3.0);
      const auto inm = protocols::inm_two_time(s, *evo, ti, tj);
      const auto proj = protocols::projective_two_time(s, *evo, ti, tj);
      CHECK(std::abs(inm.pp - proj.pp) <= 1e-10);
      CHECK(std::abs(inm.pm - proj.pm) <= 1e-10);
      CHECK(std::abs(inm.mp - proj.mp) <= 1e-10);
      CHECK(std::abs(inm.mm - proj.mm) <= 1e-10);
    }
  }
}

TEST_CASE("symmetrized operator correlator equals cos(w dt)") {
  oracles::Rng rng(29);
  for (int i = 0; i < 500; ++i) {
    const double ti = rng.uniform(0.0, 5.0);
    const double tj = ti + rng.uniform(0.0, 5.0);
    const auto heisenberg_q = [](double t) {
      const qcore::Mat u = qcore::spin_propagator(1.0, t);
      return u.dagger() * qcore::pauli_z() * u;
    };
    const qcore::Mat qi = heisenberg_q(ti);
    const qcore::Mat qj = heisenberg_q(tj);
    const qcore::Mat sym = (qi * qj + qj * qi) * qcore::cplx{0.5, 0.0};
    const QubitState s = qcore::density_from_bloch(rng.bloch_in_ball());
    const double c = (sym * s.matrix()).trace().real();
    CHECK(std::abs(c - std::cos(tj - ti)) <= 1e-12);
  }
}

TEST_CASE("ctvm_p1 at the operating point and in both modes") {
  const DetectorModel detector{1.0, 0.11};

  const double p1_t = protocols::ctvm_p1(rho2(), detector, kOmegaT2);
  CHECK(round3(p1_t) == doctest::Approx(0.010));

  const double p1_2t = protocols::ctvm_p1(rho2(), detector, 2.0 * kOmegaT2);
  CHECK(round3(p1_2t) == doctest::Approx(0.031));

  const DetectorModel off{1.0, 0.0};
  CHECK(protocols::ctvm_p1(rho2(), off, kOmegaT2) == doctest::Approx(0.0));

  // Exact mode equals the closed form for arbitrary inputs.
  oracles::Rng rng(37);
  for (int i = 0; i < 500; ++i) {
    const DetectorModel d{rng.uniform(0.5, 3.0), rng.uniform(0.01, 0.6)};
    const double duration = rng.uniform(0.0, 6.0);
    const QubitState s = qcore::density_from_bloch(rng.bloch_in_ball());
    const double exact = protocols::ctvm_p1(s, d, duration);
    const double ratio = d.lambda * d.lambda * d.omega * d.omega / (d.big_omega() * d.big_omega());
    const double closed = 2.0 * ratio * (1.0 - std::cos(d.big_omega() * duration));
    CHECK(std::abs(exact - closed) <= 1e-12);
  }

  // The small-lambda mode drops the frequency dressing.
  const double approx = protocols::ctvm_p1(rho2(), detector, kOmegaT2, CtvmMode::SmallLambda);
  CHECK(approx == doctest::Approx(2.0 * 0.11 * 0.11 * (1.0 - std::cos(kOmegaT2))).epsilon(1e-12));
}

TEST_CASE("ctvm_correlator inversion") {
  CHECK(protocols::ctvm_correlator(0.010, 0.11) == doctest::Approx(0.5868).epsilon(1e-3));
  CHECK(protocols::ctvm_correlator(0.0, 0.3) == doctest::Approx(1.0));

  const DetectorModel detector{1.0, 0.11};
  const double p1_2t = protocols::ctvm_p1(rho2(), detector, 2.0 * kOmegaT2);
  const double c13 = protocols::ctvm_correlator(p1_2t, 0.11);
  CHECK(c13 == doctest::Approx(-0.29).epsilon(0.005));

  CHECK_THROWS_AS(protocols::ctvm_correlator(0.01, 0.0), numerics_error);

  // Large sampled p1 pushes the value out of regime; it is not clamped.
  const double wild = protocols::ctvm_correlator(0.2, 0.11);
  CHECK(wild < -1.0);
  CHECK(protocols::correlator_out_of_regime(wild));
  CHECK_FALSE(protocols::correlator_out_of_regime(-0.9999));
}

TEST_CASE("ctvm small-lambda deviation is quadratic in lambda") {
  for (const double wdt : {0.1, 0.5, 1.0, 1.5, M_PI / 2.0}) {
    const auto deviation = [wdt](double lambda) {
      const DetectorModel d{1.0, lambda};
      const double p1 = protocols::ctvm_p1(qcore::maximally_mixed(), d, wdt);
      return std::abs(protocols::ctvm_correlator(p1, lambda) - std::cos(wdt));
    };
    const double ratio = deviation(0.05) / deviation(0.025);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("sample_shots determinism and statistics") {
  const std::vector<double> sure = {1.0, 0.0};
  const auto certain = protocols::sample_shots(sure, 1000, 42);
  CHECK(certain[0].mean == doctest::Approx(1.0));
  CHECK(certain[0].std_error == doctest::Approx(0.0));

  const std::vector<double> fair = {0.5, 0.5};
  const auto est = protocols::sample_shots(fair, 10000, 7);
  CHECK(est[0].std_error == doctest::Approx(0.005).epsilon(0.02));
  CHECK(est[0].mean + est[1].mean == doctest::Approx(1.0));

  // Bit-identical repetition for a fixed seed.
  const auto again = protocols::sample_shots(fair, 10000, 7);
  CHECK(est[0].mean == again[0].mean);
  const auto other = protocols::sample_shots(fair, 10000, 8);
  CHECK(est[0].mean != other[0].mean);

  CHECK_THROWS_AS(protocols::sample_shots(fair, 0, 1), numerics_error);
}

TEST_CASE("sampled frequencies pass a chi-square goodness-of-fit at 1e-6") {
  const SpinModel model{1.0};
  const auto table = protocols::projective_two_time(rho2(), model, 0.0, kOmegaT2);
  const std::vector<double> probs = {table.pp, table.pm, table.mp, table.mm};
  const long long n = 1000000;
  const auto est = protocols::sample_shots(probs, n, 12345);
  double chi2 = 0.0;
  for (size_t k = 0; k < probs.size(); ++k) {
    const double expected = probs[k] * static_cast<double>(n);
    const double observed = est[k].mean * static_cast<double>(n);
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  CHECK(chi2 <= oracles::chi2_critical(3, 1e-6));
}

TEST_CASE("shot budget for a 0.02 correlator error bar") {
  const SpinModel model{1.0};
  const auto table = protocols::projective_two_time(rho2(), model, 0.0, kOmegaT2);
  const long long n = protocols::shots_for_correlator_stderr(table, 0.02);
  CHECK(n == 2027);  // error propagation through the kept-halves combination

  // The budget is honest: the realized spread over many seeds matches.
  double sq = 0.0;
  const int reps = 200;
  const double exact_c = table.correlator();
  for (int r = 0; r < reps; ++r) {
    const auto cnot = protocols::sample_shots(
        {table.pp, table.mp, table.pm, table.mm}, n, 1000 + r);
    const auto anti = protocols::sample_shots(
        {table.mp, table.pp, table.mm, table.pm}, n, 5000 + r);
    const double c = cnot[0].mean - cnot[2].mean - anti[0].mean + anti[2].mean;
    sq += (c - exact_c) * (c - exact_c);
  }
  const double realized = std::sqrt(sq / reps);
  CHECK(realized == doctest::Approx(0.02).epsilon(0.15));
}
