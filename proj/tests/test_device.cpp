#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>

#include "memsnn/device.hpp"

using namespace memsnn;

// Euler endpoints pinned from tools/oracle_device.py (same update, Python).
namespace {
constexpr double kPot05D_1step = 1.5009391065292097e-09;
constexpr double kPot05D_100us = 1.586622971822246e-09;
constexpr double kDep07D_1step = 2.0998754224598927e-09;
constexpr double kDep07D_200us = 2.0752132188381287e-09;
constexpr double kDepTop_500us = 2.9850444672949533e-09;
constexpr double kDep07D_half = 2.075213540585851e-09;
constexpr double kPosBelowI0_1step = 2.986957775784753e-10;

MemristorState run_steps(double w0, double v, double dt, int steps,
                         const MemristorParams& p) {
  MemristorState s;
  s.w = w0;
  for (int k = 0; k < steps; ++k) s = step_device(s, v, dt, p);
  return s;
}
}  // namespace

TEST_CASE("device parameter validation") {
  MemristorParams p;
  CHECK_NOTHROW(p.validate());
  auto bad = [](auto mut) {
    MemristorParams q;
    mut(q);
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  };
  bad([](MemristorParams& q) { q.D = 0; });
  bad([](MemristorParams& q) { q.mu_v = -1; });
  bad([](MemristorParams& q) { q.R_on = 0; });
  bad([](MemristorParams& q) { q.R_on = q.R_off; });
  bad([](MemristorParams& q) { q.V_T_pos = -0.1; });
  bad([](MemristorParams& q) { q.V_T_neg = 0.5; });
  bad([](MemristorParams& q) { q.i_on = 0; });
  bad([](MemristorParams& q) { q.i_off = 0; });
  bad([](MemristorParams& q) { q.p = 0; });
  bad([](MemristorParams& q) { q.delta_frac = 0.5; });
}

TEST_CASE("window function endpoints and exponent") {
  MemristorParams p;
  CHECK(window_fn(0.0, p) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(window_fn(p.D / 2, p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(window_fn(p.D, p) == doctest::Approx(0.0).epsilon(1e-12));
  p.p = 2;  // f = 1 - (2w/D - 1)^4
  CHECK(window_fn(0.75 * p.D, p) == doctest::Approx(0.9375).epsilon(1e-12));
}

TEST_CASE("memristance interpolates between R_off and R_on") {
  MemristorParams p;
  MemristorState s;
  s.w = 0.0;
  CHECK(memristance(s, p) == doctest::Approx(p.R_off).epsilon(1e-12));
  s.w = p.D;
  CHECK(memristance(s, p) == doctest::Approx(p.R_on).epsilon(1e-12));
  s.w = 0.5 * p.D;
  CHECK(memristance(s, p) == doctest::Approx(3.05e7).epsilon(1e-12));
  CHECK(conductance(s, p) ==
        doctest::Approx(3.278688524590164e-08).epsilon(1e-12));
}

TEST_CASE("Euler endpoints match the reference trajectories") {
  MemristorParams p;
  CHECK(run_steps(0.5 * p.D, 1.4, 1e-6, 1, p).w ==
        doctest::Approx(kPot05D_1step).epsilon(1e-12));
  CHECK(run_steps(0.5 * p.D, 1.4, 1e-6, 100, p).w ==
        doctest::Approx(kPot05D_100us).epsilon(1e-12));
  CHECK(run_steps(0.7 * p.D, -2.6, 1e-6, 1, p).w ==
        doctest::Approx(kDep07D_1step).epsilon(1e-12));
  CHECK(run_steps(0.7 * p.D, -2.6, 1e-6, 200, p).w ==
        doctest::Approx(kDep07D_200us).epsilon(1e-12));
  CHECK(run_steps(p.w_max(), -2.6, 1e-6, 500, p).w ==
        doctest::Approx(kDepTop_500us).epsilon(1e-12));
}

TEST_CASE("halving dt moves the endpoint by far less than 1% of D") {
  MemristorParams p;
  const double full = run_steps(0.7 * p.D, -2.6, 1e-6, 200, p).w;
  const double half = run_steps(0.7 * p.D, -2.6, 5e-7, 400, p).w;
  CHECK(half == doctest::Approx(kDep07D_half).epsilon(1e-12));
  CHECK(std::fabs(full - half) < 0.01 * p.D);
}

TEST_CASE("positive branch below the current crossover drifts down") {
  // At +1.4 V a strongly depressed device carries i < i_0, so the
  // potentiating branch is negative there: writes cannot lift it.
  MemristorParams p;
  const MemristorState s = run_steps(0.1 * p.D, 1.4, 1e-6, 1, p);
  CHECK(s.w < 0.1 * p.D);
  CHECK(s.w == doctest::Approx(kPosBelowI0_1step).epsilon(1e-12));
}

TEST_CASE("sub-threshold voltage is bit-exact no-op over a million steps") {
  MemristorParams p;
  MemristorState s;
  s.w = 0.37 * p.D;
  const double w0 = s.w;
  for (int k = 0; k < 1000000; ++k) s = step_device(s, 1.1, 1e-6, p);
  CHECK(s.w == w0);  // bitwise
  for (int k = 0; k < 1000; ++k) s = step_device(s, -2.4, 1e-6, p);
  CHECK(s.w == w0);
  for (int k = 0; k < 1000; ++k) s = step_device(s, 0.0, 1e-6, p);
  CHECK(s.w == w0);
  // The thresholds themselves are inclusive no-ops; just beyond moves.
  s = step_device(s, 1.2, 1e-6, p);
  CHECK(s.w == w0);
  s = step_device(s, 1.2000001, 1e-6, p);
  CHECK(s.w != w0);
}

TEST_CASE("stuck devices never change") {
  MemristorParams p;
  MemristorState s;
  s.w = 0.5 * p.D;
  s.stuck = true;
  const MemristorState out = step_device(s, 1.4, 1e-3, p);
  CHECK(out.w == s.w);
  CHECK(out.stuck);
}

TEST_CASE("step_device rejects bad inputs") {
  MemristorParams p;
  MemristorState s;
  s.w = 0.5 * p.D;
  CHECK_THROWS_AS(step_device(s, std::nan(""), 1e-6, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      step_device(s, std::numeric_limits<double>::infinity(), 1e-6, p),
      std::invalid_argument);
  CHECK_THROWS_AS(step_device(s, 1.4, 0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(step_device(s, 1.4, -1e-6, p), std::invalid_argument);
}

TEST_CASE("state and conductance stay inside the device range") {
  MemristorParams p;
  MemristorState s;
  s.w = 0.5 * p.D;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uv(-3.0, 2.5);
  std::uniform_real_distribution<double> ut(1e-7, 1e-5);
  for (int k = 0; k < 10000; ++k) {
    s = step_device(s, uv(rng), ut(rng), p);
    CHECK(s.w >= p.w_min());
    CHECK(s.w <= p.w_max());
    const double G = conductance(s, p);
    CHECK(G >= p.G_min());
    CHECK(G <= p.G_max());
  }
}

TEST_CASE("parameter dispersion keeps draws physical") {
  MemristorParams nominal;
  std::mt19937_64 rng(11);
  double sum_ron = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const MemristorParams q = perturb_params(nominal, 0.05, 0.05, rng);
    CHECK(q.R_on > 0.0);
    CHECK(q.R_on < q.R_off);
    CHECK(q.V_T_pos > 0.0);
    CHECK(q.V_T_neg < 0.0);
    CHECK(q.D == nominal.D);
    CHECK(q.mu_v == nominal.mu_v);
    sum_ron += q.R_on;
  }
  CHECK(sum_ron / 1000 ==
        doctest::Approx(nominal.R_on).epsilon(0.01));  // mean near nominal
  const MemristorParams same = perturb_params(nominal, 0.0, 0.0, rng);
  CHECK(same.R_on == nominal.R_on);
  CHECK(same.V_T_neg == nominal.V_T_neg);
}
