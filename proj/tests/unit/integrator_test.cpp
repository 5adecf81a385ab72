#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "frtsim/errors.hpp"
#include "frtsim/integrator.hpp"

using namespace frtsim;

namespace {

StateVector decay(double, const StateVector& x) { return {-x[0]}; }

}  // namespace

TEST(Rk4, ZeroDerivativeKeepsState) {
  const StateVector x{1.5, -2.0};
  const StateVector y = rk4_step([](double, const StateVector& s) { return StateVector(s.size(), 0.0); }, x, 0.0, 0.1);
  EXPECT_EQ(y, x);
}

TEST(Rk4, ExponentialStep) {
  const StateVector y = rk4_step(decay, {1.0}, 0.0, 0.1);
  EXPECT_NEAR(y[0], 0.9048375, 1e-7);
  EXPECT_NEAR(y[0], std::exp(-0.1), 1e-7);
}

TEST(Rk4, FourthOrderConvergence) {
  auto err = [](double dt) {
    StateVector x{1.0};
    const int n = static_cast<int>(std::lround(1.0 / dt));
    for (int k = 0; k < n; ++k) x = rk4_step(decay, x, k * dt, dt);
    return std::abs(x[0] - std::exp(-1.0));
  };
  EXPECT_NEAR(err(0.1) / err(0.05), 16.0, 1.0);
}

TEST(Euler, FirstOrderStep) {
  const StateVector y = euler_step(decay, {1.0}, 0.0, 0.1);
  EXPECT_DOUBLE_EQ(y[0], 0.9);
  EXPECT_EQ(integrate_step(Solver::Euler, decay, {1.0}, 0.0, 0.1), y);
}

TEST(Integrator, NonFiniteDerivativeIsDivergence) {
  auto bad = [](double, const StateVector&) { return StateVector{std::numeric_limits<double>::quiet_NaN()}; };
  try {
    rk4_step(bad, {1.0}, 0.25, 0.1);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_DOUBLE_EQ(e.time(), 0.25);
  }
  EXPECT_THROW(euler_step(bad, {1.0}, 0.0, 0.1), DivergenceError);
}

TEST(Integrator, SolverNames) {
  EXPECT_EQ(solver_from_string("rk4"), Solver::Rk4);
  EXPECT_EQ(solver_from_string("euler"), Solver::Euler);
  EXPECT_STREQ(to_string(Solver::Rk4), "rk4");
  EXPECT_THROW(solver_from_string("midpoint"), ConfigError);
}
