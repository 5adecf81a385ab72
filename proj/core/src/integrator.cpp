#include "frtsim/integrator.hpp"

namespace frtsim {

void require_finite_derivative(const StateVector& dx, double t) {
  for (double v : dx) {
    if (!std::isfinite(v)) throw DivergenceError(t, "non-finite state derivative");
  }
}

const char* to_string(Solver s) { return s == Solver::Rk4 ? "rk4" : "euler"; }

Solver solver_from_string(const std::string& name) {
  if (name == "rk4") return Solver::Rk4;
  if (name == "euler") return Solver::Euler;
  throw ConfigError("sim.solver", "unknown solver '" + name + "' (expected rk4 or euler)");
}

}  // namespace frtsim
