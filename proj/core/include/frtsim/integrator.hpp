#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "frtsim/errors.hpp"

namespace frtsim {

using StateVector = std::vector<double>;
using Derivative = std::function<StateVector(double t, const StateVector& x)>;

enum class Solver { Rk4, Euler };

/// Throws DivergenceError at `t` if any element of `dx` is non-finite.
void require_finite_derivative(const StateVector& dx, double t);

/// Classical fourth-order Runge-Kutta step of x' = f(t, x).
template <class F>
StateVector rk4_step(F&& f, const StateVector& x, double t, double dt) {
  const std::size_t n = x.size();
  StateVector tmp(n);

  const StateVector k1 = f(t, x);
  require_finite_derivative(k1, t);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
  const StateVector k2 = f(t + 0.5 * dt, tmp);
  require_finite_derivative(k2, t);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
  const StateVector k3 = f(t + 0.5 * dt, tmp);
  require_finite_derivative(k3, t);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
  const StateVector k4 = f(t + dt, tmp);
  require_finite_derivative(k4, t);

  StateVector out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

template <class F>
StateVector euler_step(F&& f, const StateVector& x, double t, double dt) {
  const StateVector k1 = f(t, x);
  require_finite_derivative(k1, t);
  StateVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + dt * k1[i];
  return out;
}

template <class F>
StateVector integrate_step(Solver s, F&& f, const StateVector& x, double t, double dt) {
  return s == Solver::Rk4 ? rk4_step(f, x, t, dt) : euler_step(f, x, t, dt);
}

const char* to_string(Solver s);
Solver solver_from_string(const std::string& name);

}  // namespace frtsim
