#include "frtsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frtsim/errors.hpp"

namespace frtsim {

namespace {

/// First time >= t_from after which pred(v) holds for every later sample,
/// relative to t_from; -1 if it never settles.
template <class Pred>
double hold_time(std::span<const double> time, std::span<const double> v, double t_from, Pred pred) {
  std::size_t first_ok = time.size();
  for (std::size_t k = time.size(); k-- > 0;) {
    if (time[k] < t_from) break;
    if (!pred(v[k])) break;
    first_ok = k;
  }
  if (first_ok == time.size()) return -1.0;
  return std::max(time[first_ok] - t_from, 0.0);
}

double mean_over(std::span<const double> time, std::span<const double> y, double t_from) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < time.size(); ++k) {
    if (time[k] < t_from) continue;
    sum += y[k];
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace

Metrics compute_metrics(const TimeSeries& ts, const FaultSpec& fault, bool diverged) {
  if (ts.empty()) throw InvalidInput("compute_metrics: empty series");
  const auto time = ts.column("time");
  const auto v = ts.column("v_pcc");
  Metrics m;
  m.diverged = diverged;
  m.v_max = *std::max_element(v.begin(), v.end());
  m.v_min = *std::min_element(v.begin(), v.end());
  m.overvoltage_percent = std::max(0.0, m.v_max - 1.0) * 100.0;
  m.fault_min_voltage = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double dev = std::abs(v[k] - 1.0);
    m.max_deviation = std::max(m.max_deviation, dev);
    if (time[k] >= fault.t_end) m.post_fault_max_deviation = std::max(m.post_fault_max_deviation, dev);
    if (time[k] >= fault.t_start && time[k] < fault.t_end) m.fault_min_voltage = std::min(m.fault_min_voltage, v[k]);
  }
  if (!std::isfinite(m.fault_min_voltage)) m.fault_min_voltage = m.v_min;

  m.recovery_time = hold_time(time, v, fault.t_end, [](double x) { return x >= 0.98; });
  m.settling_time = hold_time(time, v, fault.t_end, [](double x) { return std::abs(x - 1.0) <= 0.02; });
  // A run that never faulted (or ended before clearing) has nothing to recover from.
  if (time.back() < fault.t_end && !diverged) m.recovery_time = m.settling_time = 0.0;

  if (ts.has("q_statcom")) {
    const auto q = ts.column("q_statcom");
    for (double x : q) m.peak_statcom_q = std::max(m.peak_statcom_q, std::abs(x));
    m.post_fault_mean_statcom_q = mean_over(time, q, fault.t_end);
  }
  if (ts.has("q_grid")) {
    const auto q = ts.column("q_grid");
    m.post_fault_mean_grid_q = mean_over(time, q, fault.t_end);
    m.post_fault_max_grid_q = -std::numeric_limits<double>::infinity();
    m.post_fault_min_grid_q = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (time[k] < fault.t_end) continue;
      m.post_fault_max_grid_q = std::max(m.post_fault_max_grid_q, q[k]);
      m.post_fault_min_grid_q = std::min(m.post_fault_min_grid_q, q[k]);
    }
    if (!std::isfinite(m.post_fault_max_grid_q)) m.post_fault_max_grid_q = m.post_fault_min_grid_q = 0.0;
  }
  if (ts.has("p_grid")) m.mean_grid_p = mean_over(time, ts.column("p_grid"), time.front());
  return m;
}

}  // namespace frtsim
