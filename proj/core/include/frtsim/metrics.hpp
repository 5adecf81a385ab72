#pragma once

#include "frtsim/network.hpp"
#include "frtsim/timeseries.hpp"

namespace frtsim {

struct Metrics {
  double v_max{0.0};                 // p.u.
  double v_min{0.0};                 // p.u.
  double overvoltage_percent{0.0};   // max(0, v_max - 1) * 100
  double max_deviation{0.0};         // max |v - 1|, p.u.
  double post_fault_max_deviation{0.0};  // after fault clearing
  double fault_min_voltage{0.0};     // p.u., inside the fault window
  /// Time after clearing from which v stays >= 0.98 p.u.; negative if never.
  double recovery_time{-1.0};
  /// Time after clearing from which |v - 1| <= 0.02 p.u. holds; negative if never.
  double settling_time{-1.0};
  double peak_statcom_q{0.0};        // var, largest |Q| injected
  double post_fault_mean_statcom_q{0.0};
  double post_fault_mean_grid_q{0.0};
  double post_fault_max_grid_q{0.0};
  double post_fault_min_grid_q{0.0};
  double mean_grid_p{0.0};           // W
  bool diverged{false};
};

/// Metrics over the "v_pcc" trace and power columns. Throws InvalidInput on
/// an empty series.
Metrics compute_metrics(const TimeSeries& ts, const FaultSpec& fault, bool diverged = false);

}  // namespace frtsim
