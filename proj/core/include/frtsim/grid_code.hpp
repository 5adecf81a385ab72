#pragma once

#include <string>
#include <vector>

#include "frtsim/network.hpp"
#include "frtsim/timeseries.hpp"

namespace frtsim {

/// Lower bound on PCC voltage versus time since fault inception. Region 2
/// holds the sag floor until t0; region 3 ramps linearly from the floor to
/// the recovery level at t1 and holds it until window_end.
struct FrtEnvelope {
  double t0{0.15};            // s after fault start
  double t1{0.7};             // s after fault start
  double window_end{1.0};     // s after fault start
  double sag_floor{0.15};     // p.u.
  double recovery_level{0.8}; // p.u.

  void validate() const;
  /// Required minimum voltage at time `since_fault` (negative means pre-fault: no bound).
  double lower_bound(double since_fault) const;
  /// 2 or 3; 1 before the fault.
  int region(double since_fault) const;
};

struct EnvelopeViolation {
  double time{0.0};    // s, absolute
  double voltage{0.0}; // p.u.
  double bound{0.0};   // p.u.
  double margin{0.0};  // voltage - bound, negative
  int region{0};
};

struct GridCodeVerdict {
  bool pass{true};
  bool complete{true};  // false when the trace ends inside the window
  double min_margin{0.0};
  std::size_t samples_checked{0};
  std::vector<EnvelopeViolation> violations;
};

/// Sample-wise check of v (p.u.) against the envelope over
/// [fault.t_start, fault.t_start + window_end]. A sample exactly on the bound passes.
GridCodeVerdict grid_code_check(std::span<const double> time, std::span<const double> v_pu,
                                const FrtEnvelope& env, const FaultSpec& fault);

/// Same, reading the "time" and "v_pcc" columns.
GridCodeVerdict grid_code_check(const TimeSeries& ts, const FrtEnvelope& env, const FaultSpec& fault);

std::string describe(const EnvelopeViolation& v);

}  // namespace frtsim
