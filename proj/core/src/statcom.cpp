#include "frtsim/statcom.hpp"

#include "frtsim/errors.hpp"

namespace frtsim {

void StatcomParams::validate() const {
  if (!(l_f > 0.0)) throw ConfigError("statcom.l_f", "must be > 0");
  if (!(r_f > 0.0)) throw ConfigError("statcom.r_f", "must be > 0");
  if (!(c_dc > 0.0)) throw ConfigError("statcom.c_dc", "must be > 0");
  if (!(v_dc_rated > 0.0)) throw ConfigError("statcom.v_dc_rated", "must be > 0");
  if (!(s_rated > 0.0)) throw ConfigError("statcom.s_rated", "must be > 0");
  if (!(v_ac_rated > 0.0)) throw ConfigError("statcom.v_ac_rated", "must be > 0");
  if (!(i_max > 0.0)) throw ConfigError("statcom.i_max", "must be > 0");
  // The current ceiling may not allow more than the rated apparent power at rated voltage.
  if (i_max * v_ac_rated > s_rated * (1.0 + 1e-12))
    throw ConfigError("statcom.i_max", "exceeds s_rated / v_ac_rated");
  if (!(r_loss > 0.0)) throw ConfigError("statcom.r_loss", "must be > 0");
  if (!(modulation_limit > 0.0)) throw ConfigError("statcom.modulation_limit", "must be > 0");
  if (!(v_dc_min_fraction > 0.0 && v_dc_min_fraction < 1.0))
    throw ConfigError("statcom.v_dc_min_fraction", "must lie in (0, 1)");
}

Vec2 filter_current_derivative(const StatcomState& s, const Vec2& v_t, const Vec2& v,
                               const StatcomParams& p, double omega) {
  if (!s.i_t.finite() || !v_t.finite() || !v.finite() || !std::isfinite(omega))
    throw InvalidInput("filter_current_derivative: non-finite input");
  const Vec2 rhs = -p.r_f * s.i_t + omega * p.l_f * SkewJ::apply(s.i_t) + v_t - v;
  return (1.0 / p.l_f) * rhs;
}

double dc_link_derivative(double v_dc, double p_conv, double p_loss, const StatcomParams& p) {
  if (!(v_dc > p.v_dc_min())) throw InvalidInput("dc_link_derivative: DC link below blocking threshold");
  return (-p_conv - p_loss) / (p.c_dc * v_dc);
}

ConverterOutput converter_voltage(const Vec2& command, double v_dc, const StatcomParams& p) {
  if (!(v_dc > 0.0)) return {{}, false, true};
  const double limit = p.modulation_limit * v_dc;
  const double mag = command.norm();
  if (mag <= limit) return {command, false, false};
  return {command * (limit / mag), true, false};
}

}  // namespace frtsim
