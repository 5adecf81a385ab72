#include "frtsim/frames.hpp"

#include "frtsim/errors.hpp"

namespace frtsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kThird = kTwoPi / 3.0;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite");
}

}  // namespace

Angle::Angle(double radians) : rad_(radians) { require_finite(radians, "angle"); }

Angle Angle::wrapped() const { return Angle(wrap_angle(rad_)); }

double wrap_angle(double radians) {
  require_finite(radians, "angle");
  double w = std::fmod(radians, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi after the shift
  if (w >= kTwoPi) w = 0.0;
  return w;
}

DqZero park(Angle theta, const ThreePhase& x) {
  require_finite(x.a, "phase a");
  require_finite(x.b, "phase b");
  require_finite(x.c, "phase c");
  const double th = theta.radians();
  const double k = std::sqrt(2.0 / 3.0);
  const double s0 = std::sin(th), s1 = std::sin(th - kThird), s2 = std::sin(th + kThird);
  const double c0 = std::cos(th), c1 = std::cos(th - kThird), c2 = std::cos(th + kThird);
  return {
      k * (s0 * x.a + s1 * x.b + s2 * x.c),
      k * (c0 * x.a + c1 * x.b + c2 * x.c),
      k * std::numbers::sqrt2 / 2.0 * (x.a + x.b + x.c),
  };
}

ThreePhase inverse_park(Angle theta, const DqZero& x) {
  require_finite(x.d, "d component");
  require_finite(x.q, "q component");
  require_finite(x.zero, "zero component");
  const double th = theta.radians();
  const double k = std::sqrt(2.0 / 3.0);
  const double z = std::numbers::sqrt2 / 2.0 * x.zero;
  return {
      k * (std::sin(th) * x.d + std::cos(th) * x.q + z),
      k * (std::sin(th - kThird) * x.d + std::cos(th - kThird) * x.q + z),
      k * (std::sin(th + kThird) * x.d + std::cos(th + kThird) * x.q + z),
  };
}

Vec2 rotate_dq(double omega, const Vec2& v) {
  require_finite(omega, "omega");
  if (!v.finite()) throw InvalidInput("dq vector must be finite");
  return omega * SkewJ::apply(v);
}

ThreePhase symmetric_three_phase(double amplitude, double theta) {
  return {amplitude * std::sin(theta), amplitude * std::sin(theta - kThird),
          amplitude * std::sin(theta + kThird)};
}

}  // namespace frtsim
